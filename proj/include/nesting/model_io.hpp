#pragma once

// Text serialization of LinearModel: LP format (CPLEX dialect) and fixed
// MPS, plus parsers for both so emitted files can be verified by round trip.

#include <cctype>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nesting/model.hpp"

namespace nesting {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_coeff(double c) {
  std::ostringstream os;
  os << std::setprecision(17) << c;
  return os.str();
}

inline void write_terms(std::ostream& os, const LinearModel& m,
                        const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const LinearTerm& t : terms) {
    const double c = t.coeff;
    if (first) {
      if (c < 0) os << "- ";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const double a = c < 0 ? -c : c;
    if (a != 1.0) os << format_coeff(a) << " ";
    os << m.variables[static_cast<std::size_t>(t.var)].name;
  }
  if (first) os << "0 " << m.variables.front().name;
}

}  // namespace detail

inline void emit_lp(std::ostream& os, const LinearModel& m) {
  os << "\\ " << m.name << "\n";
  os << "Minimize\n obj: ";
  detail::write_terms(os, m, m.objective);
  os << "\nSubject To\n";
  for (const LinearConstraint& c : m.constraints) {
    os << " " << c.name << ": ";
    detail::write_terms(os, m, c.terms);
    switch (c.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::Equal: os << " = "; break;
      case Sense::GreaterEqual: os << " >= "; break;
    }
    os << detail::format_coeff(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const ModelVariable& v : m.variables) {
    if (v.kind == VarKind::Continuous)
      os << " " << detail::format_coeff(v.lower) << " <= " << v.name
         << " <= " << detail::format_coeff(v.upper) << "\n";
  }
  os << "Binaries\n";
  for (const ModelVariable& v : m.variables) {
    if (v.kind == VarKind::Binary) os << " " << v.name << "\n";
  }
  os << "End\n";
}

namespace detail {

// MPS columns are limited in practice; long names are mangled to a short
// unique form. The mapping is deterministic per model.
inline std::vector<std::string> mps_names(const LinearModel& m) {
  std::vector<std::string> out;
  out.reserve(m.variables.size());
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const std::string& n = m.variables[i].name;
    out.push_back(n.size() <= 8 ? n : "v" + std::to_string(i));
  }
  std::map<std::string, int> seen;
  for (const std::string& n : out) {
    if (++seen[n] > 1) throw FormatError("name collision in MPS mangling: " + n);
  }
  return out;
}

inline std::vector<std::string> mps_row_names(const LinearModel& m) {
  std::vector<std::string> out;
  out.reserve(m.constraints.size());
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    const std::string& n = m.constraints[i].name;
    out.push_back(n.size() <= 8 ? n : "c" + std::to_string(i));
  }
  std::map<std::string, int> seen;
  for (const std::string& n : out) {
    if (++seen[n] > 1) throw FormatError("row name collision in MPS mangling: " + n);
  }
  return out;
}

}  // namespace detail

inline void emit_mps(std::ostream& os, const LinearModel& m) {
  const std::vector<std::string> vnames = detail::mps_names(m);
  const std::vector<std::string> rnames = detail::mps_row_names(m);

  os << "NAME          " << m.name << "\n";
  os << "ROWS\n N  COST\n";
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    char s = 'L';
    switch (m.constraints[i].sense) {
      case Sense::LessEqual: s = 'L'; break;
      case Sense::Equal: s = 'E'; break;
      case Sense::GreaterEqual: s = 'G'; break;
    }
    os << " " << s << "  " << rnames[i] << "\n";
  }

  // column-major entries: objective + constraint coefficients per variable
  std::vector<std::vector<std::pair<std::string, double>>> cols(
      m.variables.size());
  for (const LinearTerm& t : m.objective)
    cols[static_cast<std::size_t>(t.var)].emplace_back("COST", t.coeff);
  for (std::size_t i = 0; i < m.constraints.size(); ++i)
    for (const LinearTerm& t : m.constraints[i].terms)
      cols[static_cast<std::size_t>(t.var)].emplace_back(rnames[i], t.coeff);

  os << "COLUMNS\n";
  bool in_int = false;
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const bool is_int = m.variables[i].kind == VarKind::Binary;
    if (is_int && !in_int) {
      os << "    MARKER                 'MARKER'                 'INTORG'\n";
      in_int = true;
    } else if (!is_int && in_int) {
      os << "    MARKER                 'MARKER'                 'INTEND'\n";
      in_int = false;
    }
    for (const auto& [row, coeff] : cols[i]) {
      os << "    " << std::left << std::setw(10) << vnames[i] << std::setw(10)
         << row << std::right << detail::format_coeff(coeff) << "\n";
    }
  }
  if (in_int)
    os << "    MARKER                 'MARKER'                 'INTEND'\n";

  os << "RHS\n";
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    if (m.constraints[i].rhs != 0.0)
      os << "    RHS       " << std::left << std::setw(10) << rnames[i]
         << std::right << detail::format_coeff(m.constraints[i].rhs) << "\n";
  }

  os << "BOUNDS\n";
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const ModelVariable& v = m.variables[i];
    if (v.kind == VarKind::Binary) {
      os << " BV BND       " << vnames[i] << "\n";
    } else {
      os << " LO BND       " << std::left << std::setw(10) << vnames[i]
         << std::right << detail::format_coeff(v.lower) << "\n";
      os << " UP BND       " << std::left << std::setw(10) << vnames[i]
         << std::right << detail::format_coeff(v.upper) << "\n";
    }
  }
  os << "ENDATA\n";
}

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline bool is_lp_section(const std::string& line, const char* kw) {
  std::string t;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c)))
      t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::string k;
  for (const char* p = kw; *p; ++p)
    k += static_cast<char>(std::tolower(static_cast<unsigned char>(*p)));
  return t == k;
}

// Parses "[name:] [+-] [coeff] var [+-] [coeff] var ... [<=|=|>=] rhs".
struct LpRow {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  bool has_sense = false;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

inline LpRow parse_lp_row(const std::string& text) {
  LpRow row;
  std::string body = text;
  const std::size_t colon = body.find(':');
  if (colon != std::string::npos) {
    std::string label = body.substr(0, colon);
    label.erase(0, label.find_first_not_of(" \t"));
    label.erase(label.find_last_not_of(" \t") + 1);
    row.name = label;
    body = body.substr(colon + 1);
  }

  std::vector<std::string> toks;
  std::string cur;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
    } else if (c == '+' || c == '-') {
      // sign is its own token unless it is part of an exponent
      const bool exponent = !cur.empty() &&
          (cur.back() == 'e' || cur.back() == 'E') &&
          cur.find_first_not_of("0123456789.eE+-") == std::string::npos &&
          std::isdigit(static_cast<unsigned char>(cur.front()));
      if (exponent) { cur += c; continue; }
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      toks.push_back(std::string(1, c));
    } else if (c == '<' || c == '>' || c == '=') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      std::string op(1, c);
      if (i + 1 < body.size() && body[i + 1] == '=') { op += '='; ++i; }
      toks.push_back(op);
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(cur);

  double sign = 1.0;
  bool have_coeff = false;
  double coeff = 1.0;
  std::size_t i = 0;
  auto is_number = [](const std::string& s) {
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end && *end == '\0' && end != s.c_str();
  };
  while (i < toks.size()) {
    const std::string& t = toks[i];
    if (t == "+") { sign = 1.0; ++i; continue; }
    if (t == "-") { sign = -1.0; ++i; continue; }
    if (t == "<=" || t == "<") {
      row.has_sense = true; row.sense = Sense::LessEqual; ++i; continue;
    }
    if (t == ">=" || t == ">") {
      row.has_sense = true; row.sense = Sense::GreaterEqual; ++i; continue;
    }
    if (t == "=") {
      row.has_sense = true; row.sense = Sense::Equal; ++i; continue;
    }
    if (is_number(t)) {
      if (row.has_sense) {
        row.rhs = sign * std::strtod(t.c_str(), nullptr);
      } else {
        coeff = std::strtod(t.c_str(), nullptr);
        have_coeff = true;
      }
      ++i;
      continue;
    }
    // variable token
    row.terms.emplace_back(t, sign * (have_coeff ? coeff : 1.0));
    sign = 1.0;
    have_coeff = false;
    coeff = 1.0;
    ++i;
  }
  return row;
}

}  // namespace detail

inline LinearModel parse_lp(std::istream& is) {
  LinearModel model;
  std::map<std::string, int> var_index;
  auto var_of = [&](const std::string& name) {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    const int idx = model.add_variable({name, VarKind::Continuous, 0.0, 1e30});
    var_index[name] = idx;
    return idx;
  };

  enum class Section { None, Objective, Constraints, Bounds, Binaries, Done };
  Section section = Section::None;
  std::string line;
  std::string pending;  // constraints may span lines until a sense appears

  auto flush_constraint = [&](const std::string& text) {
    detail::LpRow row = detail::parse_lp_row(text);
    if (!row.has_sense) throw FormatError("constraint without sense: " + text);
    LinearConstraint c;
    c.name = row.name;
    c.sense = row.sense;
    c.rhs = row.rhs;
    for (const auto& [name, coeff] : row.terms)
      c.terms.push_back({coeff, var_of(name)});
    model.constraints.push_back(std::move(c));
  };

  while (std::getline(is, line)) {
    const std::size_t bs = line.find('\\');
    if (bs != std::string::npos) line.resize(bs);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();

    if (detail::is_lp_section(line, "minimize") ||
        detail::is_lp_section(line, "min")) {
      section = Section::Objective;
      continue;
    }
    if (detail::is_lp_section(line, "subjectto") ||
        detail::is_lp_section(line, "st") ||
        detail::is_lp_section(line, "s.t.")) {
      section = Section::Constraints;
      continue;
    }
    if (detail::is_lp_section(line, "bounds")) { section = Section::Bounds; continue; }
    if (detail::is_lp_section(line, "binaries") ||
        detail::is_lp_section(line, "binary")) {
      section = Section::Binaries;
      continue;
    }
    if (detail::is_lp_section(line, "end")) { section = Section::Done; break; }

    switch (section) {
      case Section::Objective: {
        detail::LpRow row = detail::parse_lp_row(line);
        for (const auto& [name, coeff] : row.terms)
          model.objective.push_back({coeff, var_of(name)});
        break;
      }
      case Section::Constraints: {
        pending += " " + line;
        if (line.find("<=") != std::string::npos ||
            line.find(">=") != std::string::npos ||
            line.find('=') != std::string::npos) {
          flush_constraint(pending);
          pending.clear();
        }
        break;
      }
      case Section::Bounds: {
        detail::LpRow row = detail::parse_lp_row(line);
        // form "lo <= x <= up": parser yields rhs = up, one term for x with
        // coefficient 1 and a leading number folded as its coefficient
        if (row.terms.size() != 1)
          throw FormatError("unsupported bounds line: " + line);
        ModelVariable& v =
            model.variables[static_cast<std::size_t>(var_of(row.terms[0].first))];
        v.lower = row.terms[0].second;  // leading number became the coeff
        v.upper = row.rhs;
        break;
      }
      case Section::Binaries: {
        for (const std::string& tok : detail::tokenize(line)) {
          ModelVariable& v =
              model.variables[static_cast<std::size_t>(var_of(tok))];
          v.kind = VarKind::Binary;
          v.lower = 0.0;
          v.upper = 1.0;
        }
        break;
      }
      default:
        break;
    }
  }
  if (!pending.empty()) throw FormatError("dangling constraint text");
  return model;
}

inline LinearModel parse_mps(std::istream& is) {
  LinearModel model;
  std::map<std::string, int> var_index;
  std::map<std::string, int> row_index;  // -1 marks the objective row
  std::string obj_row;

  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  Section section = Section::None;
  bool in_int = false;
  std::string line;

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '*') continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::vector<std::string> toks = detail::tokenize(line);
      const std::string& kw = toks[0];
      if (kw == "NAME") {
        model.name = toks.size() > 1 ? toks[1] : "";
      } else if (kw == "ROWS") {
        section = Section::Rows;
      } else if (kw == "COLUMNS") {
        section = Section::Columns;
      } else if (kw == "RHS") {
        section = Section::Rhs;
      } else if (kw == "BOUNDS") {
        section = Section::Bounds;
      } else if (kw == "RANGES") {
        throw FormatError("RANGES section not supported");
      } else if (kw == "ENDATA") {
        section = Section::Done;
        break;
      } else {
        throw FormatError("unknown MPS section: " + kw);
      }
      continue;
    }
    const std::vector<std::string> toks = detail::tokenize(line);
    switch (section) {
      case Section::Rows: {
        if (toks.size() != 2) throw FormatError("bad ROWS line: " + line);
        if (toks[0] == "N") {
          obj_row = toks[1];
          row_index[toks[1]] = -1;
        } else {
          LinearConstraint c;
          c.name = toks[1];
          if (toks[0] == "L") c.sense = Sense::LessEqual;
          else if (toks[0] == "E") c.sense = Sense::Equal;
          else if (toks[0] == "G") c.sense = Sense::GreaterEqual;
          else throw FormatError("bad row sense: " + toks[0]);
          row_index[toks[1]] = static_cast<int>(model.constraints.size());
          model.constraints.push_back(std::move(c));
        }
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          if (toks[2] == "'INTORG'") in_int = true;
          else if (toks[2] == "'INTEND'") in_int = false;
          else throw FormatError("bad marker: " + line);
          break;
        }
        if (toks.size() != 3 && toks.size() != 5)
          throw FormatError("bad COLUMNS line: " + line);
        auto it = var_index.find(toks[0]);
        int v;
        if (it == var_index.end()) {
          v = model.add_variable(
              {toks[0], in_int ? VarKind::Binary : VarKind::Continuous, 0.0,
               in_int ? 1.0 : 1e30});
          var_index[toks[0]] = v;
        } else {
          v = it->second;
        }
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          const double coeff = std::stod(toks[i + 1]);
          auto rit = row_index.find(toks[i]);
          if (rit == row_index.end())
            throw FormatError("unknown row: " + toks[i]);
          if (rit->second < 0) model.objective.push_back({coeff, v});
          else model.constraints[static_cast<std::size_t>(rit->second)]
                   .terms.push_back({coeff, v});
        }
        break;
      }
      case Section::Rhs: {
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
          auto rit = row_index.find(toks[i]);
          if (rit == row_index.end() || rit->second < 0)
            throw FormatError("bad RHS row: " + toks[i]);
          model.constraints[static_cast<std::size_t>(rit->second)].rhs =
              std::stod(toks[i + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (toks.size() < 3) throw FormatError("bad BOUNDS line: " + line);
        auto it = var_index.find(toks[2]);
        if (it == var_index.end())
          throw FormatError("bound on unknown variable: " + toks[2]);
        ModelVariable& v = model.variables[static_cast<std::size_t>(it->second)];
        if (toks[0] == "BV") {
          v.kind = VarKind::Binary;
          v.lower = 0.0;
          v.upper = 1.0;
        } else if (toks[0] == "LO") {
          v.lower = std::stod(toks[3]);
        } else if (toks[0] == "UP") {
          v.upper = std::stod(toks[3]);
        } else {
          throw FormatError("unsupported bound type: " + toks[0]);
        }
        break;
      }
      default:
        throw FormatError("data outside of a section: " + line);
    }
  }
  return model;
}

}  // namespace nesting
