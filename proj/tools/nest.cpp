// Command-line front end: solve, lower-bound, model emission and
// performance-profile computation over JSON instances.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nesting/instance_io.hpp"
#include "nesting/lowerbound.hpp"
#include "nesting/model.hpp"
#include "nesting/model_io.hpp"
#include "nesting/pipeline.hpp"
#include "nesting/report.hpp"

namespace {

constexpr int k_exit_infeasible = 2;
constexpr int k_exit_timeout = 3;
constexpr int k_exit_error = 4;

struct CommonOpts {
  std::string instance_path;
  int threads = 1;
  double time_limit = 600.0;
  std::uint64_t seed = 0;
  double grid = 0.0;       // 0 keeps the instance grid
  double length_ub = 0.0;  // 0 keeps the instance bound
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("instance", o.instance_path, "instance JSON file")
      ->required();
  cmd->add_option("--threads", o.threads, "worker thread count");
  cmd->add_option("--time-limit", o.time_limit, "time limit in seconds");
  cmd->add_option("--seed", o.seed, "RNG seed for root shuffling");
  cmd->add_option("--grid", o.grid, "override both grid steps gx and gy");
  cmd->add_option("--length-ub", o.length_ub, "override the board length bound");
  cmd->add_option("--out-dir", o.out_dir, "artifact output directory");
}

nesting::Instance load(const CommonOpts& o) {
  nesting::Instance inst = nesting::load_instance(o.instance_path);
  if (o.grid > 0.0 || o.length_ub > 0.0) {
    const nesting::Board& b = inst.board;
    inst.board = nesting::build_board(
        b.width, o.length_ub > 0.0 ? o.length_ub : b.length_ub,
        o.grid > 0.0 ? o.grid : b.gx, o.grid > 0.0 ? o.grid : b.gy);
  }
  return inst;
}

nesting::SolverConfig config_of(const CommonOpts& o) {
  nesting::SolverConfig cfg;
  cfg.threads = o.threads;
  cfg.time_limit = o.time_limit;
  cfg.rng_seed = o.seed;
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << body;
}

int run_solve(const CommonOpts& o) {
  nesting::Prepared p = nesting::prepare(load(o));
  nesting::SolveResult res =
      nesting::solve(p.state, p.trivial_lb, config_of(o));
  res.outcome.build_time = p.build_time;

  const std::string name = p.instance->name;
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);

  nesting::BenchmarkRow row =
      nesting::make_benchmark_row(*p.instance, *p.cache, p.state, res.outcome);
  std::ostringstream csv;
  csv << nesting::csv_header() << "\n" << nesting::csv_row(row) << "\n";
  write_file(dir / (name + ".csv"), csv.str());
  std::cout << csv.str();

  if (res.incumbent.placements.empty()) {
    if (res.outcome.proven_infeasible) {
      std::cerr << "infeasible within the board length bound\n";
      return k_exit_infeasible;
    }
    std::cerr << "time limit reached without a solution\n";
    return k_exit_timeout;
  }

  nesting::DecodedSolution sol =
      nesting::decode_solution(res.incumbent, p.state, *p.cache);
  std::ostringstream svg;
  nesting::render_svg(svg, sol, *p.cache);
  write_file(dir / (name + ".svg"), svg.str());

  nlohmann::json layout;
  layout["name"] = name;
  layout["length"] = sol.length;
  layout["proven_optimal"] = res.incumbent.proven_optimal;
  layout["placements"] = nlohmann::json::array();
  for (const nesting::DecodedPlacement& pl : sol.placements) {
    layout["placements"].push_back({{"type", pl.type_id},
                                    {"rotation", pl.rotation_id},
                                    {"col", pl.col},
                                    {"row", pl.row},
                                    {"x", pl.x},
                                    {"y", pl.y}});
  }
  write_file(dir / (name + "_layout.json"), layout.dump(2) + "\n");

  if (res.outcome.timed_out && !res.outcome.proven) return 0;
  return 0;
}

int run_lb(const CommonOpts& o) {
  nesting::Prepared p = nesting::prepare(load(o));
  nesting::LowerBoundOutcome out =
      nesting::solve_lower_bound(p.state, p.ladder, config_of(o));

  std::ostringstream rep;
  rep << "instance: " << p.instance->name << "\n";
  rep << "trivial_lb: " << p.trivial_lb << "\n";
  rep << "candidates:";
  rep << " " << p.ladder.trivial_lb;
  for (double v : p.ladder.values) rep << " " << v;
  rep << "\n";
  for (int i = 0; i < out.iterations; ++i) {
    const double cand = i == 0
                            ? p.ladder.trivial_lb
                            : p.ladder.values[static_cast<std::size_t>(i - 1)];
    const bool last = i + 1 == out.iterations;
    rep << "iteration " << (i + 1) << ": candidate " << cand << " -> "
        << (last && out.proven
                ? "feasible (optimal)"
                : last ? "inconclusive" : "infeasible")
        << "\n";
  }
  rep << "lb: " << out.lb << "\n";
  rep << "proven: " << (out.proven ? "yes" : "no") << "\n";
  rep << "nodes: " << out.nodes << "\n";
  rep << "time: " << out.time << "\n";

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (p.instance->name + "_lb.txt"), rep.str());
  std::cout << rep.str();

  if (out.infeasible_within_ub) return k_exit_infeasible;
  if (!out.proven) return k_exit_timeout;
  return 0;
}

int run_emit(const CommonOpts& o, const std::string& model_kind,
             const std::string& format) {
  nesting::Prepared p = nesting::prepare(load(o));

  nesting::LinearModel model;
  if (model_kind == "db") {
    model = nesting::build_db_model(*p.instance, p.table, p.edges, p.trivial_lb);
  } else if (model_kind == "dbcc") {
    const nesting::CliqueCover ecc =
        nesting::edge_clique_cover(p.table.size(), p.edges);
    const nesting::CliqueCover vcc = nesting::vertex_clique_cover(
        p.table.size(), p.edges, p.table.bounds, p.trivial_lb);
    model = nesting::build_dbcc_model(*p.instance, p.table, ecc, vcc,
                                      p.trivial_lb);
  } else if (model_kind == "bdb") {
    model =
        nesting::build_binary_db_model(*p.instance, p.table, p.edges, p.ladder);
  } else if (model_kind == "bdbcc") {
    const nesting::CliqueCover ecc =
        nesting::edge_clique_cover(p.table.size(), p.edges);
    model = nesting::build_binary_dbcc_model(*p.instance, p.table, ecc,
                                             p.ladder);
  } else {
    std::cerr << "unknown model kind: " << model_kind << "\n";
    return k_exit_error;
  }

  std::ostringstream body;
  if (format == "lp") nesting::emit_lp(body, model);
  else if (format == "mps") nesting::emit_mps(body, model);
  else {
    std::cerr << "unknown format: " << format << "\n";
    return k_exit_error;
  }

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::filesystem::path path =
      dir / (p.instance->name + "_" + model_kind + "." + format);
  write_file(path, body.str());
  std::cout << path.string() << "\n";
  return 0;
}

// Reads per-method benchmark CSVs and computes the time-ratio profiles.
// A row counts as unsolved (t = infinity) when its gap is nonzero.
int run_profile(const std::vector<std::string>& inputs, double r_fail,
                const std::string& out_path) {
  std::vector<nesting::MethodTimes> methods;
  for (const std::string& entry : inputs) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      std::cerr << "expected NAME=CSVPATH, got: " << entry << "\n";
      return k_exit_error;
    }
    nesting::MethodTimes m;
    m.method = entry.substr(0, eq);
    std::ifstream is(entry.substr(eq + 1));
    if (!is) {
      std::cerr << "cannot open " << entry.substr(eq + 1) << "\n";
      return k_exit_error;
    }
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      if (fields.size() < 13) {
        std::cerr << "malformed CSV row: " << line << "\n";
        return k_exit_error;
      }
      const double gap = std::stod(fields[5]);
      const double t = std::stod(fields[8]);
      m.time_by_instance[fields[0]] =
          gap > 0.0 ? std::numeric_limits<double>::infinity() : t;
    }
    methods.push_back(std::move(m));
  }

  try {
    const std::vector<nesting::PerformanceProfile> profiles =
        nesting::performance_profiles(methods, r_fail);
    std::ostringstream body;
    nesting::emit_profile_csv(body, profiles);
    if (out_path.empty()) {
      std::cout << body.str();
    } else {
      write_file(out_path, body.str());
      std::cout << out_path << "\n";
    }
  } catch (const nesting::InputError& e) {
    std::cerr << e.what() << "\n";
    return k_exit_error;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact dotted-board strip nesting"};
  app.require_subcommand(1);

  CommonOpts solve_o, lb_o, emit_o;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "search for a proven-optimal layout");
  add_common(solve_cmd, solve_o);

  CLI::App* lb_cmd =
      app.add_subcommand("lb", "iterative lower-bound search");
  add_common(lb_cmd, lb_o);

  std::string model_kind = "db";
  std::string format = "lp";
  CLI::App* emit_cmd = app.add_subcommand("emit", "write a model file");
  add_common(emit_cmd, emit_o);
  emit_cmd->add_option("--model", model_kind, "db|dbcc|bdb|bdbcc");
  emit_cmd->add_option("--format", format, "lp|mps");

  std::vector<std::string> profile_inputs;
  double r_fail = 1e6;
  std::string profile_out;
  CLI::App* profile_cmd =
      app.add_subcommand("profile", "performance profiles from benchmark CSVs");
  profile_cmd
      ->add_option("--input", profile_inputs, "NAME=CSVPATH, one per method")
      ->required();
  profile_cmd->add_option("--r-fail", r_fail, "ratio assigned to unsolved runs");
  profile_cmd->add_option("--out", profile_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_o);
    if (lb_cmd->parsed()) return run_lb(lb_o);
    if (emit_cmd->parsed()) return run_emit(emit_o, model_kind, format);
    if (profile_cmd->parsed())
      return run_profile(profile_inputs, r_fail, profile_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return k_exit_error;
  }
  return 0;
}
