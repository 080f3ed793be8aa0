#pragma once

// Reporting: benchmark CSV rows, SVG layout rendering and performance
// profiles for comparing solution methods across an instance set.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nesting/model.hpp"
#include "nesting/solver.hpp"

namespace nesting {

// One benchmark line. Field order is fixed; see csv_header().
struct BenchmarkRow {
  std::string instance;
  int pieces = 0;
  double efficiency = 0.0;  // total piece area / (W * UB)
  double lb = 0.0;
  double ub = 0.0;
  double gap_percent = 0.0;  // 100 * (UB - LB) / UB
  std::size_t binary_vars = 0;
  std::uint64_t nodes = 0;
  double time = 0.0;
  std::size_t constraints = 0;
  double time_to_best = 0.0;
  std::uint64_t best_node = 0;
  double build_time = 0.0;
};

inline std::string csv_header() {
  return "instance,pieces,efficiency,lb,ub,gap_percent,binary_vars,nodes,"
         "time,constraints,time_to_best,best_node,build_time";
}

namespace detail {

inline std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace detail

inline std::string csv_row(const BenchmarkRow& r) {
  std::ostringstream os;
  os << r.instance << ',' << r.pieces << ',' << detail::csv_num(r.efficiency)
     << ',' << detail::csv_num(r.lb) << ',' << detail::csv_num(r.ub) << ','
     << detail::csv_num(r.gap_percent) << ',' << r.binary_vars << ','
     << r.nodes << ',' << detail::csv_num(r.time) << ',' << r.constraints
     << ',' << detail::csv_num(r.time_to_best) << ',' << r.best_node << ','
     << detail::csv_num(r.build_time);
  return os.str();
}

inline BenchmarkRow make_benchmark_row(const Instance& inst,
                                       const ShapeCache& cache,
                                       const GlobalState& state,
                                       const SolveOutcome& outcome) {
  BenchmarkRow r;
  r.instance = inst.name;
  r.pieces = inst.total_pieces();
  double area_sum = 0.0;
  for (std::size_t t = 0; t < inst.types.size(); ++t)
    area_sum += cache.shape(static_cast<int>(t), 0).metrics.area *
                inst.types[t].demand;
  r.lb = outcome.lb;
  if (outcome.ub) {
    r.ub = *outcome.ub;
    r.efficiency = area_sum / (inst.board.width * r.ub);
    r.gap_percent = 100.0 * (r.ub - r.lb) / r.ub;
  }
  r.binary_vars = static_cast<std::size_t>(state.table.size());
  r.nodes = outcome.nodes;
  r.time = outcome.solve_time;
  r.constraints = state.edge_count;
  r.time_to_best = outcome.time_to_best;
  r.best_node = outcome.best_node;
  r.build_time = outcome.build_time;
  return r;
}

// Deterministic SVG of a decoded layout: strip outline, used-length marker
// and one path per placed piece.
inline void render_svg(std::ostream& os, const DecodedSolution& sol,
                       const ShapeCache& cache) {
  const Board& board = cache.instance().board;
  const double scale = 40.0;
  const double margin = 10.0;
  const double w = board.length_ub * scale + 2 * margin;
  const double h = board.width * scale + 2 * margin;
  // y axis flipped so the origin is bottom-left
  auto X = [&](double x) { return margin + x * scale; };
  auto Y = [&](double y) { return h - margin - y * scale; };

  static const char* fills[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

  os << std::setprecision(10);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
     << "\">\n";
  os << "<rect x=\"" << X(0) << "\" y=\"" << Y(board.width) << "\" width=\""
     << board.length_ub * scale << "\" height=\"" << board.width * scale
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << X(sol.length) << "\" y1=\"" << Y(0) << "\" x2=\""
     << X(sol.length) << "\" y2=\"" << Y(board.width)
     << "\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"/>"
     << "\n";
  for (const DecodedPlacement& p : sol.placements) {
    const RotatedShape& s = cache.shape(p.type_id, p.rotation_id);
    os << "<path d=\"";
    for (std::size_t i = 0; i < s.polygon.vertices.size(); ++i) {
      const Point2 v = s.polygon.vertices[i];
      const double x = p.x + (v.x - s.polygon.reference.x);
      const double y = p.y + (v.y - s.polygon.reference.y);
      os << (i == 0 ? 'M' : 'L') << X(x) << ' ' << Y(y) << ' ';
    }
    os << "Z\" fill=\"" << fills[static_cast<std::size_t>(p.type_id) % 8]
       << "\" fill-opacity=\"0.7\" stroke=\"#222\" stroke-width=\"0.8\"/>\n";
  }
  os << "</svg>\n";
}

// Performance profiles: for each method m and instance p, the ratio of its
// time to the best time on p; rho_m(tau) is the fraction of instances whose
// ratio is within tau. Unsolved runs carry time = +infinity and are clamped
// to the failure ratio r_fail, which must exceed every finite ratio.
struct MethodTimes {
  std::string method;
  std::map<std::string, double> time_by_instance;  // +inf when unsolved
};

struct ProfilePoint {
  double tau = 0.0;
  double rho = 0.0;
};

struct PerformanceProfile {
  std::string method;
  std::vector<double> ratios;        // per instance, sorted ascending
  std::vector<ProfilePoint> curve;   // step function breakpoints
};

inline std::vector<PerformanceProfile> performance_profiles(
    const std::vector<MethodTimes>& methods, double r_fail) {
  if (methods.empty()) throw InputError("no methods given");
  const std::map<std::string, double>& first = methods[0].time_by_instance;
  for (const MethodTimes& m : methods) {
    if (m.time_by_instance.size() != first.size())
      throw InputError("methods cover different instance sets");
    for (const auto& [name, t] : m.time_by_instance) {
      (void)t;
      if (!first.contains(name))
        throw InputError("instance " + name + " missing from some method");
    }
  }

  std::vector<PerformanceProfile> out;
  for (const MethodTimes& m : methods) {
    PerformanceProfile prof;
    prof.method = m.method;
    for (const auto& [name, t] : m.time_by_instance) {
      double best = std::numeric_limits<double>::infinity();
      for (const MethodTimes& o : methods)
        best = std::min(best, o.time_by_instance.at(name));
      if (!std::isfinite(best))
        throw InputError("instance " + name + " unsolved by every method");
      const double ratio = std::isfinite(t) ? t / best : r_fail;
      if (std::isfinite(t) && ratio > r_fail)
        throw InputError("failure ratio below an observed ratio");
      prof.ratios.push_back(ratio);
    }
    std::sort(prof.ratios.begin(), prof.ratios.end());
    const double n = static_cast<double>(prof.ratios.size());
    for (std::size_t i = 0; i < prof.ratios.size(); ++i) {
      if (i + 1 < prof.ratios.size() &&
          prof.ratios[i + 1] == prof.ratios[i])
        continue;
      prof.curve.push_back({prof.ratios[i], static_cast<double>(i + 1) / n});
    }
    out.push_back(std::move(prof));
  }
  return out;
}

// Evaluates a step-function profile at tau.
inline double profile_value(const PerformanceProfile& prof, double tau) {
  double rho = 0.0;
  for (const ProfilePoint& p : prof.curve) {
    if (p.tau <= tau) rho = p.rho;
    else break;
  }
  return rho;
}

inline void emit_profile_csv(std::ostream& os,
                             const std::vector<PerformanceProfile>& profiles) {
  os << "method,tau,rho\n";
  for (const PerformanceProfile& p : profiles)
    for (const ProfilePoint& pt : p.curve)
      os << p.method << ',' << detail::csv_num(pt.tau) << ','
         << detail::csv_num(pt.rho) << '\n';
}

}  // namespace nesting
