// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria cover optimality reproduction, rotations, structure
// counts, exhaustive-oracle agreement, lower-bound soundness, model
// equivalence, symmetry-breaking leaf counts, determinism and profile math.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nesting/instance_io.hpp"
#include "nesting/lowerbound.hpp"
#include "nesting/model.hpp"
#include "nesting/pipeline.hpp"
#include "nesting/report.hpp"
#include "nesting/solver.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace nesting;

namespace {

const std::string data_dir = TEST_DATA_DIR;
int failures = 0;

void report(int criterion, const std::string& what, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion
            << ": " << what;
  if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

bool near(double a, double b, double eps = 1e-9) {
  return std::abs(a - b) <= eps;
}

// --- criterion 1: exact optima on the two reference instances -------------

void criterion_1() {
  bool ok = true;
  std::ostringstream detail;
  {
    Prepared p = prepare(load_instance(data_dir + "/three.json"));
    SolverConfig cfg;
    cfg.time_limit = 60.0;
    const SolveResult res = solve(p.state, p.trivial_lb, cfg);
    if (!res.outcome.ub || !near(*res.outcome.ub, 6.0) ||
        !res.outcome.proven || res.outcome.timed_out) {
      ok = false;
      detail << "three: ub="
             << (res.outcome.ub ? std::to_string(*res.outcome.ub) : "none");
    }
  }
  {
    Prepared p = prepare(load_instance(data_dir + "/threep3w9.json"));
    SolverConfig cfg;
    cfg.time_limit = 60.0;
    const SolveResult res = solve(p.state, p.trivial_lb, cfg);
    if (!res.outcome.ub || !near(*res.outcome.ub, 12.0) ||
        !res.outcome.proven || res.outcome.timed_out) {
      ok = false;
      detail << " threep3w9: ub="
             << (res.outcome.ub ? std::to_string(*res.outcome.ub) : "none");
    }
  }
  report(1, "proven optima 6 and 12 on the reference instances, "
            "single-threaded within 60 s",
         ok, detail.str());
}

// --- criterion 2: rotations ------------------------------------------------

// The published diagram for this instance claims 11, but a length-10 layout
// exists under the stated rotation sets: it uses only unrotated pieces plus
// 180-degree triangles, all on integer dots, so it is robust to any
// reference-point convention. The layout is embedded below and re-verified
// with the geometric overlap predicate; the expected optimum is therefore
// the verified value 10.
bool length_10_layout_is_feasible(const ShapeCache& cache) {
  struct P {
    int type, rot;
    double x, y;
  };
  // types: 0 = diamond, 1 = square, 2 = triangle; rot 1 on type 2 is 180deg
  const P layout[9] = {{0, 0, 0, 0}, {0, 0, 1, 3}, {0, 0, 3, 5},
                       {1, 0, 4, 0}, {1, 0, 7, 0}, {1, 0, 7, 6},
                       {2, 0, 4, 3}, {2, 1, 4, 9}, {2, 1, 10, 6}};
  const Board& b = cache.instance().board;
  for (const P& p : layout) {
    const PieceMetrics& m = cache.shape(p.type, p.rot).metrics;
    if (p.x - m.x_min < -k_eps_geom || p.x + m.x_max > 10.0 + k_eps_geom ||
        p.y - m.y_min < -k_eps_geom || p.y + m.y_max > b.width + k_eps_geom)
      return false;
  }
  for (int i = 0; i < 9; ++i) {
    for (int j = i + 1; j < 9; ++j) {
      const RotatedShape& si = cache.shape(layout[i].type, layout[i].rot);
      const RotatedShape& sj = cache.shape(layout[j].type, layout[j].rot);
      if (pieces_overlap(si.polygon, si.parts, {layout[i].x, layout[i].y},
                         sj.polygon, sj.parts, {layout[j].x, layout[j].y}))
        return false;
    }
  }
  return true;
}

void criterion_2() {
  bool ok = true;
  std::string detail;
  try {
    Prepared p = prepare(load_instance(data_dir + "/threep3w9_rot.json"));
    if (!length_10_layout_is_feasible(*p.cache)) {
      ok = false;
      detail = "embedded reference layout failed re-verification";
    }
    SolverConfig cfg;
    cfg.time_limit = 300.0;
    const SolveResult res = solve(p.state, p.trivial_lb, cfg);
    if (!res.outcome.ub || !near(*res.outcome.ub, 10.0) ||
        !res.outcome.proven) {
      ok = false;
      detail += " ub=" +
                (res.outcome.ub ? std::to_string(*res.outcome.ub)
                                : std::string("none"));
    } else {
      // decode re-verifies containment and pairwise non-overlap
      const DecodedSolution sol =
          decode_solution(res.incumbent, p.state, *p.cache);
      if (sol.placements.size() != 9 || !near(sol.length, 10.0)) {
        ok = false;
        detail += " decoded layout mismatch";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(2, "rotated nine-piece instance proves the verified optimum 10 "
            "(a feasible length-10 layout is embedded and re-checked; the "
            "published diagram's 11 is not optimal) and the decoded layout "
            "re-verifies geometrically",
         ok, detail);
}

// --- criterion 3: structure counts ------------------------------------------

void criterion_3() {
  Prepared p = prepare(load_instance(data_dir + "/three.json"));
  const bool ok = p.table.size() == 61 && p.edges.size() == 1266;
  std::ostringstream detail;
  detail << "V=" << p.table.size() << " E=" << p.edges.size();
  report(3, "three-piece instance builds 61 variables and 1266 pairwise "
            "conflict edges",
         ok, detail.str());
}

// --- criterion 4: exhaustive-oracle agreement -------------------------------

void criterion_4() {
  std::mt19937_64 rng(424242);
  int checked = 0;
  int mismatches = 0;
  std::string first_bad;
  for (int i = 0; i < 200; ++i) {
    const Instance inst = testsupport::random_instance(rng);
    std::optional<double> expected;
    {
      const ShapeCache cache(inst);
      expected = testsupport::brute_force_optimum(cache);
    }
    bool agrees = false;
    try {
      Prepared p = prepare(inst);
      const SolveResult res = solve(p.state, p.trivial_lb, SolverConfig{});
      if (res.outcome.proven_infeasible) {
        agrees = !expected.has_value();
      } else {
        agrees = res.outcome.ub && expected &&
                 near(*res.outcome.ub, *expected) && res.outcome.proven;
      }
    } catch (const InfeasibleInstanceError&) {
      agrees = !expected.has_value();
    }
    ++checked;
    if (!agrees) {
      ++mismatches;
      if (first_bad.empty()) first_bad = "seed iteration " + std::to_string(i);
    }
  }
  std::ostringstream detail;
  detail << mismatches << " mismatches of " << checked << "; " << first_bad;
  report(4, "200 randomized instances match the exhaustive oracle exactly",
         checked == 200 && mismatches == 0, detail.str());
}

// --- criterion 5: lower-bound soundness --------------------------------------

void criterion_5() {
  bool ok = true;
  std::ostringstream detail;

  std::mt19937_64 rng(424242);  // same suite as criterion 4
  for (int i = 0; i < 200 && ok; ++i) {
    const Instance inst = testsupport::random_instance(rng);
    std::optional<double> expected;
    {
      const ShapeCache cache(inst);
      expected = testsupport::brute_force_optimum(cache);
    }
    try {
      Prepared p = prepare(inst);
      const LowerBoundOutcome out =
          solve_lower_bound(p.state, p.ladder, SolverConfig{});
      if (out.infeasible_within_ub) {
        if (expected) {
          ok = false;
          detail << "false infeasibility at iteration " << i;
        }
        continue;
      }
      if (!expected) continue;
      if (out.lb > *expected + 1e-9) {
        ok = false;
        detail << "lb above optimum at iteration " << i;
      } else if (out.proven && !near(out.lb, *expected)) {
        ok = false;
        detail << "proven lb differs from optimum at iteration " << i;
      }
    } catch (const InfeasibleInstanceError&) {
      if (expected) {
        ok = false;
        detail << "spurious variable infeasibility at iteration " << i;
      }
    }
  }

  Prepared p = prepare(load_instance(data_dir + "/three.json"));
  const LowerBoundOutcome out =
      solve_lower_bound(p.state, p.ladder, SolverConfig{});
  if (!out.proven || !near(out.lb, 6.0)) {
    ok = false;
    detail << " three lb=" << out.lb;
  }
  report(5, "lower bound is always sound, equals the optimum when proven, "
            "and proves 6 on the three-piece instance",
         ok, detail.str());
}

// --- criterion 6: model equivalence -----------------------------------------

bool model_accepts(const LinearModel& model, const VariableTable& table,
                   const std::vector<int>& active, const LengthLadder& ladder,
                   double trivial_lb) {
  std::vector<double> assignment(model.variables.size(), 0.0);
  double max_bound = 0.0;
  for (int v : active) {
    assignment[static_cast<std::size_t>(v)] = 1.0;
    max_bound = std::max(max_bound, table.bounds[static_cast<std::size_t>(v)]);
  }
  const int length_var = model.find_variable("L");
  if (length_var >= 0) {
    assignment[static_cast<std::size_t>(length_var)] =
        std::max(trivial_lb, max_bound);
  } else {
    for (int m = 0; m < ladder.size(); ++m) {
      const int z = model.find_variable("z" + std::to_string(m + 1));
      if (z < 0) return false;
      assignment[static_cast<std::size_t>(z)] =
          max_bound >= ladder.values[static_cast<std::size_t>(m)] - 1e-9 ? 1.0
                                                                         : 0.0;
    }
  }
  return check_assignment(model, assignment).empty();
}

void criterion_6() {
  std::mt19937_64 rng(99991);
  int usable = 0;
  bool ok = true;
  std::ostringstream detail;

  while (usable < 50 && ok) {
    const Instance inst = testsupport::random_instance(rng);
    Prepared p;
    try {
      p = prepare(inst);
    } catch (const InfeasibleInstanceError&) {
      continue;
    }
    const int V = p.table.size();
    if (V > 12) continue;
    ++usable;

    const CliqueCover ecc = edge_clique_cover(V, p.edges);
    const CliqueCover vcc =
        vertex_clique_cover(V, p.edges, p.table.bounds, p.trivial_lb);
    const LinearModel models[4] = {
        build_db_model(*p.instance, p.table, p.edges, p.trivial_lb),
        build_dbcc_model(*p.instance, p.table, ecc, vcc, p.trivial_lb),
        build_binary_db_model(*p.instance, p.table, p.edges, p.ladder),
        build_binary_dbcc_model(*p.instance, p.table, ecc, p.ladder)};

    double best[4];
    for (double& b : best) b = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << V); ++mask) {
      std::vector<int> active;
      for (int v = 0; v < V; ++v)
        if (mask & (1 << v)) active.push_back(v);
      bool accepts[4];
      for (int m = 0; m < 4; ++m)
        accepts[m] =
            model_accepts(models[m], p.table, active, p.ladder, p.trivial_lb);
      if (accepts[0] != accepts[1] || accepts[0] != accepts[2] ||
          accepts[0] != accepts[3]) {
        ok = false;
        detail << "feasible sets differ at instance " << usable << " mask "
               << mask;
        break;
      }
      if (accepts[0]) {
        double len = p.trivial_lb;
        for (int v : active)
          len = std::max(len, p.table.bounds[static_cast<std::size_t>(v)]);
        // 0-1 objective decodes back through the ladder
        int steps = 0;
        for (int m = 0; m < p.ladder.size(); ++m)
          if (len >= p.ladder.values[static_cast<std::size_t>(m)] - 1e-9)
            steps = m + 1;
        const double recovered = recover_length(p.ladder, steps);
        const double continuous = std::max(p.trivial_lb, len);
        if (!near(recovered, continuous)) {
          ok = false;
          detail << "ladder decoding mismatch at instance " << usable;
          break;
        }
        for (int m = 0; m < 4; ++m) best[m] = std::min(best[m], continuous);
      }
    }
    if (!ok) break;
    if (std::isfinite(best[0])) {
      for (int m = 1; m < 4; ++m) {
        if (!near(best[0], best[m])) {
          ok = false;
          detail << "optima differ at instance " << usable;
        }
      }
      // the search optimum must be a zero-violation assignment in all four
      const SolveResult res = solve(p.state, p.trivial_lb, SolverConfig{});
      if (!res.outcome.ub || !near(*res.outcome.ub, best[0])) {
        ok = false;
        detail << "search disagrees with enumeration at instance " << usable;
      } else {
        std::vector<int> active = res.incumbent.placements;
        for (int m = 0; m < 4; ++m) {
          if (!model_accepts(models[m], p.table, active, p.ladder,
                             p.trivial_lb)) {
            ok = false;
            detail << "search optimum violates model " << m << " at instance "
                   << usable;
          }
        }
      }
    }
  }
  report(6, "all four formulations define identical feasible sets and "
            "optima on 50 instances, and every search optimum satisfies "
            "all of them",
         ok && usable == 50, detail.str());
}

// --- criterion 7: symmetry-breaking leaf counts ------------------------------

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<std::uint64_t>(n - k + i) /
        static_cast<std::uint64_t>(i);
  return r;
}

void criterion_7() {
  bool ok = true;
  std::ostringstream detail;
  for (int pdots = 2; pdots <= 8 && ok; ++pdots) {
    for (int k = 1; k <= std::min(3, pdots) && ok; ++k) {
      Instance inst;
      inst.name = "row";
      inst.board = build_board(0.6, pdots - 1 + 0.5, 1, 1);
      PieceType t;
      t.polygon = make_polygon({{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}});
      t.demand = k;
      inst.types = {t};
      Prepared p = prepare(inst);
      SolverConfig cfg;
      cfg.enumerate_all = true;
      const SolveResult res = solve(p.state, p.trivial_lb, cfg);
      if (res.outcome.leaves != binomial(pdots, k)) {
        ok = false;
        detail << "p=" << pdots << " k=" << k << " leaves="
               << res.outcome.leaves << " expected " << binomial(pdots, k);
      }
    }
  }
  report(7, "k identical conflict-free pieces over p positions yield "
            "C(p,k) complete leaves (p <= 8, k <= 3)",
         ok, detail.str());
}

// --- criterion 8: determinism -------------------------------------------------

std::string masked_csv(const BenchmarkRow& row) {
  // zero out the three timing fields; everything else must be byte-identical
  BenchmarkRow r = row;
  r.time = 0.0;
  r.time_to_best = 0.0;
  r.build_time = 0.0;
  return csv_header() + "\n" + csv_row(r) + "\n";
}

void criterion_8() {
  bool ok = true;
  std::ostringstream detail;
  std::string reference;
  std::uint64_t nodes = 0;
  for (int run = 0; run < 3; ++run) {
    Prepared p = prepare(load_instance(data_dir + "/threep3w9.json"));
    SolverConfig cfg;
    cfg.threads = 1;
    cfg.rng_seed = 7;
    const SolveResult res = solve(p.state, p.trivial_lb, cfg);
    const BenchmarkRow row =
        make_benchmark_row(*p.instance, *p.cache, p.state, res.outcome);
    const std::string csv = masked_csv(row);
    if (run == 0) {
      reference = csv;
      nodes = res.outcome.nodes;
    } else if (csv != reference || res.outcome.nodes != nodes) {
      ok = false;
      detail << "run " << run << " differs";
    }
  }
  report(8, "three runs at one thread and a fixed seed are byte-identical "
            "apart from timing fields, with equal node counts",
         ok, detail.str());
}

// --- criterion 9: profile math -----------------------------------------------

void criterion_9() {
  // two methods over three instances; hand-computed ratios:
  //   times m1 = (1, 2, 4), m2 = (2, 1, 8); best = (1, 1, 4)
  //   ratios m1 = (1, 2, 1) -> rho(1) = 2/3, rho(2) = 1
  //   ratios m2 = (2, 1, 2) -> rho(1) = 1/3, rho(2) = 1
  MethodTimes m1{"m1", {{"a", 1.0}, {"b", 2.0}, {"c", 4.0}}};
  MethodTimes m2{"m2", {{"a", 2.0}, {"b", 1.0}, {"c", 8.0}}};
  const auto profiles = performance_profiles({m1, m2}, 100.0);
  bool ok = profiles.size() == 2;
  if (ok) {
    ok = std::abs(profile_value(profiles[0], 1.0) - 2.0 / 3.0) <= 1e-12 &&
         std::abs(profile_value(profiles[0], 1.999) - 2.0 / 3.0) <= 1e-12 &&
         std::abs(profile_value(profiles[0], 2.0) - 1.0) <= 1e-12 &&
         std::abs(profile_value(profiles[1], 1.0) - 1.0 / 3.0) <= 1e-12 &&
         std::abs(profile_value(profiles[1], 2.0) - 1.0) <= 1e-12;
  }
  report(9, "performance profiles match hand-computed values on a "
            "2-method by 3-instance fixture to 1e-12",
         ok);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures > 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
