#pragma once

// Lower-bound search: iterate candidate lengths up the feasible-length
// ladder from the trivial bound, proving infeasibility at each level until
// a feasible (hence optimal) solution appears or time runs out.

#include <chrono>
#include <optional>

#include "nesting/solver.hpp"

namespace nesting {

struct LowerBoundOutcome {
  double lb = 0.0;
  std::optional<Incumbent> optimal_solution;
  bool proven = false;
  bool infeasible_within_ub = false;
  int iterations = 0;
  double time = 0.0;
  std::uint64_t nodes = 0;
};

inline LowerBoundOutcome solve_lower_bound(GlobalState& state,
                                           const LengthLadder& ladder,
                                           const SolverConfig& cfg) {
  const auto t0 = detail::Clock::now();
  const auto deadline =
      t0 + std::chrono::duration_cast<detail::Clock::duration>(
               std::chrono::duration<double>(cfg.time_limit));
  const double eps = cfg.epsilon_len;

  std::vector<double> candidates;
  candidates.push_back(ladder.trivial_lb);
  candidates.insert(candidates.end(), ladder.values.begin(),
                    ladder.values.end());

  LowerBoundOutcome out;
  for (double candidate : candidates) {
    out.lb = candidate;
    ++out.iterations;

    // enable exactly the variables whose bound fits the candidate length
    reset_search_state(state);
    for (int v = 0; v < state.table.size(); ++v) {
      if (state.table.bounds[static_cast<std::size_t>(v)] > candidate + eps)
        state.non_dominated.reset(static_cast<std::size_t>(v));
    }
    for (BitVector& mask : state.type_masks)
      mask.and_assign(state.non_dominated);

    detail::RootSearchResult r =
        detail::run_root_search(state, candidate, cfg, deadline);
    out.nodes += r.nodes;

    if (!r.incumbent.placements.empty()) {
      // all previous candidates are proven infeasible, so any feasible
      // solution at this one is optimal
      out.optimal_solution = r.incumbent;
      out.optimal_solution->proven_optimal = true;
      out.lb = r.incumbent.length;
      out.proven = true;
      break;
    }
    if (r.timed_out) break;  // infeasibility at `candidate` not proven
    if (candidate == candidates.back()) {
      out.infeasible_within_ub = true;
      break;
    }
  }
  out.time = std::chrono::duration<double>(detail::Clock::now() - t0).count();
  return out;
}

}  // namespace nesting
