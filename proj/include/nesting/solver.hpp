#pragma once

// Parallel branch-and-bound-and-prune search over the conflict inverse
// graph: seeded-random root partitioning across a worker pool, bitwise
// constraint propagation, forward checking and thread-safe incumbent
// updates with dominated-variable pruning.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "nesting/conflict.hpp"

namespace nesting {

struct SolverConfig {
  double time_limit = 600.0;  // seconds
  int threads = 1;
  std::uint64_t rng_seed = 0;
  double epsilon_len = 1e-9;
  // Diagnostic mode: visit every complete feasible solution without bound
  // pruning or dominance, counting leaves. Used to check the symmetry
  // breaking (leaf count must be binomial, not a falling factorial).
  bool enumerate_all = false;
};

struct Incumbent {
  std::vector<int> placements;  // variable index per decision level
  double length = std::numeric_limits<double>::infinity();
  bool proven_optimal = false;
};

struct SolveOutcome {
  std::optional<double> ub;
  double lb = 0.0;
  bool proven = false;
  bool proven_infeasible = false;
  bool timed_out = false;
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  double time_to_best = 0.0;
  std::uint64_t best_node = 0;
  double build_time = 0.0;
  double solve_time = 0.0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

struct SearchShared {
  GlobalState* state = nullptr;
  SolverConfig cfg;
  double lb = 0.0;  // optimality threshold for the incumbent test
  int n_levels = 0;

  std::mutex mutex;
  std::atomic<double> incumbent_length{
      std::numeric_limits<double>::infinity()};
  std::vector<int> incumbent;  // guarded by mutex
  std::atomic<bool> proven{false};
  std::atomic<bool> timed_out{false};
  Clock::time_point start;
  Clock::time_point deadline;
  double time_to_best = 0.0;        // guarded by mutex
  std::uint64_t best_node = 0;      // guarded by mutex
  std::uint64_t best_leaf = 0;      // guarded by mutex

  // per-worker node counters, read when recording an improvement
  std::vector<std::uint64_t> worker_nodes;
  std::vector<std::uint64_t> worker_leaves;

  // distinct piece types occurring at levels strictly greater than each level
  std::vector<std::vector<int>> next_types;

  std::uint64_t nodes_snapshot() const {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < worker_nodes.size(); ++i) {
      std::atomic_ref<const std::uint64_t> ref(worker_nodes[i]);
      n += ref.load(std::memory_order_relaxed);
    }
    return n;
  }
  std::uint64_t leaves_snapshot() const {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < worker_leaves.size(); ++i) {
      std::atomic_ref<const std::uint64_t> ref(worker_leaves[i]);
      n += ref.load(std::memory_order_relaxed);
    }
    return n;
  }
};

inline std::vector<std::vector<int>> build_next_types(
    const std::vector<int>& instance_types, std::size_t type_count) {
  const int n = static_cast<int>(instance_types.size());
  std::vector<std::vector<int>> next(static_cast<std::size_t>(n));
  std::vector<char> seen;
  for (int level = 0; level < n; ++level) {
    seen.assign(type_count, 0);
    for (int l = level + 1; l < n; ++l) {
      const int t = instance_types[static_cast<std::size_t>(l)];
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = 1;
        next[static_cast<std::size_t>(level)].push_back(t);
      }
    }
  }
  return next;
}

// Returns false iff some future piece type has no surviving variable.
inline bool forward_check(const BitVector& feasible, int level,
                          const SearchShared& sh) {
  for (int t : sh.next_types[static_cast<std::size_t>(level)]) {
    const BitVector& mask = sh.state->type_masks[static_cast<std::size_t>(t)];
    bool any = false;
    for (std::size_t w = 0; w < feasible.word_count(); ++w) {
      if (mask.load_word_relaxed(w) & feasible.word(w)) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

inline void update_incumbent(SearchShared& sh, const std::vector<int>& x,
                             double length) {
  GlobalState& state = *sh.state;
  const double eps = sh.cfg.epsilon_len;
  std::lock_guard<std::mutex> lock(sh.mutex);
  if (sh.proven.load(std::memory_order_relaxed)) return;
  if (!(length < sh.incumbent_length.load(std::memory_order_relaxed) - eps))
    return;

  if (!sh.cfg.enumerate_all) {
    for (int v = 0; v < state.table.size(); ++v) {
      if (state.table.bounds[static_cast<std::size_t>(v)] > length - eps)
        state.non_dominated.reset_relaxed(static_cast<std::size_t>(v));
    }
    for (BitVector& mask : state.type_masks) {
      for (std::size_t w = 0; w < mask.word_count(); ++w) {
        mask.store_word_relaxed(w, mask.load_word_relaxed(w) &
                                       state.non_dominated.load_word_relaxed(w));
      }
    }
  }

  sh.incumbent = x;
  sh.incumbent_length.store(length, std::memory_order_relaxed);
  sh.time_to_best =
      std::chrono::duration<double>(Clock::now() - sh.start).count();
  sh.best_node = sh.nodes_snapshot();
  sh.best_leaf = sh.leaves_snapshot();

  if (!sh.cfg.enumerate_all && length < sh.lb + eps) {
    sh.proven.store(true, std::memory_order_relaxed);
    for (std::size_t w = 0; w < state.non_dominated.word_count(); ++w)
      state.non_dominated.store_word_relaxed(w, 0);
  }
}

class Worker {
 public:
  Worker(SearchShared& sh, int id)
      : sh_(&sh), id_(static_cast<std::size_t>(id)) {
    const std::size_t v = static_cast<std::size_t>(sh.state->table.size());
    phi_.assign(static_cast<std::size_t>(sh.n_levels), BitVector(v));
    stack_.reserve(static_cast<std::size_t>(sh.n_levels));
  }

  void run(const std::vector<int>& roots, int stride) {
    SearchShared& sh = *sh_;
    GlobalState& state = *sh.state;
    for (std::size_t i = id_; i < roots.size();
         i += static_cast<std::size_t>(stride)) {
      if (sh.timed_out.load(std::memory_order_relaxed) ||
          sh.proven.load(std::memory_order_relaxed))
        break;
      const int v = roots[i];
      if (!sh.cfg.enumerate_all &&
          !state.non_dominated.test_relaxed(static_cast<std::size_t>(v)))
        continue;
      stack_.push_back(v);
      count_node();
      BitVector& phi = phi_[0];
      for (std::size_t w = 0; w < phi.word_count(); ++w)
        phi.word(w) = state.non_dominated.load_word_relaxed(w) &
                      state.matrix.row(v).word(w);
      const double len = state.table.bounds[static_cast<std::size_t>(v)];
      if (sh.n_levels > 1) {
        if (forward_check(phi, 0, sh)) branch(1, phi, len);
      } else {
        count_leaf();
        update_incumbent(sh, stack_, len);
      }
      stack_.pop_back();
    }
  }

  std::uint64_t nodes() const { return nodes_; }
  std::uint64_t leaves() const { return leaves_; }

 private:
  void count_node() {
    ++nodes_;
    std::atomic_ref<std::uint64_t> ref(sh_->worker_nodes[id_]);
    ref.store(nodes_, std::memory_order_relaxed);
    if ((nodes_ & 0xfff) == 0 && Clock::now() > sh_->deadline)
      sh_->timed_out.store(true, std::memory_order_relaxed);
  }
  void count_leaf() {
    ++leaves_;
    std::atomic_ref<std::uint64_t> ref(sh_->worker_leaves[id_]);
    ref.store(leaves_, std::memory_order_relaxed);
  }

  void branch(int level, const BitVector& feasible, double len_so_far) {
    SearchShared& sh = *sh_;
    GlobalState& state = *sh.state;
    const double eps = sh.cfg.epsilon_len;
    const bool enumerate = sh.cfg.enumerate_all;
    const int t = state.instance_types[static_cast<std::size_t>(level)];
    const auto [start, end] = state.table.type_ranges[static_cast<std::size_t>(t)];

    if (!enumerate &&
        !(len_so_far <
          sh.incumbent_length.load(std::memory_order_relaxed) - eps))
      return;

    for (int v = start; v < end; ++v) {
      if (sh.timed_out.load(std::memory_order_relaxed)) return;
      if (!enumerate) {
        // ordered by non-decreasing bound, so the first dominated variable
        // dominates the rest of the loop as well
        if (!state.non_dominated.test_relaxed(static_cast<std::size_t>(v)))
          break;
        if (!(len_so_far <
              sh.incumbent_length.load(std::memory_order_relaxed) - eps))
          break;
      }
      if (!feasible.test(static_cast<std::size_t>(v))) continue;
      const double len =
          std::max(len_so_far, state.table.bounds[static_cast<std::size_t>(v)]);
      if (!enumerate &&
          !(len < sh.incumbent_length.load(std::memory_order_relaxed) - eps))
        continue;

      stack_.push_back(v);
      count_node();
      BitVector& phi = phi_[static_cast<std::size_t>(level)];
      BitVector::and_into(phi, feasible, state.matrix.row(v));
      if (static_cast<int>(stack_.size()) < sh.n_levels) {
        if (forward_check(phi, level, sh)) branch(level + 1, phi, len);
      } else {
        count_leaf();
        update_incumbent(sh, stack_, len);
      }
      stack_.pop_back();
    }
  }

  SearchShared* sh_;
  std::size_t id_;
  std::vector<BitVector> phi_;
  std::vector<int> stack_;
  std::uint64_t nodes_ = 0;
  std::uint64_t leaves_ = 0;
};

struct RootSearchResult {
  Incumbent incumbent;
  bool timed_out = false;
  bool proven_by_bound = false;
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  double time_to_best = 0.0;
  std::uint64_t best_node = 0;
};

// One pass of the parallel root loop: shuffles the root variables with the
// seeded RNG, deals them round-robin to the workers, and runs the recursive
// search to exhaustion, optimality proof or timeout.
inline RootSearchResult run_root_search(GlobalState& state, double lb,
                                        const SolverConfig& cfg,
                                        Clock::time_point deadline) {
  SearchShared sh;
  sh.state = &state;
  sh.cfg = cfg;
  sh.lb = lb;
  sh.n_levels = static_cast<int>(state.instance_types.size());
  sh.start = Clock::now();
  sh.deadline = deadline;
  sh.next_types =
      build_next_types(state.instance_types, state.type_masks.size());

  const int root_type = state.instance_types.front();
  const auto [start, end] =
      state.table.type_ranges[static_cast<std::size_t>(root_type)];
  std::vector<int> roots;
  for (int v = start; v < end; ++v) roots.push_back(v);
  std::mt19937_64 rng(cfg.rng_seed);
  std::shuffle(roots.begin(), roots.end(), rng);

  const int threads = std::max(1, cfg.threads);
  sh.worker_nodes.assign(static_cast<std::size_t>(threads), 0);
  sh.worker_leaves.assign(static_cast<std::size_t>(threads), 0);

  std::vector<std::unique_ptr<Worker>> workers;
  for (int i = 0; i < threads; ++i)
    workers.push_back(std::make_unique<Worker>(sh, i));
  if (threads == 1) {
    workers[0]->run(roots, 1);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i)
      pool.emplace_back([&, i] { workers[static_cast<std::size_t>(i)]->run(
          roots, threads); });
    for (std::thread& th : pool) th.join();
  }

  RootSearchResult out;
  out.timed_out = sh.timed_out.load();
  out.proven_by_bound = sh.proven.load();
  for (const auto& w : workers) {
    out.nodes += w->nodes();
    out.leaves += w->leaves();
  }
  out.time_to_best = sh.time_to_best;
  out.best_node = sh.best_node;
  out.incumbent.placements = sh.incumbent;
  out.incumbent.length = sh.incumbent_length.load();
  return out;
}

}  // namespace detail

struct SolveResult {
  SolveOutcome outcome;
  Incumbent incumbent;
};

// Full DB-PB search. On normal completion (no timeout) the returned
// incumbent is globally optimal; with no incumbent the instance is proven
// infeasible within the board length.
inline SolveResult solve(GlobalState& state, double trivial_lb,
                         const SolverConfig& cfg) {
  reset_search_state(state);
  const auto t0 = detail::Clock::now();
  const auto deadline =
      t0 + std::chrono::duration_cast<detail::Clock::duration>(
               std::chrono::duration<double>(cfg.time_limit));

  detail::RootSearchResult r =
      detail::run_root_search(state, trivial_lb, cfg, deadline);

  SolveResult res;
  res.incumbent = r.incumbent;
  SolveOutcome& out = res.outcome;
  out.nodes = r.nodes;
  out.leaves = r.leaves;
  out.time_to_best = r.time_to_best;
  out.best_node = r.best_node;
  out.timed_out = r.timed_out;
  out.solve_time =
      std::chrono::duration<double>(detail::Clock::now() - t0).count();

  const bool has_solution = !r.incumbent.placements.empty();
  if (has_solution) out.ub = r.incumbent.length;
  if (!r.timed_out) {
    out.proven = has_solution;
    out.proven_infeasible = !has_solution;
  } else {
    out.proven = r.proven_by_bound;
  }
  out.lb = (out.proven && out.ub) ? *out.ub : trivial_lb;
  res.incumbent.proven_optimal = out.proven;
  return res;
}

struct DecodedPlacement {
  int type_id = 0;
  int col = 0;
  int row = 0;
  int rotation_id = 0;
  double x = 0.0;  // reference position in board units
  double y = 0.0;
};

struct DecodedSolution {
  std::vector<DecodedPlacement> placements;
  double length = 0.0;
};

struct InternalConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maps the incumbent back to board placements and re-verifies containment
// and pairwise non-overlap with the geometry oracle.
inline DecodedSolution decode_solution(const Incumbent& inc,
                                       const GlobalState& state,
                                       const ShapeCache& cache) {
  if (inc.placements.empty())
    throw InternalConsistencyError("empty incumbent");
  const Board& board = cache.instance().board;
  DecodedSolution sol;
  double max_len = 0.0;
  for (int v : inc.placements) {
    const PlacementVariable& pv =
        state.table.vars[static_cast<std::size_t>(v)];
    DecodedPlacement p;
    p.type_id = pv.type_id;
    p.col = board.dot_col(pv.dot);
    p.row = board.dot_row(pv.dot);
    p.rotation_id = pv.rotation_id;
    p.x = p.col * board.gx;
    p.y = p.row * board.gy;
    max_len = std::max(max_len, pv.length_bound);
    sol.placements.push_back(p);
  }
  sol.length = max_len;

  for (const DecodedPlacement& p : sol.placements) {
    const PieceMetrics& m = cache.shape(p.type_id, p.rotation_id).metrics;
    if (p.x - m.x_min < -k_eps_geom ||
        p.x + m.x_max > board.length_ub + k_eps_geom ||
        p.y - m.y_min < -k_eps_geom ||
        p.y + m.y_max > board.width + k_eps_geom)
      throw InternalConsistencyError("decoded piece exceeds the board");
  }
  for (std::size_t i = 0; i < sol.placements.size(); ++i) {
    for (std::size_t j = i + 1; j < sol.placements.size(); ++j) {
      const DecodedPlacement& a = sol.placements[i];
      const DecodedPlacement& b = sol.placements[j];
      const RotatedShape& sa = cache.shape(a.type_id, a.rotation_id);
      const RotatedShape& sb = cache.shape(b.type_id, b.rotation_id);
      if (pieces_overlap(sa.polygon, sa.parts, {a.x, a.y}, sb.polygon,
                         sb.parts, {b.x, b.y}))
        throw InternalConsistencyError("decoded solution has overlap");
    }
  }
  return sol;
}

}  // namespace nesting
