#pragma once

// Bit-packed adjacency of the conflict inverse graph with symmetry breaking
// for identical pieces, plus the per-type variable masks and lookup
// structures shared by the search.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nesting/bitvector.hpp"
#include "nesting/dotgrid.hpp"

namespace nesting {

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All unordered geometric conflict pairs {v, w}, v < w. These are the edge
// inequalities of the pairwise model, derived from the no-fit stencils.
inline std::vector<std::pair<int, int>> conflict_edges(
    const ShapeCache& cache, const VariableTable& table,
    StencilTable& stencils) {
  const Board& b = cache.instance().board;
  const int T = static_cast<int>(cache.instance().types.size());
  std::vector<std::pair<int, int>> edges;

  for (int v = 0; v < table.size(); ++v) {
    const PlacementVariable& pv = table.vars[static_cast<std::size_t>(v)];
    const int c = b.dot_col(pv.dot);
    const int r = b.dot_row(pv.dot);
    for (int u = 0; u < T; ++u) {
      for (int kb = 0; kb < cache.rotation_count(u); ++kb) {
        const auto& st = stencils.get(pv.type_id, pv.rotation_id, u, kb);
        const auto& idx = table.index_of[static_cast<std::size_t>(u)];
        for (const auto& [dc, dr] : st) {
          const int c2 = c + dc;
          const int r2 = r + dr;
          if (c2 < 0 || c2 >= b.cols || r2 < 0 || r2 >= b.rows) continue;
          const int w = idx[static_cast<std::size_t>(kb) *
                                static_cast<std::size_t>(b.dots) +
                            static_cast<std::size_t>(b.dot_index(c2, r2))];
          if (w > v) edges.emplace_back(v, w);
        }
      }
    }
  }
  return edges;
}

// Row v holds the feasibility mask propagated when variable v is selected:
// 0 on every conflicting variable and, after symmetry breaking, on the whole
// same-type prefix [start_t, v].
struct ConflictMatrix {
  int V = 0;
  std::vector<BitVector> rows;

  const BitVector& row(int v) const {
    return rows[static_cast<std::size_t>(v)];
  }
  std::size_t bytes() const {
    if (rows.empty()) return 0;
    return static_cast<std::size_t>(V) * rows.front().word_count() * 8;
  }
};

struct ConflictBuildResult {
  ConflictMatrix matrix;
  std::size_t edge_count = 0;
};

inline ConflictBuildResult build_conflict_matrix(
    const VariableTable& table, const std::vector<std::pair<int, int>>& edges,
    std::size_t memory_budget_bytes = std::size_t{4} << 30) {
  const int V = table.size();
  const std::size_t words = (static_cast<std::size_t>(V) + 63) / 64;
  const std::size_t required = static_cast<std::size_t>(V) * words * 8;
  if (required > memory_budget_bytes)
    throw CapacityError("conflict matrix needs " + std::to_string(required) +
                        " bytes, budget is " +
                        std::to_string(memory_budget_bytes));

  ConflictBuildResult out;
  out.matrix.V = V;
  out.matrix.rows.assign(static_cast<std::size_t>(V),
                         BitVector(static_cast<std::size_t>(V), true));
  for (const auto& [v, w] : edges) {
    out.matrix.rows[static_cast<std::size_t>(v)].reset(
        static_cast<std::size_t>(w));
    out.matrix.rows[static_cast<std::size_t>(w)].reset(
        static_cast<std::size_t>(v));
  }
  out.edge_count = edges.size();

  // Symmetry breaking for identical pieces: selecting variable i of a type
  // disables every variable of the same type with index <= i.
  for (const auto& [start, end] : table.type_ranges) {
    for (int i = start; i < end; ++i) {
      BitVector& row = out.matrix.rows[static_cast<std::size_t>(i)];
      for (int j = start; j <= i; ++j) row.reset(static_cast<std::size_t>(j));
    }
  }
  return out;
}

struct GlobalState {
  ConflictMatrix matrix;
  VariableTable table;
  std::size_t edge_count = 0;
  BitVector non_dominated;            // shared, monotone 1 -> 0
  std::vector<BitVector> type_masks;  // per type id, shared, monotone 1 -> 0
  std::vector<int> instance_types;    // decision level -> type id
};

inline GlobalState init_global_state(const ShapeCache& cache,
                                     ConflictBuildResult build,
                                     VariableTable table) {
  GlobalState state;
  state.matrix = std::move(build.matrix);
  state.edge_count = build.edge_count;
  state.table = std::move(table);
  const int V = state.table.size();
  state.non_dominated = BitVector(static_cast<std::size_t>(V), true);
  state.type_masks.assign(cache.instance().types.size(),
                          BitVector(static_cast<std::size_t>(V), false));
  for (std::size_t t = 0; t < state.type_masks.size(); ++t) {
    const auto [start, end] = state.table.type_ranges[t];
    for (int v = start; v < end; ++v)
      state.type_masks[t].set(static_cast<std::size_t>(v));
  }
  state.instance_types = state.table.instance_types;
  return state;
}

// Re-arms the mutable search state: all variables enabled, per-type masks
// restored to their full index ranges.
inline void reset_search_state(GlobalState& state) {
  state.non_dominated.set_all();
  for (std::size_t t = 0; t < state.type_masks.size(); ++t) {
    state.type_masks[t].reset_all();
    const auto [start, end] = state.table.type_ranges[t];
    for (int v = start; v < end; ++v)
      state.type_masks[t].set(static_cast<std::size_t>(v));
  }
}

inline BitVector propagate(const BitVector& feasible,
                           const ConflictMatrix& matrix, int v) {
  BitVector out = feasible;
  out.and_assign(matrix.row(v));
  return out;
}

inline void dump_counts(std::ostream& os, const GlobalState& state) {
  const std::size_t V = static_cast<std::size_t>(state.table.size());
  const std::size_t words = V == 0 ? 0 : (V + 63) / 64;
  os << "variables: " << V << "\n"
     << "edges: " << state.edge_count << "\n"
     << "matrix_bytes: " << V * words * 8 << "\n";
}

// Debug export: row-major, little-endian 64-bit words.
inline void export_adjacency(std::ostream& os, const ConflictMatrix& m) {
  for (const BitVector& row : m.rows) {
    for (std::size_t w = 0; w < row.word_count(); ++w) {
      std::uint64_t word = row.word(w);
      char buf[8];
      for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<char>(word & 0xff);
        word >>= 8;
      }
      os.write(buf, 8);
    }
  }
}

}  // namespace nesting
