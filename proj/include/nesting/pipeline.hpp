#pragma once

// Convenience assembly of the full preprocessing pipeline: shapes, dot
// variables, conflict edges and the packed search state, with build timing.

#include <chrono>
#include <memory>

#include "nesting/conflict.hpp"
#include "nesting/dotgrid.hpp"

namespace nesting {

struct Prepared {
  std::unique_ptr<Instance> instance;  // owned; cache points into it
  std::unique_ptr<ShapeCache> cache;
  VariableTable table;
  std::vector<std::pair<int, int>> edges;
  GlobalState state;
  double trivial_lb = 0.0;
  LengthLadder ladder;
  double build_time = 0.0;
};

inline Prepared prepare(Instance inst) {
  const auto t0 = std::chrono::steady_clock::now();
  Prepared p;
  p.instance = std::make_unique<Instance>(std::move(inst));
  p.cache = std::make_unique<ShapeCache>(*p.instance);
  p.table = enumerate_variables(*p.cache);
  StencilTable stencils(*p.cache);
  p.edges = conflict_edges(*p.cache, p.table, stencils);
  p.state = init_global_state(*p.cache, build_conflict_matrix(p.table, p.edges),
                              p.table);
  p.trivial_lb = trivial_lower_bound(*p.cache);
  p.ladder = length_ladder(p.table, p.trivial_lb);
  p.build_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return p;
}

}  // namespace nesting
