#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "nesting/conflict.hpp"
#include "support/fixtures.hpp"

using namespace nesting;

namespace {

struct Built {
  std::unique_ptr<ShapeCache> cache;
  VariableTable table;
  std::vector<std::pair<int, int>> edges;
  GlobalState state;
};

Built build(const Instance& inst) {
  Built b;
  b.cache = std::make_unique<ShapeCache>(inst);
  b.table = enumerate_variables(*b.cache);
  StencilTable stencils(*b.cache);
  b.edges = conflict_edges(*b.cache, b.table, stencils);
  b.state = init_global_state(
      *b.cache, build_conflict_matrix(b.table, b.edges), b.table);
  return b;
}

}  // namespace

TEST_CASE("three-piece instance has 1266 conflict edges") {
  static const Instance inst = testsupport::three_instance();
  const Built b = build(inst);
  CHECK(b.table.size() == 61);
  CHECK(b.edges.size() == 1266);
}

TEST_CASE("edge list is canonical and geometric") {
  static const Instance inst = testsupport::three_instance();
  const Built b = build(inst);
  std::set<std::pair<int, int>> seen;
  const Board& board = inst.board;
  for (const auto& [v, w] : b.edges) {
    CHECK(v < w);
    CHECK(seen.insert({v, w}).second);  // no duplicates
    const PlacementVariable& pv = b.table.vars[static_cast<std::size_t>(v)];
    const PlacementVariable& pw = b.table.vars[static_cast<std::size_t>(w)];
    const RotatedShape& sa = b.cache->shape(pv.type_id, pv.rotation_id);
    const RotatedShape& sb = b.cache->shape(pw.type_id, pw.rotation_id);
    const Point2 da{board.dot_col(pv.dot) * board.gx,
                    board.dot_row(pv.dot) * board.gy};
    const Point2 db{board.dot_col(pw.dot) * board.gx,
                    board.dot_row(pw.dot) * board.gy};
    CHECK(pieces_overlap(sa.polygon, sa.parts, da, sb.polygon, sb.parts, db));
  }
}

TEST_CASE("matrix rows zero exactly the edges plus the symmetry prefix") {
  static const Instance inst = testsupport::threep3w9_instance();
  const Built b = build(inst);
  std::set<std::pair<int, int>> edge_set;
  for (const auto& [v, w] : b.edges) {
    edge_set.insert({v, w});
    edge_set.insert({w, v});
  }
  const int V = b.table.size();
  for (int v = 0; v < V; ++v) {
    const auto [start, end] =
        b.table.type_ranges[static_cast<std::size_t>(
            b.table.vars[static_cast<std::size_t>(v)].type_id)];
    for (int w = 0; w < V; ++w) {
      const bool prefix = w >= start && w <= v;
      const bool expected_zero = prefix || edge_set.contains({v, w});
      CHECK(b.state.matrix.row(v).test(static_cast<std::size_t>(w)) ==
            !expected_zero);
    }
  }
}

TEST_CASE("propagation is intersective, commutative and idempotent") {
  static const Instance inst = testsupport::three_instance();
  const Built b = build(inst);
  const int V = b.table.size();
  BitVector all(static_cast<std::size_t>(V), true);
  const BitVector p0 = propagate(all, b.state.matrix, 0);
  const BitVector p05 = propagate(p0, b.state.matrix, 5);
  const BitVector p50 = propagate(propagate(all, b.state.matrix, 5),
                                  b.state.matrix, 0);
  CHECK(p05 == p50);
  CHECK(propagate(p05, b.state.matrix, 0) == p05);
  for (int w = 0; w < V; ++w) {
    if (p0.test(static_cast<std::size_t>(w)))
      CHECK(all.test(static_cast<std::size_t>(w)));
  }
}

TEST_CASE("capacity budget is enforced") {
  static const Instance inst = testsupport::three_instance();
  const ShapeCache cache(inst);
  const VariableTable table = enumerate_variables(cache);
  StencilTable stencils(cache);
  const auto edges = conflict_edges(cache, table, stencils);
  CHECK_THROWS_AS(build_conflict_matrix(table, edges, 16), CapacityError);
}

TEST_CASE("reset restores the full search state") {
  static const Instance inst = testsupport::three_instance();
  Built b = build(inst);
  b.state.non_dominated.reset(3);
  b.state.type_masks[0].reset_all();
  reset_search_state(b.state);
  CHECK(b.state.non_dominated.test(3));
  for (std::size_t t = 0; t < b.state.type_masks.size(); ++t) {
    const auto [start, end] = b.table.type_ranges[t];
    CHECK(b.state.type_masks[t].popcount() ==
          static_cast<std::size_t>(end - start));
  }
}

TEST_CASE("count dump and adjacency export") {
  static const Instance inst = testsupport::three_instance();
  const Built b = build(inst);
  std::ostringstream os;
  dump_counts(os, b.state);
  CHECK(os.str().find("variables: 61") != std::string::npos);
  CHECK(os.str().find("edges: 1266") != std::string::npos);

  std::ostringstream bin;
  export_adjacency(bin, b.state.matrix);
  CHECK(bin.str().size() == 61 * ((61 + 63) / 64) * 8);
}
