#pragma once

// Shared test fixtures: the three-piece reference instance, its nine-piece
// wide-board variant, and a seeded random instance generator small enough
// for exhaustive verification.

#include <numbers>
#include <random>

#include "nesting/dotgrid.hpp"

namespace testsupport {

inline nesting::PieceType diamond(int demand,
                                  std::vector<double> rotations = {0.0}) {
  nesting::PieceType t;
  t.polygon = nesting::make_polygon({{2, 0}, {4, 2}, {2, 4}, {0, 2}});
  t.demand = demand;
  t.rotations = std::move(rotations);
  return t;
}

inline nesting::PieceType square3(int demand) {
  nesting::PieceType t;
  t.polygon = nesting::make_polygon({{0, 0}, {3, 0}, {3, 3}, {0, 3}});
  t.demand = demand;
  return t;
}

inline nesting::PieceType triangle(int demand,
                                   std::vector<double> rotations = {0.0}) {
  nesting::PieceType t;
  t.polygon = nesting::make_polygon({{0, 0}, {4, 0}, {2, 3}});
  t.demand = demand;
  t.rotations = std::move(rotations);
  return t;
}

inline nesting::Instance three_instance() {
  nesting::Instance inst;
  inst.name = "three";
  inst.board = nesting::build_board(7, 7, 1, 1);
  inst.types = {diamond(1), square3(1), triangle(1)};
  return inst;
}

inline nesting::Instance threep3w9_instance(bool with_rotations = false) {
  nesting::Instance inst;
  inst.name = with_rotations ? "threep3w9_rot" : "threep3w9";
  inst.board = nesting::build_board(9, 13, 1, 1);
  if (with_rotations) {
    inst.types = {diamond(3, {0.0, std::numbers::pi / 4}), square3(3),
                  triangle(3, {0.0, std::numbers::pi})};
  } else {
    inst.types = {diamond(3), square3(3), triangle(3)};
  }
  return inst;
}

// Small random instances: 1-3 types, total 2-4 pieces, at most 2 rotations,
// board of at most 6x6 dots at unit grid. Pieces are large relative to the
// board so exhaustive checks stay cheap.
inline nesting::Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> board_dim(2, 5);
  std::uniform_int_distribution<int> type_count(1, 3);
  std::uniform_int_distribution<int> shape_kind(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);

  nesting::Instance inst;
  inst.name = "random";
  const double w = board_dim(rng);
  const double l = board_dim(rng);
  inst.board = nesting::build_board(w, l, 1, 1);

  const int T = type_count(rng);
  int total = 0;
  for (int t = 0; t < T && total < 4; ++t) {
    std::uniform_real_distribution<double> dim(0.8, std::min(w, l));
    const double a = dim(rng);
    const double b = dim(rng);
    nesting::PieceType type;
    switch (shape_kind(rng)) {
      case 0:  // rectangle
        type.polygon =
            nesting::make_polygon({{0, 0}, {a, 0}, {a, b}, {0, b}});
        break;
      case 1:  // right triangle
        type.polygon = nesting::make_polygon({{0, 0}, {a, 0}, {0, b}});
        break;
      default:  // diamond
        type.polygon = nesting::make_polygon(
            {{a / 2, 0}, {a, b / 2}, {a / 2, b}, {0, b / 2}});
        break;
    }
    const int remaining = 4 - total;
    std::uniform_int_distribution<int> demand(1, remaining >= 2 ? 2 : 1);
    type.demand = demand(rng);
    total += type.demand;
    if (coin(rng)) type.rotations = {0.0, std::numbers::pi / 2};
    inst.types.push_back(std::move(type));
  }
  return inst;
}

}  // namespace testsupport
