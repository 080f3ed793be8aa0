#pragma once

// Board discretization: inner-fit dot sets, no-fit stencils per
// (type, rotation) pair, placement-variable enumeration and the feasible
// length ladder.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nesting/geometry.hpp"

namespace nesting {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleInstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Board {
  double width = 0.0;      // W
  double length_ub = 0.0;  // upper bound on strip length
  double gx = 1.0;
  double gy = 1.0;
  int cols = 0;
  int rows = 0;
  int dots = 0;

  int dot_index(int col, int row) const { return col * rows + row; }
  int dot_col(int d) const { return d / rows; }
  int dot_row(int d) const { return d % rows; }
};

inline Board build_board(double width, double length_ub, double gx,
                         double gy) {
  if (width <= 0 || length_ub <= 0 || gx <= 0 || gy <= 0)
    throw ConfigError("board dimensions and grid steps must be positive");
  Board b;
  b.width = width;
  b.length_ub = length_ub;
  b.gx = gx;
  b.gy = gy;
  b.cols = static_cast<int>(std::floor(length_ub / gx + k_eps_geom)) + 1;
  b.rows = static_cast<int>(std::floor(width / gy + k_eps_geom)) + 1;
  b.dots = b.cols * b.rows;
  return b;
}

struct PieceType {
  Polygon polygon;
  int demand = 1;
  std::vector<double> rotations = {0.0};  // radians
};

struct Instance {
  std::string name;
  Board board;
  std::vector<PieceType> types;

  int total_pieces() const {
    int n = 0;
    for (const PieceType& t : types) n += t.demand;
    return n;
  }
};

// Rotated geometry cached per (type, rotation): the rotated polygon, its
// metrics and its convex decomposition.
struct RotatedShape {
  Polygon polygon;
  PieceMetrics metrics;
  std::vector<ConvexPart> parts;
};

class ShapeCache {
 public:
  explicit ShapeCache(const Instance& inst) : inst_(&inst) {
    shapes_.resize(inst.types.size());
    for (std::size_t t = 0; t < inst.types.size(); ++t) {
      for (double theta : inst.types[t].rotations) {
        RotatedShape s;
        s.polygon = rotate_polygon(inst.types[t].polygon, theta);
        s.metrics = piece_metrics(s.polygon);
        s.parts = convex_decompose(s.polygon);
        shapes_[t].push_back(std::move(s));
      }
    }
  }

  const Instance& instance() const { return *inst_; }
  const RotatedShape& shape(int t, int theta_id) const {
    return shapes_[static_cast<std::size_t>(t)]
                  [static_cast<std::size_t>(theta_id)];
  }
  int rotation_count(int t) const {
    return static_cast<int>(shapes_[static_cast<std::size_t>(t)].size());
  }

 private:
  const Instance* inst_;
  std::vector<std::vector<RotatedShape>> shapes_;
};

// Eq.(6) style bound: max of total-area/width and the longest piece length.
// With rotations the per-type length is the minimum over the allowed
// orientations, since a piece may be rotated to fit lengthwise.
inline double trivial_lower_bound(const ShapeCache& cache) {
  const Instance& inst = cache.instance();
  double area_sum = 0.0;
  double max_len = 0.0;
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const int ti = static_cast<int>(t);
    area_sum += cache.shape(ti, 0).metrics.area * inst.types[t].demand;
    double len = cache.shape(ti, 0).metrics.length;
    for (int k = 1; k < cache.rotation_count(ti); ++k)
      len = std::min(len, cache.shape(ti, k).metrics.length);
    max_len = std::max(max_len, len);
  }
  return std::max(area_sum / inst.board.width, max_len);
}

// Dots where the rotated piece's bounding box lies inside the board, with
// eps slack so integer geometry never loses boundary dots to rounding.
inline std::vector<int> compute_ifp(const ShapeCache& cache, int t,
                                    int theta_id) {
  const Board& b = cache.instance().board;
  const PieceMetrics& m = cache.shape(t, theta_id).metrics;
  std::vector<int> dots;
  for (int c = 0; c < b.cols; ++c) {
    const double x = c * b.gx;
    if (x - m.x_min < -k_eps_geom) continue;
    if (x + m.x_max > b.length_ub + k_eps_geom) continue;
    for (int r = 0; r < b.rows; ++r) {
      const double y = r * b.gy;
      if (y - m.y_min < -k_eps_geom) continue;
      if (y + m.y_max > b.width + k_eps_geom) continue;
      dots.push_back(b.dot_index(c, r));
    }
  }
  return dots;
}

struct StencilKey {
  int t, theta_a, u, theta_b;
  auto operator<=>(const StencilKey&) const = default;
};

// All integer grid offsets (dcol, drow) at which a piece (u, theta_b) placed
// relative to a piece (t, theta_a) overlaps it. Translation-invariant, so a
// single stencil serves every static dot.
inline std::vector<std::pair<int, int>> compute_nfp_stencil(
    const ShapeCache& cache, int t, int theta_a, int u, int theta_b) {
  const Board& b = cache.instance().board;
  const RotatedShape& sa = cache.shape(t, theta_a);
  const RotatedShape& sb = cache.shape(u, theta_b);
  const PieceMetrics& ma = sa.metrics;
  const PieceMetrics& mb = sb.metrics;

  // bbox overlap window for the relative offset
  const int cmin = static_cast<int>(
      std::ceil((-(ma.x_min + mb.x_max)) / b.gx - k_eps_geom));
  const int cmax = static_cast<int>(
      std::floor((ma.x_max + mb.x_min) / b.gx + k_eps_geom));
  const int rmin = static_cast<int>(
      std::ceil((-(ma.y_min + mb.y_max)) / b.gy - k_eps_geom));
  const int rmax = static_cast<int>(
      std::floor((ma.y_max + mb.y_min) / b.gy + k_eps_geom));

  std::vector<std::pair<int, int>> offsets;
  for (int dc = cmin; dc <= cmax; ++dc) {
    for (int dr = rmin; dr <= rmax; ++dr) {
      const Point2 da{0.0, 0.0};
      const Point2 db{dc * b.gx, dr * b.gy};
      if (pieces_overlap(sa.polygon, sa.parts, da, sb.polygon, sb.parts, db))
        offsets.emplace_back(dc, dr);
    }
  }
  return offsets;
}

// Cache of stencils keyed by (t, theta_a, u, theta_b).
class StencilTable {
 public:
  explicit StencilTable(const ShapeCache& cache) : cache_(&cache) {}

  const std::vector<std::pair<int, int>>& get(int t, int theta_a, int u,
                                              int theta_b) {
    const StencilKey key{t, theta_a, u, theta_b};
    auto it = stencils_.find(key);
    if (it == stencils_.end()) {
      it = stencils_
               .emplace(key,
                        compute_nfp_stencil(*cache_, t, theta_a, u, theta_b))
               .first;
    }
    return it->second;
  }

 private:
  const ShapeCache* cache_;
  std::map<StencilKey, std::vector<std::pair<int, int>>> stencils_;
};

struct PlacementVariable {
  int type_id = 0;
  int dot = 0;
  int rotation_id = 0;
  double length_bound = 0.0;  // c_d * gx + x_max(type, rotation)
};

struct VariableTable {
  std::vector<PlacementVariable> vars;
  // per type id: half-open [start, end) index interval in `vars`
  std::vector<std::pair<int, int>> type_ranges;
  // decision level -> type id; types grouped in non-increasing area order
  std::vector<int> instance_types;
  std::vector<double> bounds;  // length bound per variable index
  // per type id: dense (rotation_id * dots + dot) -> variable index, -1 if
  // the dot is outside the IFP
  std::vector<std::vector<int>> index_of;

  int size() const { return static_cast<int>(vars.size()); }
};

// One variable per (type, rotation, IFP dot). Types appear in the table in
// non-increasing area order; within a type, variables are sorted by
// non-decreasing length bound with (dot, rotation) as the deterministic
// tie-break.
inline VariableTable enumerate_variables(const ShapeCache& cache) {
  const Instance& inst = cache.instance();
  const Board& b = inst.board;
  const int T = static_cast<int>(inst.types.size());

  std::vector<int> type_order(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) type_order[static_cast<std::size_t>(t)] = t;
  std::stable_sort(type_order.begin(), type_order.end(), [&](int a, int c) {
    return cache.shape(a, 0).metrics.area > cache.shape(c, 0).metrics.area;
  });

  VariableTable table;
  table.type_ranges.assign(static_cast<std::size_t>(T), {0, 0});
  table.index_of.assign(static_cast<std::size_t>(T), {});

  for (int t : type_order) {
    std::vector<PlacementVariable> group;
    bool any_ifp = false;
    for (int k = 0; k < cache.rotation_count(t); ++k) {
      const std::vector<int> ifp = compute_ifp(cache, t, k);
      if (!ifp.empty()) any_ifp = true;
      const double xmax = cache.shape(t, k).metrics.x_max;
      for (int d : ifp)
        group.push_back({t, d, k, b.dot_col(d) * b.gx + xmax});
    }
    if (!any_ifp)
      throw InfeasibleInstanceError("piece type " + std::to_string(t) +
                                    " has an empty inner-fit set for every "
                                    "allowed rotation");
    std::sort(group.begin(), group.end(),
              [](const PlacementVariable& a, const PlacementVariable& c) {
                if (a.length_bound != c.length_bound)
                  return a.length_bound < c.length_bound;
                if (a.dot != c.dot) return a.dot < c.dot;
                return a.rotation_id < c.rotation_id;
              });
    const int start = table.size();
    table.vars.insert(table.vars.end(), group.begin(), group.end());
    table.type_ranges[static_cast<std::size_t>(t)] = {start, table.size()};
    for (int i = 0; i < inst.types[static_cast<std::size_t>(t)].demand; ++i)
      table.instance_types.push_back(t);
  }

  table.bounds.reserve(table.vars.size());
  for (const PlacementVariable& v : table.vars)
    table.bounds.push_back(v.length_bound);

  for (int t = 0; t < T; ++t) {
    auto& idx = table.index_of[static_cast<std::size_t>(t)];
    idx.assign(static_cast<std::size_t>(cache.rotation_count(t)) *
                   static_cast<std::size_t>(b.dots),
               -1);
  }
  for (int v = 0; v < table.size(); ++v) {
    const PlacementVariable& pv = table.vars[static_cast<std::size_t>(v)];
    table.index_of[static_cast<std::size_t>(pv.type_id)]
                  [static_cast<std::size_t>(pv.rotation_id) *
                       static_cast<std::size_t>(b.dots) +
                   static_cast<std::size_t>(pv.dot)] = v;
  }
  return table;
}

struct LengthLadder {
  double trivial_lb = 0.0;
  std::vector<double> values;  // strictly increasing, all > trivial_lb

  int size() const { return static_cast<int>(values.size()); }
};

// Sorted distinct variable length bounds above the lower bound.
inline LengthLadder length_ladder(const VariableTable& table,
                                  double trivial_lb) {
  LengthLadder ladder;
  ladder.trivial_lb = trivial_lb;
  std::vector<double> vals;
  for (double b : table.bounds)
    if (b > trivial_lb + k_eps_geom) vals.push_back(b);
  std::sort(vals.begin(), vals.end());
  for (double v : vals) {
    if (ladder.values.empty() || v > ladder.values.back() + k_eps_geom)
      ladder.values.push_back(v);
  }
  return ladder;
}

}  // namespace nesting
