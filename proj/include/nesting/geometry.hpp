#pragma once

// 2D polygon kernel: areas, rotations, bounding metrics, convex
// decomposition, convex no-fit polygons and the interior-overlap
// predicate used as ground truth for all dot-set construction.
//
// All functions here are pure and safe to call concurrently.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nesting {

inline constexpr double k_eps_geom = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }

inline double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

struct InvalidGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Counter-clockwise convex polygon, vertices only.
struct ConvexPart {
  std::vector<Point2> vertices;
};

// Simple counter-clockwise polygon with a reference point. By default the
// reference sits at the bottom-left corner of the axis-aligned bounding box.
struct Polygon {
  std::vector<Point2> vertices;
  Point2 reference;
};

struct PieceMetrics {
  double x_min = 0.0;  // reference to leftmost point
  double x_max = 0.0;  // reference to rightmost point
  double y_min = 0.0;
  double y_max = 0.0;
  double length = 0.0;  // x_min + x_max
  double area = 0.0;
};

namespace detail {

inline double signed_area(const std::vector<Point2>& vs) {
  double a = 0.0;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = vs[i];
    const Point2& q = vs[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

inline bool segments_properly_intersect(Point2 a, Point2 b, Point2 c,
                                        Point2 d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace detail

inline void validate_polygon(const Polygon& p) {
  const std::size_t n = p.vertices.size();
  if (n < 3) throw InvalidGeometryError("polygon has fewer than 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = p.vertices[i];
    const Point2& b = p.vertices[(i + 1) % n];
    if (std::abs(a.x - b.x) < k_eps_geom && std::abs(a.y - b.y) < k_eps_geom)
      throw InvalidGeometryError("repeated consecutive vertices");
    if (!std::isfinite(a.x) || !std::isfinite(a.y))
      throw InvalidGeometryError("non-finite vertex coordinate");
  }
  if (detail::signed_area(p.vertices) <= k_eps_geom)
    throw InvalidGeometryError("polygon is degenerate or clockwise");
  // simplicity: no two non-adjacent edges cross
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (detail::segments_properly_intersect(
              p.vertices[i], p.vertices[(i + 1) % n], p.vertices[j],
              p.vertices[(j + 1) % n]))
        throw InvalidGeometryError("polygon is self-intersecting");
    }
  }
}

inline Point2 bbox_bottom_left(const std::vector<Point2>& vs) {
  Point2 bl = vs.front();
  for (const Point2& v : vs) {
    bl.x = std::min(bl.x, v.x);
    bl.y = std::min(bl.y, v.y);
  }
  return bl;
}

// Builds a polygon with the default reference (bbox bottom-left) and
// validates it.
inline Polygon make_polygon(std::vector<Point2> vertices) {
  Polygon p{std::move(vertices), {}};
  p.reference = bbox_bottom_left(p.vertices);
  validate_polygon(p);
  return p;
}

inline Polygon make_polygon(std::vector<Point2> vertices, Point2 reference) {
  Polygon p{std::move(vertices), reference};
  validate_polygon(p);
  return p;
}

inline double polygon_area(const Polygon& p) {
  const double a = detail::signed_area(p.vertices);
  if (a <= k_eps_geom) throw InvalidGeometryError("degenerate polygon area");
  return a;
}

// Rotates the vertices about the reference point; the reference itself is
// unchanged.
inline Polygon rotate_polygon(const Polygon& p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Polygon out = p;
  for (Point2& v : out.vertices) {
    const double dx = v.x - p.reference.x;
    const double dy = v.y - p.reference.y;
    v.x = p.reference.x + c * dx - s * dy;
    v.y = p.reference.y + s * dx + c * dy;
  }
  return out;
}

inline PieceMetrics piece_metrics(const Polygon& p) {
  PieceMetrics m;
  double xlo = p.vertices.front().x, xhi = xlo;
  double ylo = p.vertices.front().y, yhi = ylo;
  for (const Point2& v : p.vertices) {
    xlo = std::min(xlo, v.x);
    xhi = std::max(xhi, v.x);
    ylo = std::min(ylo, v.y);
    yhi = std::max(yhi, v.y);
  }
  m.x_min = p.reference.x - xlo;
  m.x_max = xhi - p.reference.x;
  m.y_min = p.reference.y - ylo;
  m.y_max = yhi - p.reference.y;
  m.length = m.x_min + m.x_max;
  m.area = polygon_area(p);
  return m;
}

namespace detail {

inline bool is_convex_ccw(const std::vector<Point2>& vs) {
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) < -k_eps_geom)
      return false;
  }
  return true;
}

inline bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
  const double d1 = cross(a, b, p);
  const double d2 = cross(b, c, p);
  const double d3 = cross(c, a, p);
  return d1 > k_eps_geom && d2 > k_eps_geom && d3 > k_eps_geom;
}

}  // namespace detail

// Ear-clipping triangulation. Any interior-disjoint convex partition is
// acceptable; triangles are the baseline. A convex input comes back as a
// single part.
inline std::vector<ConvexPart> convex_decompose(const Polygon& p) {
  validate_polygon(p);
  if (detail::is_convex_ccw(p.vertices)) return {ConvexPart{p.vertices}};

  std::vector<Point2> vs = p.vertices;
  std::vector<ConvexPart> parts;
  std::size_t guard = 0;
  const std::size_t max_iter = vs.size() * vs.size() + 16;
  while (vs.size() > 3) {
    if (++guard > max_iter)
      throw InvalidGeometryError("ear clipping failed on degenerate input");
    const std::size_t n = vs.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = vs[(i + n - 1) % n];
      const Point2 b = vs[i];
      const Point2 c = vs[(i + 1) % n];
      if (cross(a, b, c) <= k_eps_geom) continue;  // reflex or collinear
      bool ear = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
        if (detail::point_in_triangle(vs[j], a, b, c)) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      parts.push_back(ConvexPart{{a, b, c}});
      vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped)
      throw InvalidGeometryError("ear clipping found no ear");
  }
  parts.push_back(ConvexPart{vs});
  return parts;
}

// Minkowski sum of `a` and the point-reflection of `b`, both taken relative
// to the origin. Strict interior membership of the relative reference vector
// is equivalent to interior intersection of the two parts.
inline ConvexPart convex_nfp(const ConvexPart& a, const ConvexPart& b) {
  std::vector<Point2> nb(b.vertices.size());
  for (std::size_t i = 0; i < b.vertices.size(); ++i)
    nb[i] = {-b.vertices[i].x, -b.vertices[i].y};

  // Minkowski sum of two convex polygons via convex hull of pairwise sums.
  // Quadratic in vertex count, which is small for convex parts.
  std::vector<Point2> pts;
  pts.reserve(a.vertices.size() * nb.size());
  for (const Point2& pa : a.vertices)
    for (const Point2& pb : nb) pts.push_back(pa + pb);

  // Andrew monotone chain.
  std::sort(pts.begin(), pts.end(), [](Point2 l, Point2 r) {
    return l.x < r.x || (l.x == r.x && l.y < r.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Point2 l, Point2 r) {
                          return std::abs(l.x - r.x) < k_eps_geom &&
                                 std::abs(l.y - r.y) < k_eps_geom;
                        }),
            pts.end());
  if (pts.size() < 3) return ConvexPart{pts};
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= k_eps_geom)
      --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= k_eps_geom)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return ConvexPart{hull};
}

inline bool point_strictly_inside(const ConvexPart& part, Point2 p,
                                  double margin = k_eps_geom) {
  const std::size_t n = part.vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(part.vertices[i], part.vertices[(i + 1) % n], p) <= margin)
      return false;
  }
  return true;
}

namespace detail {

// Sutherland-Hodgman clip of convex subject against convex clip window.
inline std::vector<Point2> clip_convex(const std::vector<Point2>& subject,
                                       const std::vector<Point2>& clip) {
  std::vector<Point2> out = subject;
  const std::size_t cn = clip.size();
  for (std::size_t i = 0; i < cn && !out.empty(); ++i) {
    const Point2 a = clip[i];
    const Point2 b = clip[(i + 1) % cn];
    std::vector<Point2> in;
    in.swap(out);
    const std::size_t n = in.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Point2 p = in[j];
      const Point2 q = in[(j + 1) % n];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      if (dp >= 0) out.push_back(p);
      if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
        const double t = dp / (dp - dq);
        out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
  }
  return out;
}

inline double convex_intersection_area(const std::vector<Point2>& a,
                                       const std::vector<Point2>& b) {
  const std::vector<Point2> inter = clip_convex(a, b);
  if (inter.size() < 3) return 0.0;
  return std::abs(signed_area(inter));
}

inline std::vector<Point2> transformed(const ConvexPart& part, Point2 ref,
                                       Point2 at) {
  std::vector<Point2> out = part.vertices;
  for (Point2& v : out) {
    v.x += at.x - ref.x;
    v.y += at.y - ref.y;
  }
  return out;
}

}  // namespace detail

// Interior-overlap predicate over convex decompositions. The parts must
// correspond to the already-rotated pieces; each piece is translated so its
// reference point sits at the given placement. Touching boundaries do not
// count as overlap. eps_area scales with the smallest part area involved.
inline bool pieces_overlap(const Polygon& a,
                           const std::vector<ConvexPart>& a_parts, Point2 da,
                           const Polygon& b,
                           const std::vector<ConvexPart>& b_parts, Point2 db,
                           double eps_area_rel = 1e-9) {
  double min_area = std::numeric_limits<double>::max();
  for (const ConvexPart& pa : a_parts)
    min_area = std::min(min_area, std::abs(detail::signed_area(pa.vertices)));
  for (const ConvexPart& pb : b_parts)
    min_area = std::min(min_area, std::abs(detail::signed_area(pb.vertices)));
  const double eps_area = eps_area_rel * min_area;

  double total = 0.0;
  for (const ConvexPart& pa : a_parts) {
    const std::vector<Point2> ta = detail::transformed(pa, a.reference, da);
    for (const ConvexPart& pb : b_parts) {
      const std::vector<Point2> tb = detail::transformed(pb, b.reference, db);
      total += detail::convex_intersection_area(ta, tb);
      if (total > eps_area) return true;
    }
  }
  return false;
}

}  // namespace nesting
