#include "rcgp/geometry.hpp"

#include <algorithm>
#include <cstddef>

namespace rcgp {

namespace {

int sign(double v) { return (v > 0) - (v < 0); }

bool within_box(const Point2d& p, const Point2d& a, const Point2d& b) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

double orientation(const Point2d& a, const Point2d& b, const Point2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool point_on_segment(const Point2d& p, const Point2d& a, const Point2d& b) {
  return orientation(a, b, p) == 0.0 && within_box(p, a, b);
}

bool segments_intersect(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d) {
  const int o1 = sign(orientation(a, b, c));
  const int o2 = sign(orientation(a, b, d));
  const int o3 = sign(orientation(c, d, a));
  const int o4 = sign(orientation(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(c, a, b)) return true;
  if (o2 == 0 && within_box(d, a, b)) return true;
  if (o3 == 0 && within_box(a, c, d)) return true;
  if (o4 == 0 && within_box(b, c, d)) return true;
  return false;
}

bool point_in_polygon(const Point2d& p, const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2d& a = poly[i];
    const Point2d& b = poly[j];
    if (point_on_segment(p, a, b)) return true;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool segment_intersects_polygon(const Point2d& p, const Point2d& q, const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    if (segments_intersect(p, q, poly[j], poly[i])) return true;
  return point_in_polygon(p, poly) || point_in_polygon(q, poly) || point_in_polygon(0.5 * (p + q), poly);
}

bool polygon_is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (poly[i] == poly[k]) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const bool adjacent = k == i + 1 || (i == 0 && k == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[k], poly[(k + 1) % n])) return false;
    }
  }
  // every vertex collinear with its neighbours would describe a degenerate sliver
  for (std::size_t i = 0; i < n; ++i)
    if (orientation(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) != 0.0) return true;
  return false;
}

}  // namespace rcgp
