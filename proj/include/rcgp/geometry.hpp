#pragma once

#include "rcgp/types.hpp"

namespace rcgp {

/// Sign of the turn a -> b -> c: positive for counterclockwise, zero when collinear.
double orientation(const Point2d& a, const Point2d& b, const Point2d& c);

/// Closed-segment intersection; touching endpoints and collinear overlap count.
bool segments_intersect(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d);

bool point_on_segment(const Point2d& p, const Point2d& a, const Point2d& b);

/// Even-odd containment. Points on the boundary count as inside.
bool point_in_polygon(const Point2d& p, const Polygon& poly);

/// True when segment pq touches the boundary of poly or lies (partly) inside it.
bool segment_intersects_polygon(const Point2d& p, const Point2d& q, const Polygon& poly);

/// Simple-polygon check: no two non-adjacent edges meet and no vertex repeats.
bool polygon_is_simple(const Polygon& poly);

}  // namespace rcgp
