#include "wsnloc/geom3d.hpp"

#include <algorithm>

#include "wsnloc/errors.hpp"

namespace wsnloc {

BoundingBox BoundingBox::from_corners(Point3 lower, Point3 upper) {
  if (!is_finite(lower) || !is_finite(upper)) {
    throw InvalidParameter("BoundingBox: corners must be finite");
  }
  if (lower.x > upper.x || lower.y > upper.y || lower.z > upper.z) {
    throw InvalidParameter("BoundingBox: lower corner exceeds upper corner");
  }
  BoundingBox box;
  box.extent_ = std::array<Point3, 2>{lower, upper};
  return box;
}

const Point3& BoundingBox::lower() const {
  if (!extent_) throw std::logic_error("BoundingBox::lower on empty box");
  return (*extent_)[0];
}

const Point3& BoundingBox::upper() const {
  if (!extent_) throw std::logic_error("BoundingBox::upper on empty box");
  return (*extent_)[1];
}

BoundingBox bounding_cube(Point3 center, double r, double delta) {
  if (!(r > 0.0)) throw InvalidParameter("bounding_cube: radio range must be > 0");
  if (!(delta >= 0.0) || !(delta < r)) {
    throw InvalidParameter("bounding_cube: delta must satisfy 0 <= delta < r");
  }
  const double half = r - delta;
  return BoundingBox::from_corners({center.x - half, center.y - half, center.z - half},
                                   {center.x + half, center.y + half, center.z + half});
}

BoundingBox intersect(const BoundingBox& a, const BoundingBox& b) {
  if (a.is_empty() || b.is_empty()) return BoundingBox::empty();
  const Point3 lo{std::max(a.lower().x, b.lower().x), std::max(a.lower().y, b.lower().y),
                  std::max(a.lower().z, b.lower().z)};
  const Point3 hi{std::min(a.upper().x, b.upper().x), std::min(a.upper().y, b.upper().y),
                  std::min(a.upper().z, b.upper().z)};
  if (lo.x > hi.x || lo.y > hi.y || lo.z > hi.z) return BoundingBox::empty();
  return BoundingBox::from_corners(lo, hi);
}

BoundingBox intersect_all(std::span<const BoundingBox> boxes) {
  if (boxes.empty()) throw InvalidParameter("intersect_all: empty box list");
  BoundingBox acc = boxes.front();
  for (const auto& b : boxes.subspan(1)) {
    acc = intersect(acc, b);
    if (acc.is_empty()) break;
  }
  return acc;
}

bool contains(const BoundingBox& box, Point3 p) {
  if (box.is_empty()) return false;
  const auto& lo = box.lower();
  const auto& hi = box.upper();
  return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y && lo.z <= p.z &&
         p.z <= hi.z;
}

bool encloses(const BoundingBox& outer, const BoundingBox& inner) {
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  return contains(outer, inner.lower()) && contains(outer, inner.upper());
}

Plane plane_from_points(Point3 p1, Point3 p2, Point3 p3) {
  if (!collinearity_check(p1, p2, p3)) {
    throw DegenerateGeometry("plane_from_points: points are collinear or coincident");
  }
  const auto [x1, y1, z1] = p1;
  const auto [x2, y2, z2] = p2;
  const auto [x3, y3, z3] = p3;
  Plane plane;
  plane.q = y1 * (z2 - z3) + y2 * (z3 - z1) + y3 * (z1 - z2);
  plane.r = z1 * (x2 - x3) + z2 * (x3 - x1) + z3 * (x1 - x2);
  plane.s = x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2);
  plane.d = -(x1 * (y2 * z3 - y3 * z2) + x2 * (y3 * z1 - y1 * z3) + x3 * (y1 * z2 - y2 * z1));
  return plane;
}

double signed_side(const Plane& plane, Point3 p) {
  return plane.q * p.x + plane.r * p.y + plane.s * p.z + plane.d;
}

double point_plane_distance(const Plane& plane, Point3 p) {
  return std::abs(signed_side(plane, p)) / norm(plane.normal());
}

bool is_coplanar(const Plane& plane, Point3 p, double xi) {
  if (!(xi >= 0.0)) throw InvalidParameter("is_coplanar: xi must be >= 0");
  return point_plane_distance(plane, p) < xi;
}

bool collinearity_check(Point3 p1, Point3 p2, Point3 p3, double eps) {
  if (!(eps >= 0.0)) throw InvalidParameter("collinearity_check: eps must be >= 0");
  const Point3 u = p2 - p1;
  const Point3 v = p3 - p1;
  const double lengths = norm(u) * norm(v);
  if (lengths == 0.0) return false;
  return norm(cross(u, v)) / lengths > eps;
}

}  // namespace wsnloc
