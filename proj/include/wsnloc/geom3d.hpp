#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>

namespace wsnloc {

/// Position in 3-D space, meters.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }
inline bool is_finite(Point3 p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

/// Axis-aligned closed box, or the explicit empty region.
///
/// The empty state is not encoded as an inverted box: `lower()`/`upper()`
/// throw on it, so no arithmetic can accidentally run on an empty region.
class BoundingBox {
 public:
  /// Empty region.
  BoundingBox() = default;

  static BoundingBox empty() noexcept { return {}; }

  /// Throws InvalidParameter if lower exceeds upper on any axis or a
  /// coordinate is not finite.
  static BoundingBox from_corners(Point3 lower, Point3 upper);

  bool is_empty() const noexcept { return !extent_.has_value(); }
  const Point3& lower() const;
  const Point3& upper() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  std::optional<std::array<Point3, 2>> extent_;
};

/// Plane Q·x + R·y + S·z + D = 0. Coefficients are stored unnormalized.
struct Plane {
  double q = 0.0;
  double r = 0.0;
  double s = 0.0;
  double d = 0.0;

  Point3 normal() const { return {q, r, s}; }
};

inline constexpr double kDefaultCollinearityEps = 1e-6;

/// Cube circumscribing the radio sphere of a node at `center`, shrunk by the
/// radio-irregularity margin `delta`. Requires r > 0 and 0 <= delta < r.
BoundingBox bounding_cube(Point3 center, double r, double delta);

/// Per-axis max of lowers / min of uppers. Empty if either input is empty or
/// the result inverts on any axis.
BoundingBox intersect(const BoundingBox& a, const BoundingBox& b);

/// Left fold of intersect. Throws InvalidParameter on an empty list.
BoundingBox intersect_all(std::span<const BoundingBox> boxes);

/// Closed containment; always false for the empty box.
bool contains(const BoundingBox& box, Point3 p);

/// True iff `inner` lies inside `outer` (the empty box is inside everything).
bool encloses(const BoundingBox& outer, const BoundingBox& inner);

/// Plane through three points via the expanded 3x3 determinants.
/// Throws DegenerateGeometry for collinear or coincident points.
Plane plane_from_points(Point3 p1, Point3 p2, Point3 p3);

/// Q·x + R·y + S·z + D: positive on the side the normal points to.
double signed_side(const Plane& plane, Point3 p);

double point_plane_distance(const Plane& plane, Point3 p);

/// Strict test: distance < xi. With xi = 0 nothing passes.
bool is_coplanar(const Plane& plane, Point3 p, double xi);

/// True when the three points span a plane, i.e. they are NOT collinear:
/// |(p2-p1) x (p3-p1)| / (|p2-p1| |p3-p1|) > eps. Coincident points give false.
bool collinearity_check(Point3 p1, Point3 p2, Point3 p3,
                        double eps = kDefaultCollinearityEps);

}  // namespace wsnloc
