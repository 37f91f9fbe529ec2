#include "wsnloc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wsnloc/errors.hpp"

namespace wsnloc {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

double coord(Point3 p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

Point3 from_coords(const std::array<double, 3>& c) { return {c[0], c[1], c[2]}; }

double determinant(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Adjugate inverse; caller guarantees det != 0.
Mat3 inverse(const Mat3& m, double det) {
  Mat3 inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

double one_norm(const Mat3& m) {
  double best = 0.0;
  for (int c = 0; c < 3; ++c) {
    best = std::max(best, std::abs(m[0][c]) + std::abs(m[1][c]) + std::abs(m[2][c]));
  }
  return best;
}

void validate_observations(std::span<const BeaconObservation> obs) {
  for (const auto& o : obs) {
    if (!is_finite(o.position) || !std::isfinite(o.distance) || o.distance < 0.0) {
      throw InvalidParameter("observation must have a finite position and distance >= 0");
    }
  }
}

}  // namespace

SolveOutcome SolveOutcome::success(SolveStatus status, Point3 estimate, double residual) {
  SolveOutcome out;
  out.status = status;
  out.estimate = estimate;
  out.residual = residual;
  return out;
}

SolveOutcome SolveOutcome::fail(FailureReason reason) {
  SolveOutcome out;
  out.status = SolveStatus::failed;
  out.failure = reason;
  return out;
}

double residual(Point3 p, std::span<const BeaconObservation> observations) {
  if (observations.empty()) throw InvalidParameter("residual: empty observation list");
  double sum = 0.0;
  for (const auto& o : observations) {
    const double e = distance(p, o.position) - o.distance;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(observations.size()));
}

SolveOutcome trilaterate3(std::span<const BeaconObservation> obs, const BoundingBox& bound,
                          TieBreak tie_break) {
  if (obs.size() != 3) throw InvalidParameter("trilaterate3: exactly three observations required");
  validate_observations(obs);
  const Point3 b1 = obs[0].position;
  if (!collinearity_check(b1, obs[1].position, obs[2].position)) {
    return SolveOutcome::fail(FailureReason::degenerate_geometry);
  }
  if (bound.is_empty()) return SolveOutcome::fail(FailureReason::empty_bound);

  // Origin moved to beacon 1: |q|^2 = d1^2 and c_i . q = h_i for i = 2, 3.
  const Point3 c2 = obs[1].position - b1;
  const Point3 c3 = obs[2].position - b1;
  const double d1sq = obs[0].distance * obs[0].distance;
  const double h2 = 0.5 * (dot(c2, c2) + d1sq - obs[1].distance * obs[1].distance);
  const double h3 = 0.5 * (dot(c3, c3) + d1sq - obs[2].distance * obs[2].distance);

  // The 2x2 minors of [c2; c3] are the components of the plane normal, so the
  // free coordinate is the normal's dominant axis.
  const Point3 n = cross(c2, c3);
  int free_axis = 2;
  if (std::abs(n.x) >= std::abs(n.y) && std::abs(n.x) >= std::abs(n.z)) {
    free_axis = 0;
  } else if (std::abs(n.y) >= std::abs(n.z)) {
    free_axis = 1;
  }
  const int u_axis = (free_axis + 1) % 3;
  const int v_axis = (free_axis + 2) % 3;

  const double m00 = coord(c2, u_axis), m01 = coord(c2, v_axis);
  const double m10 = coord(c3, u_axis), m11 = coord(c3, v_axis);
  const double det = m00 * m11 - m01 * m10;
  const double f2 = coord(c2, free_axis), f3 = coord(c3, free_axis);

  // [u v] = base + slope * t
  const double u0 = (h2 * m11 - m01 * h3) / det;
  const double v0 = (m00 * h3 - h2 * m10) / det;
  const double u1 = -(f2 * m11 - m01 * f3) / det;
  const double v1 = -(m00 * f3 - f2 * m10) / det;

  const double a = 1.0 + u1 * u1 + v1 * v1;
  const double half_b = u0 * u1 + v0 * v1;
  const double c = u0 * u0 + v0 * v0 - d1sq;
  double disc = (half_b * half_b - a * c) / (a * a);

  const double mean_distance = (obs[0].distance + obs[1].distance + obs[2].distance) / 3.0;
  const double scale = std::max(mean_distance * mean_distance, 1e-300);
  if (disc < 0.0) {
    if (disc < -kDiscriminantClamp * scale) return SolveOutcome::fail(FailureReason::no_real_root);
    disc = 0.0;
  }
  const double centre = -half_b / a;
  const double spread = std::sqrt(disc);

  auto candidate = [&](double t) {
    std::array<double, 3> q{};
    q[static_cast<std::size_t>(free_axis)] = t;
    q[static_cast<std::size_t>(u_axis)] = u0 + u1 * t;
    q[static_cast<std::size_t>(v_axis)] = v0 + v1 * t;
    return b1 + from_coords(q);
  };

  std::vector<Point3> roots{candidate(centre - spread)};
  if (spread > 0.0) roots.push_back(candidate(centre + spread));

  const auto kept = filter_by_bound(roots, bound);
  if (kept.empty()) return SolveOutcome::fail(FailureReason::all_roots_outside_bound);
  if (kept.size() == 1) return SolveOutcome::success(SolveStatus::unique, kept[0], residual(kept[0], obs));

  const double r0 = residual(kept[0], obs);
  const double r1 = residual(kept[1], obs);
  std::size_t pick = r0 <= r1 ? 0 : 1;
  if (std::abs(r0 - r1) <= kTieTolerance) {
    const bool first_lower = kept[0].z <= kept[1].z;
    pick = (tie_break == TieBreak::lower_z) == first_lower ? 0 : 1;
  }
  return SolveOutcome::success(SolveStatus::ambiguous_resolved, kept[pick], pick == 0 ? r0 : r1);
}

SolveOutcome multilaterate(std::span<const BeaconObservation> obs) {
  if (obs.size() < 4) throw InvalidParameter("multilaterate: at least four observations required");
  validate_observations(obs);

  const BeaconObservation& ref = obs.back();
  const double ref_sq = dot(ref.position, ref.position);
  const double ref_dsq = ref.distance * ref.distance;

  // Normal equations accumulated row by row: M = A^T A, rhs = A^T k.
  Mat3 normal{};
  std::array<double, 3> rhs{};
  for (const auto& o : obs.first(obs.size() - 1)) {
    const Point3 row = 2.0 * (o.position - ref.position);
    const double k = dot(o.position, o.position) - ref_sq - (o.distance * o.distance - ref_dsq);
    const std::array<double, 3> a{row.x, row.y, row.z};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) normal[i][j] += a[i] * a[j];
      rhs[i] += a[i] * k;
    }
  }

  const double det = determinant(normal);
  if (det == 0.0 || !std::isfinite(det)) return SolveOutcome::fail(FailureReason::degenerate_geometry);
  const Mat3 inv = inverse(normal, det);
  const double condition = one_norm(normal) * one_norm(inv);
  if (!(condition <= kMaxConditionNumber)) {
    return SolveOutcome::fail(FailureReason::degenerate_geometry);
  }

  std::array<double, 3> p{};
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = inv[i][0] * rhs[0] + inv[i][1] * rhs[1] + inv[i][2] * rhs[2];
  }
  const Point3 estimate = from_coords(p);
  return SolveOutcome::success(SolveStatus::unique, estimate, residual(estimate, obs));
}

std::vector<Point3> filter_by_bound(std::span<const Point3> candidates, const BoundingBox& bound) {
  std::vector<Point3> kept;
  for (const auto& c : candidates) {
    if (contains(bound, c)) kept.push_back(c);
  }
  return kept;
}

Point3 refine_ranges(Point3 start, std::span<const BeaconObservation> obs, int max_iterations) {
  if (obs.empty()) throw InvalidParameter("refine_ranges: empty observation list");
  validate_observations(obs);
  Point3 p = start;
  for (int it = 0; it < max_iterations; ++it) {
    Mat3 jtj{};
    std::array<double, 3> jtr{};
    for (const auto& o : obs) {
      const Point3 diff = p - o.position;
      const double range = norm(diff);
      if (range == 0.0) return p;
      const std::array<double, 3> j{diff.x / range, diff.y / range, diff.z / range};
      const double r = range - o.distance;
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
        jtr[a] += j[a] * r;
      }
    }
    const double det = determinant(jtj);
    if (det == 0.0 || !std::isfinite(det)) return p;
    const Mat3 inv = inverse(jtj, det);
    if (!(one_norm(jtj) * one_norm(inv) <= kMaxConditionNumber)) return p;
    Point3 step;
    step.x = -(inv[0][0] * jtr[0] + inv[0][1] * jtr[1] + inv[0][2] * jtr[2]);
    step.y = -(inv[1][0] * jtr[0] + inv[1][1] * jtr[1] + inv[1][2] * jtr[2]);
    step.z = -(inv[2][0] * jtr[0] + inv[2][1] * jtr[1] + inv[2][2] * jtr[2]);
    p = p + step;
    if (norm(step) < 1e-12) break;
  }
  return p;
}

}  // namespace wsnloc
