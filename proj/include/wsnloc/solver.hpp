#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wsnloc/geom3d.hpp"

namespace wsnloc {

/// A reference node's position together with the measured distance to it.
struct BeaconObservation {
  Point3 position;
  double distance = 0.0;
};

enum class SolveStatus { unique, ambiguous_resolved, failed };

enum class FailureReason { no_real_root, all_roots_outside_bound, degenerate_geometry, empty_bound };

/// Result of a position solve. `estimate` and `residual` are set exactly
/// when status != failed; `failure` exactly when it is.
struct SolveOutcome {
  SolveStatus status = SolveStatus::failed;
  std::optional<Point3> estimate;
  std::optional<double> residual;
  std::optional<FailureReason> failure;

  static SolveOutcome success(SolveStatus status, Point3 estimate, double residual);
  static SolveOutcome fail(FailureReason reason);

  bool ok() const noexcept { return status != SolveStatus::failed; }
};

/// Which mirror root wins when both survive the bound and fit equally well.
enum class TieBreak { lower_z, higher_z };

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kDiscriminantClamp = 1e-9;
inline constexpr double kMaxConditionNumber = 1e12;

/// RMS mismatch sqrt(sum (|p - b_i| - d_i)^2 / n). Throws InvalidParameter on
/// an empty list.
double residual(Point3 p, std::span<const BeaconObservation> observations);

/// Three-sphere intersection. Subtracting sphere pairs gives two linear
/// equations; the coordinate left free is the one whose complementary 2x2
/// block is best conditioned, and sphere 1 becomes a quadratic in it. The
/// two roots mirror each other across the beacon plane; those outside
/// `bound` are discarded and a surviving pair is resolved by residual, then
/// by `tie_break`.
///
/// Throws InvalidParameter unless exactly three observations are given.
SolveOutcome trilaterate3(std::span<const BeaconObservation> obs, const BoundingBox& bound,
                          TieBreak tie_break = TieBreak::lower_z);

/// Linearized least squares over n >= 4 observations, with the last one as the
/// reference row: p = (A^T A)^-1 A^T k. Fails with degenerate_geometry when
/// the normal matrix is singular or its condition estimate exceeds 1e12.
///
/// Does not apply any bound. Throws InvalidParameter if n < 4.
SolveOutcome multilaterate(std::span<const BeaconObservation> obs);

/// Keeps, in order, the candidates inside `bound`.
std::vector<Point3> filter_by_bound(std::span<const Point3> candidates, const BoundingBox& bound);

/// Gauss-Newton on the range residuals |p - b_i| - d_i, starting from `start`.
/// Converges to the local minimum on the start's side of a planar beacon set.
/// Returns `start` unchanged when a step cannot be taken (a beacon at the
/// iterate, or a singular Jacobian).
Point3 refine_ranges(Point3 start, std::span<const BeaconObservation> obs, int max_iterations = 20);

}  // namespace wsnloc
