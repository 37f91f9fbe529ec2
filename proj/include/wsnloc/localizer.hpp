#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "wsnloc/geom3d.hpp"
#include "wsnloc/solver.hpp"
#include "wsnloc/wsn_model.hpp"

namespace wsnloc {

enum class Method { anchor, trilateration, multilateration, cog };

struct NodeEstimate {
  int id = 0;
  Point3 estimated_position;
  int round = 0;  ///< 0 for anchors
  Method method = Method::anchor;
  BoundingBox bound_used;
};

/// `estimates` and `unlocalized` partition the deployment's node ids.
struct LocalizationResult {
  std::map<int, NodeEstimate> estimates;
  std::set<int> unlocalized;
  int rounds_executed = 0;

  bool is_localized(int id) const { return estimates.contains(id); }
};

struct LocalizeOptions {
  double radio_range = 5.0;
  double cube_delta = 0.0;
  double xi = 1e-6;
  TieBreak tie_break = TieBreak::lower_z;
};

/// Outcome of localize_node plus the route it took.
struct NodeSolve {
  SolveOutcome outcome;
  Method method = Method::trilateration;
  BoundingBox bound;
};

/// Hybrid estimate for one node from >= 3 heard references: intersect the
/// bounding cubes, then trilaterate (three references, or all references
/// coplanar within xi) or multilaterate and reject estimates outside the
/// intersection. Throws InvalidParameter with fewer than 3 observations.
NodeSolve localize_node(std::span<const BeaconObservation> observations,
                        const LocalizeOptions& options);

struct WaveOptions {
  int max_rounds = 100;
  /// Depth grows with z in generated deployments, so mirror-root ties go to
  /// the deeper candidate.
  TieBreak tie_break = TieBreak::higher_z;
};

/// Iterative localization with synchronous rounds: every node solved in a
/// round becomes a reference from the next round on. Stops after a round
/// that localizes nothing, or after max_rounds.
LocalizationResult run_wave(const Deployment& deployment, const WaveOptions& options, Rng& rng);

/// Component-wise mean. Throws InvalidParameter on an empty list.
Point3 cog_estimate(std::span<const Point3> beacon_positions);

struct CogOptions {
  int max_rounds = 100;
  /// When false only anchors serve as references.
  bool promote = true;
};

/// Centroid baseline on the same round structure as run_wave. A node needs a
/// single heard reference; measured distances are drawn but unused.
LocalizationResult run_cog(const Deployment& deployment, const CogOptions& options, Rng& rng);

const char* to_string(Method method);

}  // namespace wsnloc
