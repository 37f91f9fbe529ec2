#include "wsnloc/localizer.hpp"

#include <array>
#include <optional>

#include "wsnloc/errors.hpp"

namespace wsnloc {

namespace {

using Triple = std::array<std::size_t, 3>;

// Largest triangle; ties keep the lexicographically first triple.
Triple widest_triple(std::span<const BeaconObservation> obs) {
  const std::size_t n = obs.size();
  Triple best{0, 1, 2};
  double best_area = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point3 u = obs[j].position - obs[i].position;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double area = norm(cross(u, obs[k].position - obs[i].position));
        if (area > best_area) {
          best_area = area;
          best = {i, j, k};
        }
      }
    }
  }
  return best;
}

struct RoundState {
  PositionMap references;
  LocalizationResult result;
};

RoundState start_round_state(const Deployment& deployment) {
  RoundState state;
  state.references.assign(deployment.size(), std::nullopt);
  for (const auto& node : deployment.nodes) {
    if (node.role == Role::anchor) {
      state.references[static_cast<std::size_t>(node.id)] = node.true_position;
      state.result.estimates[node.id] =
          NodeEstimate{node.id, node.true_position, 0, Method::anchor,
                       BoundingBox::from_corners(node.true_position, node.true_position)};
    }
  }
  return state;
}

void finish(const Deployment& deployment, LocalizationResult& result) {
  for (const auto& node : deployment.nodes) {
    if (!result.is_localized(node.id)) result.unlocalized.insert(node.id);
  }
}

std::vector<BeaconObservation> observations_for(const std::vector<Neighbor>& heard,
                                                const PositionMap& references) {
  std::vector<BeaconObservation> obs;
  obs.reserve(heard.size());
  for (const auto& nb : heard) {
    obs.push_back({*references[static_cast<std::size_t>(nb.id)], nb.measured_distance});
  }
  return obs;
}

BoundingBox cube_intersection(std::span<const BeaconObservation> obs, double r, double delta) {
  std::vector<BoundingBox> cubes;
  cubes.reserve(obs.size());
  for (const auto& o : obs) cubes.push_back(bounding_cube(o.position, r, delta));
  return intersect_all(cubes);
}

// Refines a successful estimate over all ranges; the refined point is kept
// only if it fits better (and, when asked, stays in the bound).
void polish(NodeSolve& solve, std::span<const BeaconObservation> obs, bool keep_in_bound) {
  if (!solve.outcome.ok()) return;
  const Point3 start = *solve.outcome.estimate;
  const Point3 refined = refine_ranges(start, obs);
  if (!is_finite(refined) || (keep_in_bound && !contains(solve.bound, refined))) return;
  const double fit = residual(refined, obs);
  if (fit <= residual(start, obs)) {
    solve.outcome = SolveOutcome::success(solve.outcome.status, refined, fit);
  }
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::anchor:
      return "anchor";
    case Method::trilateration:
      return "trilateration";
    case Method::multilateration:
      return "multilateration";
    case Method::cog:
      return "cog";
  }
  return "unknown";
}

NodeSolve localize_node(std::span<const BeaconObservation> observations,
                        const LocalizeOptions& options) {
  if (observations.size() < 3) {
    throw InvalidParameter("localize_node: at least three observations required");
  }
  NodeSolve solve;
  solve.bound = cube_intersection(observations, options.radio_range, options.cube_delta);
  if (solve.bound.is_empty()) {
    solve.outcome = SolveOutcome::fail(FailureReason::empty_bound);
    return solve;
  }

  if (observations.size() == 3) {
    solve.method = Method::trilateration;
    solve.outcome = trilaterate3(observations, solve.bound, options.tie_break);
    return solve;
  }

  // The widest triangle gives the least tilted reference plane; if it is
  // collinear, every triple is.
  const Triple best = widest_triple(observations);
  const Point3 a = observations[best[0]].position, b = observations[best[1]].position,
               c = observations[best[2]].position;
  if (!collinearity_check(a, b, c)) {
    solve.outcome = SolveOutcome::fail(FailureReason::degenerate_geometry);
    return solve;
  }
  const Plane plane = plane_from_points(a, b, c);
  bool all_coplanar = true;
  for (const auto& o : observations) {
    if (!is_coplanar(plane, o.position, options.xi)) {
      all_coplanar = false;
      break;
    }
  }

  if (all_coplanar) {
    const std::array<BeaconObservation, 3> chosen{observations[best[0]], observations[best[1]],
                                                  observations[best[2]]};
    solve.method = Method::trilateration;
    solve.outcome = trilaterate3(chosen, solve.bound, options.tie_break);
    polish(solve, observations, true);
    return solve;
  }

  solve.method = Method::multilateration;
  solve.outcome = multilaterate(observations);
  polish(solve, observations, false);
  if (solve.outcome.ok() && !contains(solve.bound, *solve.outcome.estimate)) {
    solve.outcome = SolveOutcome::fail(FailureReason::all_roots_outside_bound);
  }
  return solve;
}

LocalizationResult run_wave(const Deployment& deployment, const WaveOptions& options, Rng& rng) {
  if (options.max_rounds < 1) throw InvalidParameter("run_wave: max_rounds must be >= 1");
  const auto& cfg = deployment.config;
  const LocalizeOptions local{cfg.radio_range, cfg.cube_delta, cfg.effective_xi(),
                              options.tie_break};

  RoundState state = start_round_state(deployment);
  auto& result = state.result;
  for (int round = 1; round <= options.max_rounds; ++round) {
    result.rounds_executed = round;
    const NeighborTable table = build_neighbor_table(deployment, state.references, rng);

    std::vector<NodeEstimate> fixed;
    for (std::size_t id = 0; id < table.size(); ++id) {
      if (table[id].size() < 3) continue;
      const auto obs = observations_for(table[id], state.references);
      NodeSolve solve = localize_node(obs, local);
      if (!solve.outcome.ok()) continue;
      fixed.push_back(NodeEstimate{static_cast<int>(id), *solve.outcome.estimate, round,
                                   solve.method, solve.bound});
    }
    if (fixed.empty()) break;
    for (auto& est : fixed) {
      state.references[static_cast<std::size_t>(est.id)] = est.estimated_position;
      result.estimates[est.id] = std::move(est);
    }
  }
  finish(deployment, result);
  return result;
}

Point3 cog_estimate(std::span<const Point3> beacon_positions) {
  if (beacon_positions.empty()) throw InvalidParameter("cog_estimate: empty position list");
  Point3 sum;
  for (const auto& p : beacon_positions) sum = sum + p;
  return (1.0 / static_cast<double>(beacon_positions.size())) * sum;
}

LocalizationResult run_cog(const Deployment& deployment, const CogOptions& options, Rng& rng) {
  if (options.max_rounds < 1) throw InvalidParameter("run_cog: max_rounds must be >= 1");
  const auto& cfg = deployment.config;

  RoundState state = start_round_state(deployment);
  auto& result = state.result;
  for (int round = 1; round <= options.max_rounds; ++round) {
    result.rounds_executed = round;
    const NeighborTable table = build_neighbor_table(deployment, state.references, rng);

    std::vector<NodeEstimate> fixed;
    for (std::size_t id = 0; id < table.size(); ++id) {
      if (table[id].empty() || result.is_localized(static_cast<int>(id))) continue;
      const auto obs = observations_for(table[id], state.references);
      std::vector<Point3> positions;
      positions.reserve(obs.size());
      for (const auto& o : obs) positions.push_back(o.position);
      fixed.push_back(NodeEstimate{static_cast<int>(id), cog_estimate(positions), round,
                                   Method::cog,
                                   cube_intersection(obs, cfg.radio_range, cfg.cube_delta)});
    }
    if (fixed.empty()) break;
    for (auto& est : fixed) {
      if (options.promote) {
        state.references[static_cast<std::size_t>(est.id)] = est.estimated_position;
      }
      result.estimates[est.id] = std::move(est);
    }
  }
  finish(deployment, result);
  return result;
}

}  // namespace wsnloc
