#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wsnloc/geom3d.hpp"

namespace wsnloc {

using Rng = std::mt19937_64;

enum class NoiseModel {
  multiplicative,  ///< measured = true * (1 + g), g ~ N(0, sigma)
  additive,        ///< measured = true + g meters, g ~ N(0, sigma)
};

struct NetworkConfig {
  int total_nodes = 150;
  int anchor_count = 50;
  double radio_range = 5.0;
  int layer_count = 3;
  double layer_spacing = 3.0;
  double layer_jitter = 0.05;
  double area_x = 10.0;
  double area_y = 10.0;
  double noise_sigma = 0.01;
  NoiseModel noise_model = NoiseModel::multiplicative;
  double cube_delta = 0.0;
  /// Coplanarity tolerance in meters; unset means max(1e-6, 3 * sigma * r).
  std::optional<double> xi;
  std::uint64_t seed = 42;

  /// `xi` if set, else 3*sigma*r plus the layer thickness 2*layer_jitter.
  double effective_xi() const;

  /// Throws InvalidParameter naming the first violated field.
  void validate() const;

  /// Non-fatal oddities, e.g. a radio range too short to reach the next layer.
  std::vector<std::string> warnings() const;
};

enum class Role { anchor, sensor };

struct Node {
  int id = 0;
  int layer = 1;  ///< 1 is the beacon layer
  Point3 true_position;
  Role role = Role::sensor;
};

/// Nodes are stored by id: nodes[i].id == i.
struct Deployment {
  NetworkConfig config;
  std::vector<Node> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct Neighbor {
  int id = 0;
  double measured_distance = 0.0;
};

/// Per node id, the localized neighbors it hears. Localized nodes have no
/// entries.
using NeighborTable = std::vector<std::vector<Neighbor>>;

/// Current reference positions indexed by node id; nullopt means unlocalized.
using PositionMap = std::vector<std::optional<Point3>>;

/// Anchors take ids [0, anchor_count) in layer 1. Sensors are split evenly
/// over layers 2..layer_count in id order, any remainder going to the
/// deepest layers. Layer n sits at z in [n*d - jitter, n*d + jitter].
Deployment deploy(const NetworkConfig& config, Rng& rng);

/// Spherical connectivity: |a - b| <= r.
bool hears(Point3 a, Point3 b, double r);

/// Noisy range measurement. Negative draws are resampled; sigma = 0 returns
/// the true distance without consuming randomness.
double measure_distance(double true_distance, double sigma, Rng& rng,
                        NoiseModel model = NoiseModel::multiplicative);

/// For every unlocalized node (ascending id), one fresh measurement to each
/// localized node it hears (ascending id). Connectivity uses true positions.
NeighborTable build_neighbor_table(const Deployment& deployment, const PositionMap& localized,
                                   Rng& rng);

}  // namespace wsnloc
