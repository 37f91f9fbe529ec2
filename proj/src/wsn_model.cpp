#include "wsnloc/wsn_model.hpp"

#include <algorithm>
#include <cmath>

#include "wsnloc/errors.hpp"

namespace wsnloc {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw InvalidParameter(message);
}

}  // namespace

double NetworkConfig::effective_xi() const {
  if (xi) return *xi;
  return std::max(1e-6, 3.0 * noise_sigma * radio_range + 2.0 * layer_jitter);
}

void NetworkConfig::validate() const {
  require(total_nodes >= 1, "total_nodes must be >= 1");
  require(anchor_count >= 0, "anchor_count must be >= 0");
  require(anchor_count < total_nodes, "anchor_count must be < total_nodes");
  require(std::isfinite(radio_range) && radio_range > 0.0, "radio_range must be > 0");
  require(layer_count >= 2, "layer_count must be >= 2 (layer 1 holds only anchors)");
  require(std::isfinite(layer_spacing) && layer_spacing > 0.0, "layer_spacing must be > 0");
  require(std::isfinite(layer_jitter) && layer_jitter >= 0.0, "layer_jitter must be >= 0");
  require(layer_jitter < layer_spacing / 2.0, "layer_jitter must be < layer_spacing / 2");
  require(std::isfinite(area_x) && area_x > 0.0, "area_x must be > 0");
  require(std::isfinite(area_y) && area_y > 0.0, "area_y must be > 0");
  require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, "noise_sigma must be >= 0");
  require(std::isfinite(cube_delta) && cube_delta >= 0.0 && cube_delta < radio_range,
          "cube_delta must satisfy 0 <= cube_delta < radio_range");
  require(!xi || (std::isfinite(*xi) && *xi >= 0.0), "xi must be >= 0");
}

std::vector<std::string> NetworkConfig::warnings() const {
  std::vector<std::string> out;
  if (radio_range < layer_spacing) {
    out.emplace_back("radio_range < layer_spacing: no inter-layer connectivity is possible");
  }
  if (cube_delta > 0.0) {
    out.emplace_back("cube_delta > 0: bounding cubes may no longer contain the radio sphere");
  }
  return out;
}

Deployment deploy(const NetworkConfig& config, Rng& rng) {
  config.validate();

  Deployment dep;
  dep.config = config;
  dep.nodes.reserve(static_cast<std::size_t>(config.total_nodes));

  const int sensors = config.total_nodes - config.anchor_count;
  const int sensor_layers = config.layer_count - 1;
  const int per_layer = sensors / sensor_layers;
  const int remainder = sensors % sensor_layers;

  std::uniform_real_distribution<double> ux(0.0, config.area_x);
  std::uniform_real_distribution<double> uy(0.0, config.area_y);
  auto place = [&](int layer) {
    const double centre = layer * config.layer_spacing;
    Point3 p;
    p.x = ux(rng);
    p.y = uy(rng);
    if (config.layer_jitter > 0.0) {
      std::uniform_real_distribution<double> uz(centre - config.layer_jitter,
                                                centre + config.layer_jitter);
      p.z = uz(rng);
    } else {
      p.z = centre;
    }
    return p;
  };

  int id = 0;
  for (int i = 0; i < config.anchor_count; ++i, ++id) {
    dep.nodes.push_back({id, 1, place(1), Role::anchor});
  }
  for (int layer = 2; layer <= config.layer_count; ++layer) {
    // The last `remainder` layers take one extra sensor each.
    const int count = per_layer + (layer > config.layer_count - remainder ? 1 : 0);
    for (int i = 0; i < count; ++i, ++id) {
      dep.nodes.push_back({id, layer, place(layer), Role::sensor});
    }
  }
  return dep;
}

bool hears(Point3 a, Point3 b, double r) { return distance(a, b) <= r; }

double measure_distance(double true_distance, double sigma, Rng& rng, NoiseModel model) {
  if (!(true_distance > 0.0) || !std::isfinite(true_distance)) {
    throw InvalidParameter("measure_distance: true_distance must be > 0");
  }
  if (!(sigma >= 0.0)) throw InvalidParameter("measure_distance: sigma must be >= 0");
  if (sigma == 0.0) return true_distance;

  std::normal_distribution<double> gauss(0.0, sigma);
  for (;;) {
    const double g = gauss(rng);
    const double measured =
        model == NoiseModel::multiplicative ? true_distance * (1.0 + g) : true_distance + g;
    if (measured > 0.0) return measured;
  }
}

NeighborTable build_neighbor_table(const Deployment& deployment, const PositionMap& localized,
                                   Rng& rng) {
  const auto& cfg = deployment.config;
  const std::size_t n = deployment.size();
  NeighborTable table(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (u < localized.size() && localized[u]) continue;
    const Point3 pu = deployment.nodes[u].true_position;
    for (std::size_t v = 0; v < n && v < localized.size(); ++v) {
      if (v == u || !localized[v]) continue;
      const double true_distance = distance(pu, deployment.nodes[v].true_position);
      // Coincident nodes cannot range each other.
      if (true_distance <= 0.0 || true_distance > cfg.radio_range) continue;
      table[u].push_back({static_cast<int>(v),
                          measure_distance(true_distance, cfg.noise_sigma, rng, cfg.noise_model)});
    }
  }
  return table;
}

}  // namespace wsnloc
