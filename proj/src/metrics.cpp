#include "wsnloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wsnloc/errors.hpp"

namespace wsnloc {

namespace {

// Incremental mean; exact for a run of identical values.
struct RunningMean {
  double value = 0.0;
  int count = 0;

  void add(double x) {
    ++count;
    value += (x - value) / count;
  }
};

}  // namespace

double node_error(Point3 actual, Point3 calculated) { return distance(actual, calculated); }

double success_percentage(std::span<const double> errors, int total_nodes, int nodes_per_layer) {
  if (total_nodes <= nodes_per_layer) {
    throw InvalidParameter("success_percentage: N must exceed nodes per layer");
  }
  double sum = 0.0;
  for (double d : errors) sum += d;
  const double raw = 100.0 - sum / static_cast<double>(total_nodes - nodes_per_layer) * 100.0;
  return std::clamp(raw, 0.0, 100.0);
}

std::vector<LayerError> per_layer_errors(const LocalizationResult& result,
                                         const Deployment& deployment) {
  const int layers = deployment.config.layer_count;
  std::vector<LayerError> out;
  std::vector<RunningMean> means(static_cast<std::size_t>(std::max(layers - 1, 0)));
  for (int layer = 2; layer <= layers; ++layer) out.push_back(LayerError{layer, {}, {}, 0, 0});

  for (const auto& node : deployment.nodes) {
    if (node.layer < 2 || node.layer > layers) continue;
    const auto slot = static_cast<std::size_t>(node.layer - 2);
    auto& layer = out[slot];
    const auto it = result.estimates.find(node.id);
    if (it == result.estimates.end()) {
      ++layer.unlocalized;
      continue;
    }
    const double e = node_error(node.true_position, it->second.estimated_position);
    ++layer.localized;
    means[slot].add(e);
    layer.max = std::max(layer.max.value_or(e), e);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (means[i].count > 0) out[i].mean = means[i].value;
  }
  return out;
}

RunMetrics score_run(const LocalizationResult& result, const Deployment& deployment,
                     const ScoreOptions& options) {
  const auto& cfg = deployment.config;
  const double r = cfg.radio_range;

  std::vector<double> deviations;
  RunningMean mean;
  int sensors = 0;
  int localized = 0;
  for (const auto& node : deployment.nodes) {
    if (node.role == Role::anchor) continue;
    ++sensors;
    const auto it = result.estimates.find(node.id);
    double d = r;
    if (it != result.estimates.end()) {
      d = node_error(node.true_position, it->second.estimated_position);
      mean.add(d);
      ++localized;
    }
    deviations.push_back(options.normalized ? d / r : d);
  }

  RunMetrics m;
  m.success_percent = success_percentage(deviations, cfg.total_nodes, cfg.anchor_count);
  m.mean_error = mean.count > 0 ? mean.value : std::numeric_limits<double>::quiet_NaN();
  m.localized_fraction = sensors > 0 ? static_cast<double>(localized) / sensors : 1.0;
  for (const auto& layer : per_layer_errors(result, deployment)) {
    m.per_layer_mean_error.push_back(layer.mean);
  }
  return m;
}

RunMetrics aggregate_repetitions(std::span<const RunMetrics> runs) {
  if (runs.empty()) throw InvalidParameter("aggregate_repetitions: no runs");
  const std::size_t layers = runs.front().per_layer_mean_error.size();
  RunningMean success, error, fraction;
  std::vector<RunningMean> per_layer(layers);
  double elapsed = 0.0;
  for (const auto& run : runs) {
    if (run.per_layer_mean_error.size() != layers) {
      throw InvalidParameter("aggregate_repetitions: runs have different layer counts");
    }
    success.add(run.success_percent);
    if (std::isfinite(run.mean_error)) error.add(run.mean_error);
    fraction.add(run.localized_fraction);
    for (std::size_t i = 0; i < layers; ++i) {
      if (run.per_layer_mean_error[i]) per_layer[i].add(*run.per_layer_mean_error[i]);
    }
    elapsed += run.elapsed;
  }
  RunMetrics out;
  out.success_percent = success.value;
  out.mean_error = error.count > 0 ? error.value : std::numeric_limits<double>::quiet_NaN();
  out.localized_fraction = fraction.value;
  out.elapsed = elapsed;
  for (const auto& layer : per_layer) {
    out.per_layer_mean_error.push_back(layer.count > 0 ? std::optional<double>(layer.value)
                                                       : std::nullopt);
  }
  return out;
}

}  // namespace wsnloc
