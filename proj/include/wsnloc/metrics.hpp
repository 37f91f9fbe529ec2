#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wsnloc/geom3d.hpp"
#include "wsnloc/localizer.hpp"
#include "wsnloc/wsn_model.hpp"

namespace wsnloc {

struct RunMetrics {
  double success_percent = 0.0;  ///< clamped to [0, 100]
  double mean_error = 0.0;       ///< meters, over localized sensors; NaN if none
  /// Entry i is layer i + 2; nullopt when no sensor of that layer localized.
  std::vector<std::optional<double>> per_layer_mean_error;
  double localized_fraction = 0.0;  ///< localized sensors / sensors
  double elapsed = 0.0;             ///< seconds
};

struct LayerError {
  int layer = 2;
  std::optional<double> mean;
  std::optional<double> max;
  int localized = 0;
  int unlocalized = 0;
};

struct ScoreOptions {
  /// Score d_i / r instead of raw meters.
  bool normalized = false;
};

double node_error(Point3 actual, Point3 calculated);

/// 100 - (sum d_i / (N - n)) * 100, clamped to [0, 100]. Throws
/// InvalidParameter when N <= n.
double success_percentage(std::span<const double> errors, int total_nodes, int nodes_per_layer);

/// Mean and max error for each sensor layer 2..layer_count.
std::vector<LayerError> per_layer_errors(const LocalizationResult& result,
                                         const Deployment& deployment);

/// Full scoring of one run. Anchors are excluded; every unlocalized sensor
/// counts as one radio range of error in the success score. `elapsed` is left
/// at zero for the caller.
RunMetrics score_run(const LocalizationResult& result, const Deployment& deployment,
                     const ScoreOptions& options = {});

/// Field-wise mean with elapsed summed. Per-layer means average the runs where
/// the layer is present. Throws InvalidParameter on empty or mismatched input.
RunMetrics aggregate_repetitions(std::span<const RunMetrics> runs);

}  // namespace wsnloc
