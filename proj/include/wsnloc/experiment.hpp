#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnloc/localizer.hpp"
#include "wsnloc/metrics.hpp"
#include "wsnloc/wsn_model.hpp"

namespace wsnloc {

enum class SweepKind { scalability, radio_range, noise, layer_spacing, single };

/// Accepts "scalability", "radio-range", "noise", "layer-spacing", "single"
/// (underscores also accepted).
std::optional<SweepKind> parse_sweep_kind(std::string_view name);
std::string to_string(SweepKind kind);

/// Values each sweep varies when none are configured.
std::vector<double> default_sweep_values(SweepKind kind, const NetworkConfig& base);

struct ExperimentSpec {
  SweepKind sweep = SweepKind::single;
  NetworkConfig base;
  std::vector<double> sweep_values;
  int repetitions = 8;
  int max_rounds = 100;
  /// Nodes per layer for the radio-range, noise and layer-spacing sweeps.
  int nodes_per_layer = 100;
  bool cog_promotion = true;
  bool normalized_metric = false;
  std::string out_dir = "results";

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Flat `key = value` lines; `#` starts a comment. Unknown keys, duplicates
/// and malformed values are ConfigErrors carrying the line number. Keys left
/// out take their defaults; a missing sweep_values takes the sweep's default
/// list.
ExperimentSpec parse_config(std::string_view text);

/// The network used for one sweep value.
NetworkConfig derive_config(const ExperimentSpec& spec, double value);

/// Independent 64-bit seed for (master, sweep index, repetition, stream).
std::uint64_t derive_seed(std::uint64_t master, std::size_t value_index, int repetition,
                          int stream);

struct SweepRow {
  double value = 0.0;
  NetworkConfig config;
  RunMetrics proposed;
  RunMetrics cog;
  /// Combined wall-clock of both methods over all repetitions.
  double elapsed = 0.0;
  /// Set when the sweep value could not be run; metrics are then meaningless.
  std::optional<std::string> error;
};

struct RunDetail {
  std::size_t value_index = 0;
  int repetition = 0;
  Deployment deployment;
  LocalizationResult proposed;
  LocalizationResult cog;
};

enum class DetailCapture { none, first, all };

struct ExperimentResult {
  std::vector<SweepRow> rows;
  std::vector<RunDetail> details;
};

/// One row per sweep value. Every repetition deploys once and runs both
/// methods on that deployment with identically seeded measurement streams.
/// A value whose derived config is invalid yields an error row; the sweep
/// continues. `on_row` fires as each row completes.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                DetailCapture capture = DetailCapture::none,
                                const std::function<void(const SweepRow&)>& on_row = {});

}  // namespace wsnloc
