#include "wsnloc/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "wsnloc/errors.hpp"

namespace wsnloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text, int line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("invalid number for " + std::string(key) + ": '" + std::string(text) + "'",
                      line);
  }
  return value;
}

long long parse_integer(std::string_view key, std::string_view text, int line) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid integer for " + std::string(key) + ": '" + std::string(text) + "'",
                      line);
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text, int line) {
  const long long v = parse_integer(key, text, line);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string(key) + " out of range", line);
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text, int line) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(text) + "'",
                    line);
}

std::vector<double> parse_list(std::string_view key, std::string_view text, int line) {
  std::vector<double> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) throw ConfigError("empty entry in " + std::string(key), line);
    values.push_back(parse_double(key, item, line));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
    if (trim(text).empty()) throw ConfigError("trailing comma in " + std::string(key), line);
  }
  return values;
}

const std::map<std::string_view, std::string_view>& key_aliases() {
  static const std::map<std::string_view, std::string_view> aliases{
      {"nodes", "total_nodes"}, {"anchors", "anchor_count"}, {"layers", "layer_count"}};
  return aliases;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::optional<SweepKind> parse_sweep_kind(std::string_view name) {
  std::string n(name);
  for (auto& c : n) {
    if (c == '_') c = '-';
  }
  if (n == "scalability") return SweepKind::scalability;
  if (n == "radio-range") return SweepKind::radio_range;
  if (n == "noise") return SweepKind::noise;
  if (n == "layer-spacing") return SweepKind::layer_spacing;
  if (n == "single") return SweepKind::single;
  return std::nullopt;
}

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::scalability:
      return "scalability";
    case SweepKind::radio_range:
      return "radio-range";
    case SweepKind::noise:
      return "noise";
    case SweepKind::layer_spacing:
      return "layer-spacing";
    case SweepKind::single:
      return "single";
  }
  return "single";
}

std::vector<double> default_sweep_values(SweepKind kind, const NetworkConfig& base) {
  switch (kind) {
    case SweepKind::scalability:
      return {60, 150, 300, 600, 900, 1200};
    case SweepKind::radio_range:
      return {4, 5, 6, 8};
    case SweepKind::noise:
      return {0.005, 0.010, 0.015, 0.020, 0.025};
    case SweepKind::layer_spacing:
      return {2.0, 2.5, 3.0, 3.5, 4.0};
    case SweepKind::single:
      return {static_cast<double>(base.total_nodes)};
  }
  return {};
}

void ExperimentSpec::validate() const {
  try {
    base.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (sweep_values.empty()) throw ConfigError("sweep_values must not be empty");
  if (repetitions < 1 || repetitions > 1000) {
    throw ConfigError("repetitions must be in [1, 1000]");
  }
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (nodes_per_layer < 1) throw ConfigError("nodes_per_layer must be >= 1");
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  auto& cfg = spec.base;
  std::set<std::string, std::less<>> seen;
  bool have_values = false;

  int line_no = 0;
  for (std::size_t start = 0; start < text.size();) {
    ++line_no;
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    if (value.empty()) throw ConfigError("missing value for " + std::string(key), line_no);
    if (const auto alias = key_aliases().find(key); alias != key_aliases().end()) {
      key = alias->second;
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("duplicate key " + std::string(key), line_no);
    }

    if (key == "total_nodes") {
      cfg.total_nodes = parse_int(key, value, line_no);
    } else if (key == "anchor_count") {
      cfg.anchor_count = parse_int(key, value, line_no);
    } else if (key == "radio_range") {
      cfg.radio_range = parse_double(key, value, line_no);
    } else if (key == "layer_count") {
      cfg.layer_count = parse_int(key, value, line_no);
    } else if (key == "layer_spacing") {
      cfg.layer_spacing = parse_double(key, value, line_no);
    } else if (key == "layer_jitter") {
      cfg.layer_jitter = parse_double(key, value, line_no);
    } else if (key == "area_x") {
      cfg.area_x = parse_double(key, value, line_no);
    } else if (key == "area_y") {
      cfg.area_y = parse_double(key, value, line_no);
    } else if (key == "noise_sigma") {
      cfg.noise_sigma = parse_double(key, value, line_no);
    } else if (key == "noise_model") {
      if (value == "multiplicative") {
        cfg.noise_model = NoiseModel::multiplicative;
      } else if (value == "additive") {
        cfg.noise_model = NoiseModel::additive;
      } else {
        throw ConfigError("noise_model must be multiplicative or additive", line_no);
      }
    } else if (key == "cube_delta") {
      cfg.cube_delta = parse_double(key, value, line_no);
    } else if (key == "xi") {
      cfg.xi = parse_double(key, value, line_no);
    } else if (key == "seed") {
      const long long s = parse_integer(key, value, line_no);
      if (s < 0) throw ConfigError("seed must be >= 0", line_no);
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "sweep") {
      const auto kind = parse_sweep_kind(value);
      if (!kind) throw ConfigError("unknown sweep '" + std::string(value) + "'", line_no);
      spec.sweep = *kind;
    } else if (key == "sweep_values") {
      spec.sweep_values = parse_list(key, value, line_no);
      have_values = true;
    } else if (key == "repetitions") {
      spec.repetitions = parse_int(key, value, line_no);
    } else if (key == "max_rounds") {
      spec.max_rounds = parse_int(key, value, line_no);
    } else if (key == "nodes_per_layer") {
      spec.nodes_per_layer = parse_int(key, value, line_no);
    } else if (key == "cog_promotion") {
      spec.cog_promotion = parse_bool(key, value, line_no);
    } else if (key == "normalized_metric") {
      spec.normalized_metric = parse_bool(key, value, line_no);
    } else if (key == "out") {
      spec.out_dir = std::string(value);
    } else {
      throw ConfigError("unknown key " + std::string(key), line_no);
    }
  }

  if (!have_values) spec.sweep_values = default_sweep_values(spec.sweep, cfg);
  spec.validate();
  return spec;
}

NetworkConfig derive_config(const ExperimentSpec& spec, double value) {
  NetworkConfig cfg = spec.base;
  const int layered_total = spec.nodes_per_layer * cfg.layer_count;
  switch (spec.sweep) {
    case SweepKind::scalability:
      cfg.total_nodes = static_cast<int>(std::lround(value));
      cfg.anchor_count = cfg.total_nodes / 3;
      break;
    case SweepKind::radio_range:
      cfg.total_nodes = layered_total;
      cfg.anchor_count = spec.nodes_per_layer;
      cfg.radio_range = value;
      break;
    case SweepKind::noise:
      cfg.total_nodes = layered_total;
      cfg.anchor_count = spec.nodes_per_layer;
      cfg.noise_sigma = value;
      break;
    case SweepKind::layer_spacing:
      cfg.total_nodes = layered_total;
      cfg.anchor_count = spec.nodes_per_layer;
      cfg.layer_spacing = value;
      break;
    case SweepKind::single:
      break;
  }
  return cfg;
}

std::uint64_t derive_seed(std::uint64_t master, std::size_t value_index, int repetition,
                          int stream) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(value_index));
  h = splitmix64(h ^ static_cast<std::uint64_t>(repetition));
  return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, DetailCapture capture,
                                const std::function<void(const SweepRow&)>& on_row) {
  spec.validate();
  using Clock = std::chrono::steady_clock;

  ExperimentResult out;
  for (std::size_t vi = 0; vi < spec.sweep_values.size(); ++vi) {
    SweepRow row;
    row.value = spec.sweep_values[vi];
    row.config = derive_config(spec, row.value);
    try {
      row.config.validate();
    } catch (const InvalidParameter& e) {
      row.error = std::string(e.what());
    }

    if (!row.error) {
      std::vector<RunMetrics> proposed_runs;
      std::vector<RunMetrics> cog_runs;
      const ScoreOptions score{spec.normalized_metric};
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        Rng deploy_rng(derive_seed(row.config.seed, vi, rep, 0));
        const std::uint64_t noise_seed = derive_seed(row.config.seed, vi, rep, 1);
        const Deployment dep = deploy(row.config, deploy_rng);

        const auto start = Clock::now();
        Rng wave_rng(noise_seed);
        auto proposed = run_wave(dep, WaveOptions{spec.max_rounds}, wave_rng);
        Rng cog_rng(noise_seed);
        auto cog = run_cog(dep, CogOptions{spec.max_rounds, spec.cog_promotion}, cog_rng);
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();

        proposed_runs.push_back(score_run(proposed, dep, score));
        proposed_runs.back().elapsed = seconds;
        cog_runs.push_back(score_run(cog, dep, score));
        row.elapsed += seconds;

        const bool keep = capture == DetailCapture::all ||
                          (capture == DetailCapture::first && vi == 0 && rep == 0);
        if (keep) {
          out.details.push_back(RunDetail{vi, rep, dep, std::move(proposed), std::move(cog)});
        }
      }
      row.proposed = aggregate_repetitions(proposed_runs);
      row.cog = aggregate_repetitions(cog_runs);
      row.cog.elapsed = row.elapsed;
    }
    if (on_row) on_row(row);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace wsnloc
