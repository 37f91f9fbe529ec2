// Experiment runner: single scenarios, parameter sweeps and the full table set.
//
//   wsnloc run     [--config FILE] [--seed N] [--reps N] [--out DIR] [--detail]
//   wsnloc sweep   scalability|radio-range|noise|layer-spacing [options]
//   wsnloc tables  [options]
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wsnloc/errors.hpp"
#include "wsnloc/experiment.hpp"
#include "wsnloc/io.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string out_dir;
  bool detail = false;
  bool timing = false;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value configuration file");
  cmd->add_option("--seed", opts.seed, "master seed (overrides the config)");
  cmd->add_option("--reps", opts.reps, "repetitions per sweep value")->check(CLI::Range(1, 1000));
  cmd->add_option("--out", opts.out_dir, "output directory (default: config 'out' or results)");
  cmd->add_flag("--detail", opts.detail, "write per-run JSON detail (deployment + estimates)");
  cmd->add_flag("--timing", opts.timing, "fill the time_sec column with wall-clock seconds");
  cmd->add_option("--format", opts.format, "results table format")
      ->check(CLI::IsMember({"csv", "json"}));
}

wsnloc::ExperimentSpec load_spec(const CommonOptions& opts) {
  std::string text;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw wsnloc::IoError("cannot read config '" + opts.config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  auto spec = wsnloc::parse_config(text);
  if (opts.seed) spec.base.seed = *opts.seed;
  if (opts.reps) spec.repetitions = *opts.reps;
  if (!opts.out_dir.empty()) spec.out_dir = opts.out_dir;
  spec.validate();
  return spec;
}

// Returns true when every row ran.
bool run_one(wsnloc::ExperimentSpec spec, wsnloc::SweepKind kind, const CommonOptions& opts) {
  using namespace wsnloc;
  if (spec.sweep != kind) {
    spec.sweep = kind;
    spec.sweep_values = default_sweep_values(kind, spec.base);
  }
  for (const auto& w : derive_config(spec, spec.sweep_values.front()).warnings()) {
    std::cerr << "warning: " << w << "\n";
  }

  EmitOptions emit;
  emit.dir = spec.out_dir;
  emit.stem = to_string(kind);
  emit.format = opts.format == "json" ? OutputFormat::json : OutputFormat::csv;
  emit.include_timing = opts.timing;
  emit.write_detail = opts.detail;

  std::optional<CsvWriter> csv;
  if (emit.format == OutputFormat::csv) {
    csv.emplace(emit.dir / (emit.stem + ".csv"), emit.include_timing);
    emit.write_table = false;
  }

  std::cerr << fmt::format("{}: {} value(s) x {} repetition(s)\n", emit.stem,
                           spec.sweep_values.size(), spec.repetitions);
  bool all_ok = true;
  const auto result = run_experiment(
      spec, opts.detail ? DetailCapture::all : DetailCapture::first, [&](const SweepRow& row) {
        if (csv) csv->write(row);
        if (row.error) {
          all_ok = false;
          std::cerr << fmt::format("  value {}: error: {}\n", row.value, *row.error);
          return;
        }
        std::cerr << fmt::format(
            "  nodes={} anchors={} r={} sigma={} d={}  proposed={:.2f}%  cog={:.2f}%  "
            "mean_error={:.4f} m  time={:.3f} s\n",
            row.config.total_nodes, row.config.anchor_count, row.config.radio_range,
            row.config.noise_sigma, row.config.layer_spacing, row.proposed.success_percent,
            row.cog.success_percent, row.proposed.mean_error, row.elapsed);
      });

  for (const auto& path : emit_outputs(result, kind, emit)) {
    std::cerr << "  wrote " << path.string() << "\n";
  }
  if (csv) std::cerr << "  wrote " << (emit.dir / (emit.stem + ".csv")).string() << "\n";
  return all_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid range-based/range-free 3-D WSN localization experiments"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, tables_opts;
  auto* run_cmd = app.add_subcommand("run", "single scenario from the base configuration");
  add_common(run_cmd, run_opts);

  std::string sweep_name;
  auto* sweep_cmd = app.add_subcommand("sweep", "one parameter sweep");
  sweep_cmd->add_option("name", sweep_name, "scalability | radio-range | noise | layer-spacing")
      ->required()
      ->check(CLI::IsMember({"scalability", "radio-range", "noise", "layer-spacing"}));
  add_common(sweep_cmd, sweep_opts);

  auto* tables_cmd = app.add_subcommand("tables", "all four sweeps");
  add_common(tables_cmd, tables_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    bool ok = true;
    if (*run_cmd) {
      ok = run_one(load_spec(run_opts), wsnloc::SweepKind::single, run_opts);
    } else if (*sweep_cmd) {
      ok = run_one(load_spec(sweep_opts), *wsnloc::parse_sweep_kind(sweep_name), sweep_opts);
    } else {
      const auto spec = load_spec(tables_opts);
      for (auto kind : {wsnloc::SweepKind::scalability, wsnloc::SweepKind::radio_range,
                        wsnloc::SweepKind::noise, wsnloc::SweepKind::layer_spacing}) {
        ok = run_one(spec, kind, tables_opts) && ok;
      }
    }
    return ok ? 0 : kExitConfig;
  } catch (const wsnloc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const wsnloc::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const wsnloc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
}
