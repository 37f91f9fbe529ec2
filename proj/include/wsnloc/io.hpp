#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsnloc/experiment.hpp"
#include "wsnloc/localizer.hpp"
#include "wsnloc/wsn_model.hpp"

namespace wsnloc {

inline constexpr int kJsonSchemaVersion = 1;

/// nodes,anchors,range,sigma,layer_spacing,success_proposed,success_cog,mean_error,time_sec
std::string csv_header();

/// One CSV line without trailing newline. Error rows put "error" in the metric
/// columns. time_sec is left empty unless `include_timing`.
std::string csv_row(const SweepRow& row, bool include_timing);

nlohmann::json to_json(const NetworkConfig& config);
nlohmann::json to_json(const Deployment& deployment);
nlohmann::json to_json(const LocalizationResult& result, const Deployment& deployment);
nlohmann::json to_json(const SweepRow& row, bool include_timing);

/// Inverse of to_json(Deployment); throws ConfigError on schema violations.
Deployment deployment_from_json(const nlohmann::json& doc);

/// Writes rows to a CSV file as they arrive, flushing after each line so a
/// partially completed sweep leaves its finished rows on disk.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, bool include_timing);

  void write(const SweepRow& row);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool include_timing_;
};

enum class OutputFormat { csv, json };

struct EmitOptions {
  std::filesystem::path dir = "results";
  std::string stem = "single";
  OutputFormat format = OutputFormat::csv;
  bool include_timing = false;
  /// Write the results table itself (off when a CsvWriter already did).
  bool write_table = true;
  bool write_detail = false;
};

/// Results table (CSV or JSON), per-run JSON detail when requested, and
/// two-column plot data: anchors vs success (scalability), sigma vs success
/// (noise), node id vs error for the first captured run. Returns the files
/// written. Throws IoError naming the path.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result, SweepKind sweep,
                                                const EmitOptions& options);

}  // namespace wsnloc
