#include "wsnloc/io.hpp"

#include <fmt/format.h>

#include "wsnloc/errors.hpp"
#include "wsnloc/metrics.hpp"

namespace wsnloc {

namespace {

// Scoring convention carried in every JSON results document.
constexpr const char* kUnlocalizedError = "radio_range";

using nlohmann::json;

json point_json(Point3 p) { return json::array({p.x, p.y, p.z}); }

Point3 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("position must be [x, y, z]");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  auto out = open_for_write(path);
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string csv_header() {
  return "nodes,anchors,range,sigma,layer_spacing,success_proposed,success_cog,mean_error,time_sec";
}

std::string csv_row(const SweepRow& row, bool include_timing) {
  const auto& c = row.config;
  std::string line = fmt::format("{},{},{},{},{},", c.total_nodes, c.anchor_count, c.radio_range,
                                 c.noise_sigma, c.layer_spacing);
  if (row.error) return line + "error,error,error,";
  line += fmt::format("{:.4f},{:.4f},{:.6f},", row.proposed.success_percent,
                      row.cog.success_percent, row.proposed.mean_error);
  if (include_timing) line += fmt::format("{:.4f}", row.elapsed);
  return line;
}

json to_json(const NetworkConfig& c) {
  json j{{"total_nodes", c.total_nodes},
         {"anchor_count", c.anchor_count},
         {"radio_range", c.radio_range},
         {"layer_count", c.layer_count},
         {"layer_spacing", c.layer_spacing},
         {"layer_jitter", c.layer_jitter},
         {"area_x", c.area_x},
         {"area_y", c.area_y},
         {"noise_sigma", c.noise_sigma},
         {"noise_model", c.noise_model == NoiseModel::multiplicative ? "multiplicative" : "additive"},
         {"cube_delta", c.cube_delta},
         {"xi", c.effective_xi()},
         {"seed", c.seed}};
  return j;
}

json to_json(const Deployment& deployment) {
  json nodes = json::array();
  for (const auto& n : deployment.nodes) {
    nodes.push_back({{"id", n.id},
                     {"layer", n.layer},
                     {"role", n.role == Role::anchor ? "anchor" : "sensor"},
                     {"position", point_json(n.true_position)}});
  }
  return {{"schema_version", kJsonSchemaVersion},
          {"config", to_json(deployment.config)},
          {"nodes", std::move(nodes)}};
}

json to_json(const LocalizationResult& result, const Deployment& deployment) {
  json nodes = json::array();
  for (const auto& n : deployment.nodes) {
    const auto it = result.estimates.find(n.id);
    if (it == result.estimates.end()) {
      nodes.push_back({{"id", n.id},
                       {"status", "unlocalized"},
                       {"estimate", nullptr},
                       {"round", nullptr},
                       {"method", nullptr},
                       {"error", nullptr}});
      continue;
    }
    const auto& e = it->second;
    nodes.push_back({{"id", n.id},
                     {"status", "localized"},
                     {"estimate", point_json(e.estimated_position)},
                     {"round", e.round},
                     {"method", to_string(e.method)},
                     {"error", node_error(n.true_position, e.estimated_position)}});
  }
  return {{"schema_version", kJsonSchemaVersion},
          {"rounds_executed", result.rounds_executed},
          {"localized", result.estimates.size()},
          {"unlocalized", result.unlocalized.size()},
          {"nodes", std::move(nodes)}};
}

json to_json(const SweepRow& row, bool include_timing) {
  const auto& c = row.config;
  json j{{"nodes", c.total_nodes},
         {"anchors", c.anchor_count},
         {"range", c.radio_range},
         {"sigma", c.noise_sigma},
         {"layer_spacing", c.layer_spacing}};
  if (row.error) {
    j["error"] = *row.error;
    return j;
  }
  json layers = json::array();
  for (const auto& m : row.proposed.per_layer_mean_error) {
    layers.push_back(m ? json(*m) : json(nullptr));
  }
  j["success_proposed"] = row.proposed.success_percent;
  j["success_cog"] = row.cog.success_percent;
  j["mean_error"] = optional_number(row.proposed.mean_error);
  j["mean_error_cog"] = optional_number(row.cog.mean_error);
  j["localized_fraction"] = row.proposed.localized_fraction;
  j["localized_fraction_cog"] = row.cog.localized_fraction;
  j["per_layer_mean_error"] = std::move(layers);
  j["time_sec"] = include_timing ? json(row.elapsed) : json(nullptr);
  return j;
}

Deployment deployment_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kJsonSchemaVersion) {
      throw ConfigError("unsupported deployment schema_version");
    }
    Deployment dep;
    const auto& c = doc.at("config");
    auto& cfg = dep.config;
    cfg.total_nodes = c.at("total_nodes").get<int>();
    cfg.anchor_count = c.at("anchor_count").get<int>();
    cfg.radio_range = c.at("radio_range").get<double>();
    cfg.layer_count = c.at("layer_count").get<int>();
    cfg.layer_spacing = c.at("layer_spacing").get<double>();
    cfg.layer_jitter = c.at("layer_jitter").get<double>();
    cfg.area_x = c.at("area_x").get<double>();
    cfg.area_y = c.at("area_y").get<double>();
    cfg.noise_sigma = c.at("noise_sigma").get<double>();
    const auto model = c.at("noise_model").get<std::string>();
    if (model != "multiplicative" && model != "additive") throw ConfigError("bad noise_model");
    cfg.noise_model = model == "additive" ? NoiseModel::additive : NoiseModel::multiplicative;
    cfg.cube_delta = c.at("cube_delta").get<double>();
    cfg.xi = c.at("xi").get<double>();
    cfg.seed = c.at("seed").get<std::uint64_t>();

    for (const auto& n : doc.at("nodes")) {
      Node node;
      node.id = n.at("id").get<int>();
      node.layer = n.at("layer").get<int>();
      const auto role = n.at("role").get<std::string>();
      if (role != "anchor" && role != "sensor") throw ConfigError("bad node role");
      node.role = role == "anchor" ? Role::anchor : Role::sensor;
      node.true_position = point_from_json(n.at("position"));
      if (node.id != static_cast<int>(dep.nodes.size())) {
        throw ConfigError("node ids must be consecutive from 0");
      }
      dep.nodes.push_back(node);
    }
    if (static_cast<int>(dep.nodes.size()) != cfg.total_nodes) {
      throw ConfigError("node count does not match total_nodes");
    }
    return dep;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("deployment JSON: ") + e.what());
  }
}

CsvWriter::CsvWriter(const std::filesystem::path& path, bool include_timing)
    : path_(path), out_(open_for_write(path)), include_timing_(include_timing) {
  out_ << csv_header() << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_.string() + "'");
}

void CsvWriter::write(const SweepRow& row) {
  out_ << csv_row(row, include_timing_) << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_.string() + "'");
}

std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result, SweepKind sweep,
                                                const EmitOptions& options) {
  std::vector<std::filesystem::path> written;
  const auto file = [&](const std::string& suffix) {
    return options.dir / (options.stem + suffix);
  };

  if (options.write_table) {
    if (options.format == OutputFormat::csv) {
      const auto path = file(".csv");
      CsvWriter writer(path, options.include_timing);
      for (const auto& row : result.rows) writer.write(row);
      written.push_back(path);
    } else {
      json rows = json::array();
      for (const auto& row : result.rows) rows.push_back(to_json(row, options.include_timing));
      const json doc{{"schema_version", kJsonSchemaVersion},
                     {"sweep", to_string(sweep)},
                     {"unlocalized_error", kUnlocalizedError},
                     {"rows", std::move(rows)}};
      const auto path = file(".json");
      write_file(path, doc.dump(2) + "\n");
      written.push_back(path);
    }
  }

  if (options.write_detail) {
    json runs = json::array();
    for (const auto& d : result.details) {
      runs.push_back({{"value", result.rows.at(d.value_index).value},
                      {"repetition", d.repetition},
                      {"deployment", to_json(d.deployment)},
                      {"proposed", to_json(d.proposed, d.deployment)},
                      {"cog", to_json(d.cog, d.deployment)}});
    }
    const json doc{{"schema_version", kJsonSchemaVersion},
                   {"sweep", to_string(sweep)},
                   {"unlocalized_error", kUnlocalizedError},
                   {"runs", std::move(runs)}};
    const auto path = file("_detail.json");
    write_file(path, doc.dump(2) + "\n");
    written.push_back(path);
  }

  auto two_column = [&](const std::string& suffix, const std::string& header, auto&& x_of,
                        auto&& y_of) {
    std::string text = "# " + header + "\n";
    for (const auto& row : result.rows) {
      if (row.error) continue;
      text += fmt::format("{} {:.6f}\n", x_of(row), y_of(row));
    }
    const auto path = file(suffix);
    write_file(path, text);
    written.push_back(path);
  };
  const auto success = [](const SweepRow& r) { return r.proposed.success_percent; };
  if (sweep == SweepKind::scalability) {
    two_column("_anchors_vs_success.dat", "anchors success_proposed",
               [](const SweepRow& r) { return r.config.anchor_count; }, success);
  }
  if (sweep == SweepKind::noise) {
    two_column("_noise_vs_success.dat", "sigma success_proposed",
               [](const SweepRow& r) { return r.config.noise_sigma; }, success);
  }

  if (!result.details.empty()) {
    const auto& d = result.details.front();
    std::string text = "# node_id error\n";
    for (const auto& n : d.deployment.nodes) {
      const auto it = d.proposed.estimates.find(n.id);
      if (it == d.proposed.estimates.end()) continue;
      text += fmt::format("{} {:.6f}\n", n.id,
                          node_error(n.true_position, it->second.estimated_position));
    }
    const auto path = file("_error_vs_node.dat");
    write_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace wsnloc
