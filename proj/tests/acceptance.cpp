// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "wsnloc/experiment.hpp"
#include "wsnloc/localizer.hpp"
#include "wsnloc/solver.hpp"

using namespace wsnloc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int run_command(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string shell_quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wsnloc_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Point3 uniform_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

Verdict exact_recovery() {
  const auto start = Clock::now();
  NetworkConfig cfg;
  cfg.total_nodes = 150;
  cfg.anchor_count = 50;
  cfg.radio_range = 5.0;
  cfg.noise_sigma = 0.0;
  cfg.cube_delta = 0.0;
  constexpr int kDeployments = 100;
  int inexact = 0, fewer_than_cog = 0;
  double worst = 0.0;
  for (int i = 0; i < kDeployments; ++i) {
    Rng deploy_rng(derive_seed(1, 0, i, 0));
    const auto dep = deploy(cfg, deploy_rng);
    Rng wave_rng(derive_seed(1, 0, i, 1)), cog_rng(derive_seed(1, 0, i, 1));
    const auto wave = run_wave(dep, WaveOptions{}, wave_rng);
    const auto cog = run_cog(dep, CogOptions{}, cog_rng);
    for (const auto& [id, est] : wave.estimates) {
      const double e = distance(est.estimated_position,
                                dep.nodes[static_cast<std::size_t>(id)].true_position);
      worst = std::max(worst, e);
      if (!(e < 1e-6)) ++inexact;
    }
    if (wave.estimates.size() < cog.estimates.size()) ++fewer_than_cog;
  }
  const double t = seconds_since(start);
  return {inexact == 0 && fewer_than_cog == 0 && t < 30.0,
          fmt::format("{} deployments, max error {:.2e} m, {} inexact, {} with fewer localized "
                      "than COG, {:.1f} s",
                      kDeployments, worst, inexact, fewer_than_cog, t)};
}

Verdict bound_soundness() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> range(0.5, 10.0);
  std::uniform_int_distribution<int> count(1, 8);
  constexpr int kInstances = 100000;
  int violations = 0;
  for (int i = 0; i < kInstances; ++i) {
    const Point3 node = uniform_point(rng, -50, 50);
    const double r = range(rng);
    std::vector<BoundingBox> cubes;
    const int n = count(rng);
    while (static_cast<int>(cubes.size()) < n) {
      // Rejection-sample a beacon inside the node's radio sphere.
      const Point3 offset{r * unit(rng), r * unit(rng), r * unit(rng)};
      if (norm(offset) > r) continue;
      cubes.push_back(bounding_cube(node + offset, r, 0.0));
    }
    if (!contains(intersect_all(cubes), node)) ++violations;
  }
  return {violations == 0, fmt::format("{} instances, {} violations", kInstances, violations)};
}

Verdict solver_oracle() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.02);
  constexpr int kInstances = 1000;
  int checked = 0, mismatches = 0;
  double worst = 0.0;
  while (checked < kInstances) {
    const Point3 target = uniform_point(rng, 0, 10);
    std::vector<BeaconObservation> obs;
    for (int i = 0; i < 5; ++i) {
      const Point3 b = uniform_point(rng, -5, 15);
      obs.push_back({b, distance(b, target) * (1.0 + noise(rng))});
    }
    const Plane plane = plane_from_points(obs[0].position, obs[1].position, obs[2].position);
    if (point_plane_distance(plane, obs[3].position) < 0.5 &&
        point_plane_distance(plane, obs[4].position) < 0.5) {
      continue;
    }
    ++checked;
    // Independent path: dense alpha and k, normal equations solved by LDLT.
    Eigen::MatrixXd alpha(4, 3);
    Eigen::VectorXd k(4);
    const auto& ref = obs.back();
    for (int i = 0; i < 4; ++i) {
      const auto& o = obs[static_cast<std::size_t>(i)];
      alpha.row(i) << 2 * (o.position.x - ref.position.x), 2 * (o.position.y - ref.position.y),
          2 * (o.position.z - ref.position.z);
      k(i) = o.position.x * o.position.x + o.position.y * o.position.y +
             o.position.z * o.position.z - ref.position.x * ref.position.x -
             ref.position.y * ref.position.y - ref.position.z * ref.position.z -
             o.distance * o.distance + ref.distance * ref.distance;
    }
    const Eigen::Vector3d p = (alpha.transpose() * alpha).ldlt().solve(alpha.transpose() * k);
    const auto out = multilaterate(obs);
    const double gap = out.ok() ? distance(*out.estimate, {p(0), p(1), p(2)}) : 1e9;
    worst = std::max(worst, gap);
    if (!(gap <= 1e-4)) ++mismatches;
  }
  return {mismatches == 0,
          fmt::format("{} instances, max deviation {:.2e} m, {} mismatches", checked, worst,
                      mismatches)};
}

Verdict mirror_disambiguation() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> height(0.5, 6.0);
  std::uniform_real_distribution<double> spread(-4.0, 4.0);
  constexpr int kInstances = 1000;
  int checked = 0, wrong = 0;
  while (checked < kInstances) {
    const Point3 target = uniform_point(rng, -20, 20);
    const double z = target.z + height(rng);
    const Point3 a{target.x + spread(rng), target.y + spread(rng), z};
    const Point3 b{target.x + spread(rng), target.y + spread(rng), z};
    const Point3 c{target.x + spread(rng), target.y + spread(rng), z};
    if (!collinearity_check(a, b, c, 1e-2)) continue;
    ++checked;
    // The mirror sits at 2z - target.z; a box reaching halfway excludes it.
    const double h = z - target.z;
    const BoundingBox bound =
        BoundingBox::from_corners(target - Point3{5, 5, h / 2}, target + Point3{5, 5, h / 2});
    const std::vector<BeaconObservation> obs{
        {a, distance(a, target)}, {b, distance(b, target)}, {c, distance(c, target)}};
    const auto out = trilaterate3(obs, bound);
    if (out.status != SolveStatus::unique || distance(*out.estimate, target) > 1e-6) ++wrong;
  }
  return {wrong == 0, fmt::format("{} instances, {} wrong-root selections", checked, wrong)};
}

struct ScalabilityRun {
  ExperimentResult result;
  double seconds = 0.0;
};

ScalabilityRun scalability_run() {
  ExperimentSpec spec;
  spec.sweep = SweepKind::scalability;
  spec.sweep_values = {60, 150, 300, 600, 1200};
  const auto start = Clock::now();
  ScalabilityRun run{run_experiment(spec), 0.0};
  run.seconds = seconds_since(start);
  return run;
}

Verdict scalability_trend(const ScalabilityRun& run) {
  const auto& rows = run.result.rows;
  int ahead = 0;
  std::string table;
  for (const auto& row : rows) {
    if (!row.error && row.proposed.success_percent > row.cog.success_percent) ++ahead;
    table += fmt::format(" {}:{:.1f}/{:.1f}", row.config.total_nodes, row.proposed.success_percent,
                         row.cog.success_percent);
  }
  const double at60 = rows[0].proposed.success_percent;
  const bool grows = rows[3].proposed.success_percent > at60 && rows[4].proposed.success_percent > at60;
  return {ahead == 5 && grows && run.seconds < 300.0,
          fmt::format("proposed > COG in {}/5 rows, dense > sparse: {}, {:.1f} s; nodes:proposed/cog{}",
                      ahead, grows ? "yes" : "no", run.seconds, table)};
}

Verdict noise_trend() {
  ExperimentSpec spec;
  spec.sweep = SweepKind::noise;
  spec.sweep_values = {0.005, 0.025};
  const auto raw = run_experiment(spec).rows;
  spec.normalized_metric = true;
  const auto normalized = run_experiment(spec).rows;
  const double low = raw[0].proposed.success_percent, high = raw[1].proposed.success_percent;
  const double norm_high = normalized[1].proposed.success_percent;
  return {low > high && norm_high > 50.0,
          fmt::format("sigma 0.005: {:.2f}%, sigma 0.025: {:.2f}%, normalized at 0.025: {:.2f}%",
                      low, high, norm_high)};
}

Verdict layer_propagation() {
  int holds = 0;
  std::string pairs;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    ExperimentSpec spec;
    spec.base.seed = seed;
    spec.sweep_values = {150};
    const auto row = run_experiment(spec).rows.at(0);
    const auto& layers = row.proposed.per_layer_mean_error;
    const bool ok = layers.size() == 2 && layers[0] && layers[1] && *layers[0] < *layers[1];
    if (ok) ++holds;
    pairs += fmt::format(" {:.4f}<{:.4f}", layers[0].value_or(NAN), layers[1].value_or(NAN));
  }
  return {holds >= 7, fmt::format("layer 2 < layer 3 in {}/8 seeds;{}", holds, pairs)};
}

Verdict determinism() {
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  const int ca = run_command(shell_quote(WSNLOC_CLI_PATH) + " sweep scalability --seed 42 --out " + shell_quote(a));
  const int cb = run_command(shell_quote(WSNLOC_CLI_PATH) + " sweep scalability --seed 42 --out " + shell_quote(b));
  const std::string ta = slurp(a / "scalability.csv"), tb = slurp(b / "scalability.csv");
  const bool same = ca == 0 && cb == 0 && !ta.empty() && ta == tb;
  return {same, fmt::format("exit codes {}/{}, {} bytes, identical: {}", ca, cb, ta.size(),
                            ta == tb ? "yes" : "no")};
}

Verdict runtime(const ScalabilityRun& run) {
  const auto out = scratch_dir("tables");
  auto start = Clock::now();
  const int tables_code = run_command(shell_quote(WSNLOC_CLI_PATH) + " tables --out " + shell_quote(out));
  const double tables_s = seconds_since(start);

  const auto cfg = out / "large.cfg";
  std::ofstream(cfg) << "total_nodes = 1200\nanchor_count = 400\n";
  start = Clock::now();
  const int single_code =
      run_command(shell_quote(WSNLOC_CLI_PATH) + " run --config " + shell_quote(cfg) + " --out " + shell_quote(out));
  const double single_s = seconds_since(start);

  // Superlinear: time per node grows along the scalability rows.
  const auto& rows = run.result.rows;
  const double per_node_small = rows[2].elapsed / rows[2].config.total_nodes;
  const double per_node_large = rows[4].elapsed / rows[4].config.total_nodes;
  const bool superlinear = per_node_large > per_node_small && rows[4].elapsed > rows[3].elapsed * 2;

  return {tables_code == 0 && single_code == 0 && tables_s < 900.0 && single_s < 60.0 && superlinear,
          fmt::format("tables {:.1f} s, 1200-node run {:.1f} s, scalability row times {:.3f}/{:.3f}/"
                      "{:.3f}/{:.3f}/{:.3f} s",
                      tables_s, single_s, rows[0].elapsed, rows[1].elapsed, rows[2].elapsed,
                      rows[3].elapsed, rows[4].elapsed)};
}

Verdict unit_tests() {
  std::stringstream list(WSNLOC_UNIT_TESTS);
  std::string exe;
  int total = 0, failed = 0;
  std::string failures;
  while (std::getline(list, exe, '|')) {
    ++total;
    if (run_command(shell_quote(exe)) != 0) {
      ++failed;
      failures += " " + fs::path(exe).filename().string();
    }
  }
  return {failed == 0 && total > 0, fmt::format("{}/{} unit test binaries pass{}", total - failed,
                                                total, failures.empty() ? "" : ";" + failures)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Verdict& v) {
    std::cout << fmt::format("{} criterion {:>2}: {} ({})", v.pass ? "PASS" : "FAIL", id, name,
                             v.detail)
              << std::endl;
    if (!v.pass) ++failures;
  };

  report(1, "noiseless exact recovery", exact_recovery());
  report(2, "bounding-cube soundness", bound_soundness());
  report(3, "least-squares oracle equivalence", solver_oracle());
  report(4, "mirror-root disambiguation", mirror_disambiguation());
  const auto scal = scalability_run();
  report(5, "scalability trend", scalability_trend(scal));
  report(6, "noise trend", noise_trend());
  report(7, "layer error propagation", layer_propagation());
  report(8, "deterministic CSV", determinism());
  report(9, "desk-scale runtime", runtime(scal));
  report(10, "unit tests", unit_tests());

  std::cout << fmt::format("{} of 10 criteria pass", 10 - failures) << std::endl;
  return failures == 0 ? 0 : 1;
}
