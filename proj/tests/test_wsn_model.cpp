#include <doctest.h>

#include <cmath>
#include <map>

#include "wsnloc/errors.hpp"
#include "wsnloc/wsn_model.hpp"

using namespace wsnloc;

namespace {

std::map<int, int> layer_histogram(const Deployment& dep, Role role) {
  std::map<int, int> h;
  for (const auto& n : dep.nodes) {
    if (n.role == role) ++h[n.layer];
  }
  return h;
}

Deployment two_node(double gap) {
  Deployment dep;
  dep.config.total_nodes = 2;
  dep.config.anchor_count = 1;
  dep.config.radio_range = 5.0;
  dep.config.noise_sigma = 0.0;
  dep.nodes = {{0, 1, {0, 0, 3}, Role::anchor}, {1, 2, {gap, 0, 3}, Role::sensor}};
  return dep;
}

}  // namespace

TEST_CASE("deploy: layer assignment") {
  NetworkConfig cfg;
  cfg.total_nodes = 150;
  cfg.anchor_count = 50;
  cfg.layer_count = 3;
  Rng rng(1);
  const auto dep = deploy(cfg, rng);
  REQUIRE(dep.size() == 150);
  CHECK(layer_histogram(dep, Role::anchor) == std::map<int, int>{{1, 50}});
  CHECK(layer_histogram(dep, Role::sensor) == std::map<int, int>{{2, 50}, {3, 50}});
  for (std::size_t i = 0; i < dep.size(); ++i) CHECK(dep.nodes[i].id == static_cast<int>(i));
}

TEST_CASE("deploy: forced layers without jitter") {
  NetworkConfig cfg;
  cfg.total_nodes = 4;
  cfg.anchor_count = 1;
  cfg.layer_count = 2;
  cfg.layer_jitter = 0.0;
  Rng rng(2);
  const auto dep = deploy(cfg, rng);
  REQUIRE(dep.size() == 4);
  CHECK(dep.nodes[0].role == Role::anchor);
  CHECK(dep.nodes[0].true_position.z == cfg.layer_spacing);
  for (int i = 1; i < 4; ++i) {
    CHECK(dep.nodes[static_cast<std::size_t>(i)].role == Role::sensor);
    CHECK(dep.nodes[static_cast<std::size_t>(i)].true_position.z == 2 * cfg.layer_spacing);
  }
}

TEST_CASE("deploy: remainder goes to the deepest layers") {
  NetworkConfig cfg;
  cfg.total_nodes = 10;
  cfg.anchor_count = 2;
  cfg.layer_count = 4;  // 8 sensors over 3 layers -> 2, 3, 3
  Rng rng(3);
  const auto dep = deploy(cfg, rng);
  CHECK(layer_histogram(dep, Role::sensor) == std::map<int, int>{{2, 2}, {3, 3}, {4, 3}});
}

TEST_CASE("deploy: deterministic per seed") {
  NetworkConfig cfg;
  Rng a(99), b(99), c(100);
  const auto d1 = deploy(cfg, a);
  const auto d2 = deploy(cfg, b);
  const auto d3 = deploy(cfg, c);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    same = same && d1.nodes[i].true_position == d2.nodes[i].true_position;
    differs = differs || !(d1.nodes[i].true_position == d3.nodes[i].true_position);
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("deploy: invalid configs") {
  Rng rng(4);
  NetworkConfig cfg;
  cfg.anchor_count = cfg.total_nodes;
  CHECK_THROWS_AS(deploy(cfg, rng), InvalidParameter);

  cfg = {};
  cfg.layer_jitter = cfg.layer_spacing / 2;
  CHECK_THROWS_AS(deploy(cfg, rng), InvalidParameter);

  cfg = {};
  cfg.noise_sigma = -0.1;
  CHECK_THROWS_AS(deploy(cfg, rng), InvalidParameter);

  cfg = {};
  cfg.radio_range = 2.0;
  CHECK(cfg.warnings().size() == 1);
}

TEST_CASE("property: generated coordinates stay in their extents and bands") {
  NetworkConfig cfg;
  cfg.total_nodes = 100000;
  cfg.anchor_count = 20000;
  cfg.layer_count = 5;
  cfg.layer_jitter = 0.4;
  cfg.area_x = 30;
  cfg.area_y = 20;
  Rng rng(5);
  const auto dep = deploy(cfg, rng);
  int violations = 0;
  for (const auto& n : dep.nodes) {
    const auto p = n.true_position;
    const double centre = n.layer * cfg.layer_spacing;
    if (p.x < 0 || p.x > cfg.area_x || p.y < 0 || p.y > cfg.area_y ||
        p.z < centre - cfg.layer_jitter || p.z > centre + cfg.layer_jitter) {
      ++violations;
    }
    if (n.role == Role::anchor && n.layer != 1) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("hears") {
  CHECK(hears({0, 0, 0}, {3, 4, 0}, 5));
  CHECK_FALSE(hears({0, 0, 0}, {3, 4, 0}, 4.9));
  CHECK(hears({1, 1, 1}, {1, 1, 1}, 0.1));

  Rng rng(6);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const Point3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    const double r = std::abs(u(rng)) + 0.01;
    REQUIRE(hears(a, b, r) == hears(b, a, r));
  }
}

TEST_CASE("measure_distance") {
  Rng rng(7);
  CHECK(measure_distance(7.2, 0.0, rng) == 7.2);
  CHECK_THROWS_AS(measure_distance(-1.0, 0.01, rng), InvalidParameter);
  CHECK_THROWS_AS(measure_distance(0.0, 0.01, rng), InvalidParameter);

  // Multiplicative N(0, 0.01) on a 5 m range: mean 5, SD 0.05.
  constexpr int n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = measure_distance(5.0, 0.01, rng);
    REQUIRE(m > 0.0);
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean - 5.0) <= 0.005);
  CHECK(sd >= 0.05 * 0.8);
  CHECK(sd <= 0.05 * 1.2);

  // Heavy noise still yields positive distances.
  for (int i = 0; i < 1000; ++i) REQUIRE(measure_distance(1.0, 2.0, rng) > 0.0);
  for (int i = 0; i < 1000; ++i) REQUIRE(measure_distance(1.0, 2.0, rng, NoiseModel::additive) > 0.0);
}

TEST_CASE("build_neighbor_table") {
  Rng rng(8);
  PositionMap localized{Point3{0, 0, 3}, std::nullopt};

  const auto near = build_neighbor_table(two_node(3.0), localized, rng);
  REQUIRE(near[1].size() == 1);
  CHECK(near[1][0].id == 0);
  CHECK(near[1][0].measured_distance == 3.0);
  CHECK(near[0].empty());

  const auto far = build_neighbor_table(two_node(6.0), localized, rng);
  CHECK(far[1].empty());

  const PositionMap none{std::nullopt, std::nullopt};
  const auto isolated = build_neighbor_table(two_node(3.0), none, rng);
  CHECK(isolated[0].empty());
  CHECK(isolated[1].empty());
}

TEST_CASE("property: noiseless tables carry true distances; tables are reproducible") {
  NetworkConfig cfg;
  cfg.noise_sigma = 0.0;
  Rng rng(9);
  const auto dep = deploy(cfg, rng);
  PositionMap anchors(dep.size());
  for (const auto& n : dep.nodes) {
    if (n.role == Role::anchor) anchors[static_cast<std::size_t>(n.id)] = n.true_position;
  }
  const auto table = build_neighbor_table(dep, anchors, rng);
  for (std::size_t u = 0; u < table.size(); ++u) {
    for (const auto& nb : table[u]) {
      const double truth =
          distance(dep.nodes[u].true_position, dep.nodes[static_cast<std::size_t>(nb.id)].true_position);
      REQUIRE(nb.measured_distance == truth);
      REQUIRE(truth <= cfg.radio_range);
    }
  }

  auto noisy = dep;
  noisy.config.noise_sigma = 0.02;
  Rng r1(10), r2(10);
  const auto t1 = build_neighbor_table(noisy, anchors, r1);
  const auto t2 = build_neighbor_table(noisy, anchors, r2);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t u = 0; u < t1.size(); ++u) {
    REQUIRE(t1[u].size() == t2[u].size());
    for (std::size_t i = 0; i < t1[u].size(); ++i) {
      REQUIRE(t1[u][i].id == t2[u][i].id);
      REQUIRE(t1[u][i].measured_distance == t2[u][i].measured_distance);
      REQUIRE(t1[u][i].measured_distance > 0.0);
    }
  }
}
