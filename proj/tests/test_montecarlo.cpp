#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "blcp/montecarlo.hpp"

using namespace blcp;
using Catch::Approx;

namespace {

McConfig config(std::size_t trials, std::uint64_t seed, unsigned workers = 1) {
  McConfig c;
  c.trials = trials;
  c.master_seed = seed;
  c.workers = workers;
  c.block_size = 64;
  return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("block scheduling does not depend on the worker count") {
  auto trial = [](std::uint64_t seed) {
    Rng rng(seed);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  const auto a = mc_mean(config(10000, 3, 1), trial);
  for (unsigned w : {2u, 4u, 16u}) {
    const auto b = mc_mean(config(10000, 3, w), trial);
    CHECK(same_bits(a.mean, b.mean));
    CHECK(same_bits(a.std_error, b.std_error));
    CHECK(mc_values(config(777, 5, w), trial) == mc_values(config(777, 5, 1), trial));
  }
  CHECK(a.trials == 10000);
  CHECK(a.mean == Approx(0.5).margin(4.0 * a.std_error));
  CHECK(a.covers(0.5));

  CHECK_THROWS_AS(mc_mean(config(0, 1), trial), std::invalid_argument);
}

TEST_CASE("rejected trials are excluded from the estimate") {
  const auto e = mc_mean(config(1000, 9), [](std::uint64_t seed) {
    return seed % 2 == 0 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  });
  CHECK(e.trials < 1000);
  CHECK(e.trials > 300);
  CHECK(e.mean == 1.0);
}

TEST_CASE("goodness-of-fit statistics") {
  std::vector<double> grid(1000);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = (i + 0.5) / 1000.0;
  CHECK(ks_statistic(grid, [](double x) { return x; }) == Approx(0.0005).margin(1e-12));
  CHECK(ks_statistic(grid, [](double x) { return x * x; }) == Approx(0.25).margin(2e-3));
  CHECK(ks_two_sample(grid, grid) == 0.0);

  Rng rng(1);
  std::vector<double> u(20000);
  for (double& x : u) x = uniform(rng, 0.0, 1.0);
  std::vector<double> edges;
  for (int k = 1; k < 20; ++k) edges.push_back(k / 20.0);
  CHECK(chi_square_test(u, edges, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 1e-3);
  CHECK(chi_square_test(u, edges, [](double x) { return std::clamp(x * x, 0.0, 1.0); }).p_value < 1e-6);
}

TEST_CASE("stratified band area estimate") {
  const auto e = mc_domain_band_area(0.0, 10.0, 100.0, 200000, 2);
  CHECK(std::abs(e.mean - kTwoPi * 10.0) < 4.0 * e.std_error + 1e-9);
  CHECK_THROWS_AS(mc_domain_band_area(0.0, 1.0, 1.0, 4, 1), std::invalid_argument);
}

TEST_CASE("scene success probability is the mean of single draws") {
  const BlcpModel m;
  RadioParams radio;
  radio.p = 0.5;
  Rng rng(17);
  const auto s = link_scene(m, radio, 0.0, 200.0, FarField::kIntegrate, rng);
  REQUIRE(s.d1 > 0.0);
  REQUIRE(s.far_log <= 0.0);
  const double exact = scene_success_probability(s, radio);
  std::size_t hits = 0;
  const std::size_t n = 200000;
  for (std::size_t k = 0; k < n; ++k) hits += scene_success_draw(s, radio, rng);
  const double f = static_cast<double>(hits) / n;
  CHECK(std::abs(f - exact) <= 4.0 * std::sqrt(exact * (1.0 - exact) / n) + 1e-9);
}

TEST_CASE("nested fading estimates agree with exact per-realization values") {
  const BlcpModel m;
  RadioParams radio;
  radio.p = 0.5;
  const auto cfg = config(1500, 23);
  const auto exact = mc_meta_samples(m, radio, 0.0, 0, cfg);
  const auto nested = mc_meta_samples(m, radio, 0.0, 1000, cfg);
  REQUIRE(exact.size() == nested.size());
  // Same realizations, so each nested estimate is binomial around its exact value.
  double worst = 0.0;
  double bias = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double p = exact[i];
    const double sd = std::sqrt(std::max(p * (1.0 - p), 1e-6) / 1000.0);
    worst = std::max(worst, std::abs(nested[i] - p) / sd);
    bias += nested[i] - p;
  }
  CHECK(worst < 5.5);
  CHECK(std::abs(bias / exact.size()) < 3e-3);
}

TEST_CASE("far field handling") {
  const BlcpModel m;
  const RadioParams radio;
  McConfig integrate = config(4000, 31);
  integrate.materialize_radius = 60.0;
  McConfig truncate = integrate;
  truncate.far_field = FarField::kTruncate;
  const auto a = mc_sinr_success(m, radio, 0.0, integrate);
  const auto b = mc_sinr_success(m, radio, 0.0, truncate);
  CHECK(std::abs(a.mean - b.mean) <= 4.0 * std::hypot(a.std_error, b.std_error));
  CHECK(far_interference_bound(m, radio, 0.0, 60.0) > far_interference_bound(m, radio, 0.0, 600.0));

  // Dropping the far field can only help a given scene.
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    auto s = link_scene(m, radio, 0.0, 60.0, FarField::kIntegrate, rng);
    const double with_far = scene_success_probability(s, radio);
    s.far_log = 0.0;
    CHECK(scene_success_probability(s, radio) >= with_far);
  }

  const double ps = success_probability(m, radio, 0.0);
  CHECK(std::abs(a.mean - ps) <= 4.0 * a.std_error);
}

TEST_CASE("simulation outputs are bit-identical across worker counts") {
  const BlcpModel m;
  RadioParams radio;
  radio.p = 0.5;
  const auto base = mc_sinr_success(m, radio, 30.0, config(2000, 41, 1));
  const auto hist = mc_radial_histogram(RadialKind::kIntersections, m.blp, 10.0, 80.0, config(2000, 42, 1));
  const auto delay = mc_local_delay(m, radio, 0.0, 1000, config(500, 43, 1));
  for (unsigned w : {4u, 16u}) {
    CHECK(same_bits(mc_sinr_success(m, radio, 30.0, config(2000, 41, w)).mean, base.mean));
    CHECK(mc_radial_histogram(RadialKind::kIntersections, m.blp, 10.0, 80.0, config(2000, 42, w)) == hist);
    CHECK(same_bits(mc_local_delay(m, radio, 0.0, 1000, config(500, 43, w)).mean, delay.mean));
    CHECK(mc_nearest_point_distances(m, 10.0, config(3000, 44, w)) ==
          mc_nearest_point_distances(m, 10.0, config(3000, 44, 1)));
  }
}

TEST_CASE("local delay censoring is reported") {
  const BlcpModel m;
  RadioParams radio;
  radio.gamma = 10.0;
  radio.p = 0.05;
  const auto e = mc_local_delay(m, radio, 0.0, 2, config(500, 51));
  CHECK(e.censored_fraction > 0.01);
  CHECK_FALSE(e.warnings.empty());
  CHECK(e.mean <= 2.0);
}
