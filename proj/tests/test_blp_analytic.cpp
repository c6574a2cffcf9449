#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <tuple>
#include <vector>

#include "blcp/blp_analytic.hpp"
#include "blcp/geometry.hpp"
#include "blcp/montecarlo.hpp"
#include "blcp/sampling.hpp"

using namespace blcp;
using Catch::Approx;

TEST_CASE("domain band area") {
  CHECK(domain_band_area(0.0, 10.0, 100.0) == Approx(62.8319).epsilon(1e-6));
  CHECK(domain_band_area(0.0, 200.0, 100.0) == Approx(kTwoPi * 100.0));
  CHECK(domain_band_area(0.0, 0.0, 100.0) == 0.0);
  CHECK_THROWS_AS(domain_band_area(-1.0, 1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(domain_band_area(1.0, 1.0, 0.0), std::invalid_argument);

  // Encloses the whole domain once the band covers it.
  CHECK(domain_band_area(20.0, 75.0, 50.0) == Approx(kTwoPi * 50.0));

  for (auto [r0, t, R] : {std::tuple{60.0, 20.0, 50.0}, std::tuple{200.0, 50.0, 50.0},
                          std::tuple{30.0, 40.0, 50.0}}) {
    const double a = domain_band_area(r0, t, R);
    const auto e = mc_domain_band_area(r0, t, R, 4'000'000, 17);
    CHECK(std::abs(e.mean - a) / a < 2e-3);
    CHECK(domain_band_area_piecewise(r0, t, R) == Approx(a).epsilon(1e-12));
  }
  // Beyond the printed case domain the branch throws, the clipping form does not.
  CHECK_THROWS_AS(domain_band_area_branch(2, 0.0, 60.0, 50.0), std::domain_error);
  CHECK_THROWS_AS(domain_band_area_branch(2, 10.0, 70.0, 50.0), std::domain_error);
  CHECK_THROWS_AS(domain_band_area_branch(4, 10.0, 7.0, 50.0), std::invalid_argument);

  // Monotone in t, and bounded by 2 pi t and 2 pi R.
  double prev = 0.0;
  for (double t = 0.5; t < 150.0; t += 0.5) {
    const double a = domain_band_area(70.0, t, 50.0);
    CHECK(a >= prev - 1e-12);
    CHECK(a <= kTwoPi * std::min(t, 50.0) + 1e-9);
    prev = a;
  }
}

TEST_CASE("band weight integrates to the band area") {
  for (auto [r0, t, R] : {std::tuple{0.0, 30.0, 50.0}, std::tuple{30.0, 40.0, 50.0},
                          std::tuple{120.0, 90.0, 50.0}, std::tuple{10.0, 100.0, 50.0}}) {
    auto w = [&](double a) { return band_weight(r0, R, a); };
    std::vector<double> brk;
    for (double k : band_weight_kinks(r0, R))
      if (k > 0.0 && k < t) brk.push_back(k);
    const auto res = integrate_finite(w, 0.0, t, QuadSpec{}.with_tol(1e-12, 1e-12), brk);
    CHECK(res.value == Approx(domain_band_area(r0, t, R)).epsilon(1e-9).margin(1e-9));
  }
  CHECK(band_weight(10.0, 50.0, 61.0) == 0.0);
}

TEST_CASE("BLP void probability and nearest line") {
  CHECK(void_prob_blp({10, 50.0}, 3.0, 0.0) == 1.0);
  CHECK(void_prob_blp({1, 50.0}, 0.0, 50.0) == Approx(0.0).margin(1e-15));
  CHECK(void_prob_blp({10, 100.0}, 0.0, 10.0) == Approx(std::pow(0.9, 10)).epsilon(1e-12));
  CHECK(void_prob_blp({10, 100.0}, 0.0, 10.0) == Approx(0.34868).epsilon(1e-5));

  const BlpModel m{10, 50.0};
  for (double t : {0.0, 1.0, 7.5, 40.0})
    CHECK(std::abs(cdf_nearest_line(m, 20.0, t) + void_prob_blp(m, 20.0, t) - 1.0) <= 1e-15);
  CHECK(cdf_nearest_line(m, 20.0, 0.0) == 0.0);

  McConfig cfg;
  cfg.trials = 100000;
  cfg.master_seed = 5;
  for (double r0 : {0.0, 40.0, 90.0}) {
    const auto s = mc_nearest_line_distances(m, r0, cfg);
    CHECK(ks_statistic(s, [&](double t) { return cdf_nearest_line(m, r0, t); }) < 0.01);
  }
}

TEST_CASE("line length density") {
  const BlpModel m{10, 50.0};
  CHECK(line_length_density(m, 30.0) == Approx(0.1));
  CHECK(line_length_density(m, 100.0) == Approx(1.0 / 30.0).epsilon(1e-12));
  CHECK(line_length_density(m, 1e9) * 1e9 == Approx(10.0 / kPi).epsilon(1e-9));

  CHECK(annulus_line_density(m, {5.0, 3}) == Approx(0.1));
  for (double r : {55.0, 60.0, 75.0, 140.0}) {
    const double w = 1e-4;
    const AnnulusSpec a{w, static_cast<int>(std::llround(r / w))};
    const double d = annulus_line_density(m, a);
    CHECK(d == Approx(line_length_density(m, r + w / 2.0)).epsilon(1e-6));
    // At the inner edge the annulus average is off by about w/2 times the slope.
    const double slope = (line_length_density(m, r + 1e-3) - line_length_density(m, r - 1e-3)) / 2e-3;
    CHECK(std::abs(d - line_length_density(m, r)) <= 1e-6 * d + 0.5 * w * std::abs(slope) * 1.01);
  }

  McConfig cfg;
  cfg.trials = 100000;
  cfg.master_seed = 6;
  const auto h = mc_radial_histogram(RadialKind::kLineLength, m, 10.0, 100.0, cfg);
  const auto& d = h.numbers("density");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double a = annulus_line_density(m, {10.0, static_cast<int>(i)});
    CHECK(std::abs(d[i] - a) / a < 0.01);
  }
}

TEST_CASE("line length inside a disk") {
  const BlpModel m{10, 50.0};
  CHECK(line_length_measure_disk(m, 5.0, 0.0) == 0.0);
  // Origin-centered: closed form and the radial integral of the density.
  for (double t : {20.0, 50.0, 80.0}) {
    CHECK(line_length_measure_disk(m, 0.0, t) == Approx(line_length_measure_origin(m, t)).epsilon(1e-8));
    auto g = [&](double r) { return kTwoPi * r * line_length_density(m, r); };
    const double brk[] = {50.0};
    const auto res = integrate_finite(g, 0.0, t, QuadSpec{}.with_tol(1e-12, 1e-12),
                                      t > 50.0 ? std::span<const double>(brk) : std::span<const double>());
    CHECK(res.value == Approx(line_length_measure_origin(m, t)).epsilon(1e-9));
  }
  // Expected chord of one line in the R-ball.
  const BlpModel one{1, 50.0};
  McConfig cfg;
  cfg.trials = 200000;
  cfg.master_seed = 9;
  const auto e = mc_line_length_in_disk(one, 0.0, 50.0, cfg);
  CHECK(std::abs(e.mean / line_length_measure_disk(one, 0.0, 50.0) - 1.0) < 5e-3);
  // Off-center disk.
  const auto e2 = mc_line_length_in_disk(m, 60.0, 30.0, cfg);
  CHECK(std::abs(e2.z_score(line_length_measure_disk(m, 60.0, 30.0))) < 4.0);
}

TEST_CASE("intersection density and counts") {
  const BlpModel m{10, 50.0};
  CHECK(intersection_density(m, 20.0) == Approx(2.8648e-3).epsilon(1e-4));
  CHECK(intersection_density(m, 20.0) == Approx(90.0 / (4.0 * kPi * 2500.0)));
  CHECK(intersection_measure_disk(m, 50.0) == Approx(22.5));
  CHECK(intersection_measure_disk(m, 1e8) == Approx(45.0).epsilon(1e-6));
  CHECK(annulus_intersection_density(m, {5.0, 2}) == Approx(90.0 / (4.0 * kPi * 2500.0)));

  for (double r : {55.0, 90.0, 300.0}) {
    const double w = 1e-4;
    const AnnulusSpec a{w, static_cast<int>(std::llround(r / w))};
    const double d = annulus_intersection_density(m, a);
    CHECK(d == Approx(intersection_density(m, r + w / 2.0)).epsilon(1e-6));
    const double slope = (intersection_density(m, r + 1e-3) - intersection_density(m, r - 1e-3)) / 2e-3;
    CHECK(std::abs(d - intersection_density(m, r)) <= 1e-6 * d + 0.5 * w * std::abs(slope) * 1.01);
  }
  // Disk measure is the integral of the density.
  for (double t : {70.0, 200.0}) {
    auto g = [&](double r) { return kTwoPi * r * intersection_density(m, r); };
    const double brk[] = {50.0};
    const auto res = integrate_finite(g, 0.0, t, QuadSpec{}.with_tol(1e-12, 1e-13), brk);
    CHECK(res.value == Approx(intersection_measure_disk(m, t)).epsilon(1e-9));
  }

  McConfig cfg;
  cfg.trials = 100000;
  cfg.master_seed = 10;
  const auto e = mc_intersections_in_disk(m, 60.0, cfg);
  CHECK(std::abs(e.mean / intersection_measure_disk(m, 60.0) - 1.0) < 0.01);
  const auto h = mc_radial_histogram(RadialKind::kIntersections, m, 25.0, 150.0, cfg);
  const auto& d = h.numbers("density");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double a = annulus_intersection_density(m, {25.0, static_cast<int>(i)});
    CHECK(std::abs(d[i] - a) / a < 0.02);
  }
}

TEST_CASE("PLP intersection density") {
  CHECK(plp_intersection_density(0.1) == Approx(0.0314159).epsilon(1e-5));
  CHECK(plp_intersection_density(0.0) == 0.0);
  McConfig cfg;
  cfg.trials = 4000;
  cfg.master_seed = 12;
  const auto e = mc_plp_intersection_density(0.5, 20.0, cfg);
  CHECK(std::abs(e.mean / plp_intersection_density(0.5) - 1.0) < 0.02);
}

TEST_CASE("nearest intersection band") {
  const double R = 50.0;
  {
    const auto [lo, hi] = nearest_intersection_band({7.0, 0.0, 3.0}, kPi / 2.0, R);
    CHECK(hi - lo == Approx(0.0).margin(1e-12));
  }
  {
    const auto [lo, hi] = nearest_intersection_band({0.0, 0.0, 5.0}, 0.0, R);
    CHECK(lo == Approx(-5.0));
    CHECK(hi == Approx(5.0));
  }
  // The four-case form equals the |cos| form, and matches brute-force geometry.
  Rng rng(21);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const IntersectionQuery q{uniform(rng, 0.0, 80.0), uniform(rng, 0.0, kPi), uniform(rng, 0.0, 40.0)};
    const double theta = uniform(rng, 0.0, kPi);
    const auto a = nearest_intersection_band(q, theta, R);
    const auto b = nearest_intersection_band_abs(q, theta, R);
    CHECK(a.first == Approx(b.first).margin(1e-12));
    CHECK(a.second == Approx(b.second).margin(1e-12));

    const double r = uniform(rng, -R, R);
    const PlanePoint x = test_point(q.r0);
    const LineParams host = line_through(x, {x.x + std::cos(q.omega0), x.y + std::sin(q.omega0)});
    const auto p = intersect(host, {theta, r});
    const bool hit = p && distance(*p, x) <= q.t;
    const bool inside = r >= b.first && r <= b.second;
    const double margin = std::min(std::abs(r - b.first), std::abs(r - b.second));
    if (hit != inside && margin > 1e-9) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("nearest intersection CDF") {
  const BlpModel m{10, 50.0};
  CHECK(cdf_nearest_intersection(m, 25.0, 0.0) == 0.0);
  CHECK(cdf_nearest_intersection({1, 50.0}, 0.0, 10.0) == 0.0);
  double prev = 0.0;
  for (double t = 2.0; t <= 400.0; t *= 1.5) {
    const double f = cdf_nearest_intersection(m, 25.0, t);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
  CHECK(cdf_nearest_intersection(m, 25.0, 1e4) == Approx(1.0).margin(1e-3));

  // Closer for more lines and for receivers nearer the origin.
  for (double t : {5.0, 20.0, 60.0}) {
    CHECK(cdf_nearest_intersection({10, 50.0}, 0.0, t) > cdf_nearest_intersection({5, 50.0}, 0.0, t));
    CHECK(cdf_nearest_intersection(m, 0.0, t) > cdf_nearest_intersection(m, 50.0, t));
  }

  McConfig cfg;
  cfg.trials = 20000;
  cfg.master_seed = 31;
  const auto s = mc_nearest_intersection_distances(m, 25.0, cfg);
  // Tabulated on a grid; the exact CDF is too slow to call per sample.
  std::vector<double> grid;
  std::vector<double> vals;
  for (int i = 0; i <= 400; ++i) {
    grid.push_back(0.5 * i);
    vals.push_back(cdf_nearest_intersection(m, 25.0, grid.back()));
  }
  auto cdf = [&](double t) {
    if (t >= grid.back()) return cdf_nearest_intersection(m, 25.0, t);
    const auto i = static_cast<std::size_t>(t / 0.5);
    const double w = (t - grid[i]) / 0.5;
    return vals[i] + w * (vals[i + 1] - vals[i]);
  };
  CHECK(ks_statistic(s, cdf) < 0.015);

  // The omega0 average of a fixed-orientation band area.
  const double avg = mean_intersection_band_area(30.0, 20.0, 50.0);
  double riemann = 0.0;
  const int n = 400;
  for (int k = 0; k < n; ++k) riemann += intersection_band_area(30.0, 20.0, (k + 0.5) * kPi / n, 50.0);
  CHECK(avg == Approx(riemann / n).epsilon(1e-4));
}
