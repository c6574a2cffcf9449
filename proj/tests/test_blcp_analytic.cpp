#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "blcp/blcp_analytic.hpp"
#include "blcp/montecarlo.hpp"

using namespace blcp;
using Catch::Approx;

namespace {

// Linear interpolation of an expensive CDF on [0, hi].
struct Tabulated {
  std::vector<double> t;
  std::vector<double> f;
  template <class F>
  Tabulated(F&& cdf, double hi, int n) {
    for (int i = 0; i <= n; ++i) {
      t.push_back(hi * i / n);
      f.push_back(cdf(t.back()));
    }
  }
  double operator()(double x) const {
    if (x >= t.back()) return f.back();
    const double h = t[1] - t[0];
    const auto i = static_cast<std::size_t>(x / h);
    const double w = (x - t[i]) / h;
    return f[i] + w * (f[i + 1] - f[i]);
  }
};

McConfig config(std::size_t trials, std::uint64_t seed) {
  McConfig c;
  c.trials = trials;
  c.master_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("BLCP void probability limits and shape") {
  const BlcpModel m;
  CHECK(void_prob_blcp(m, 20.0, 0.0) == 1.0);
  CHECK(void_prob_blcp({{10, 50.0}, 1e-14}, 0.0, 30.0) == Approx(1.0).margin(1e-10));

  // Nonincreasing in t, lambda and n_B.
  for (double r0 : {0.0, 45.0, 120.0}) {
    double prev = 1.0;
    for (double t = 1.0; t < 200.0; t *= 1.3) {
      const double v = void_prob_blcp(m, r0, t);
      CHECK(v <= prev + 1e-12);
      CHECK(v >= 0.0);
      prev = v;
    }
    for (double t : {3.0, 15.0, 60.0}) {
      CHECK(void_prob_blcp({{10, 50.0}, 0.2}, r0, t) <= void_prob_blcp(m, r0, t) + 1e-15);
      CHECK(void_prob_blcp({{12, 50.0}, 0.1}, r0, t) <= void_prob_blcp(m, r0, t) + 1e-15);
    }
  }

  // Dense points: every line meeting the disk carries a point in it.
  for (double t : {5.0, 20.0, 70.0})
    CHECK(std::abs(void_prob_blcp({{10, 50.0}, 1e3}, 10.0, t) - void_prob_blp({10, 50.0}, 10.0, t)) <= 1e-3);

  // 1-D and 2-D forms agree.
  for (auto [r0, t] : {std::pair{0.0, 5.0}, std::pair{30.0, 25.0}, std::pair{80.0, 45.0}})
    CHECK(void_prob_blcp(m, r0, t) == Approx(void_prob_blcp_band(m, r0, t)).epsilon(1e-7));
}

TEST_CASE("BLCP void probability against simulation") {
  const BlcpModel m;
  const double v = void_prob_blcp(m, 0.0, 5.0);
  const auto e = mc_void_blcp(m, 0.0, 5.0, config(100000, 41));
  CHECK(std::abs(v - e.mean) <= 3.0 * e.std_error);
}

TEST_CASE("nearest BLCP point distribution") {
  const BlcpModel m;
  CHECK(cdf_nearest_blcp_point(m, 0.0, 0.0) == 0.0);
  for (double t : {0.5, 4.0, 33.0})
    CHECK(std::abs(cdf_nearest_blcp_point(m, 50.0, t) + void_prob_blcp(m, 50.0, t) - 1.0) <= 1e-15);

  for (double r0 : {0.0, 50.0, 100.0}) {
    const auto s = mc_nearest_point_distances(m, r0, config(40000, 42 + static_cast<int>(r0)));
    const Tabulated cdf([&](double t) { return cdf_nearest_blcp_point(m, r0, t); }, 400.0, 4000);
    CHECK(ks_statistic(s, cdf) <= 0.01);
  }
}

TEST_CASE("nearest BLCP point density") {
  const BlcpModel m;
  for (double r0 : {0.0, 60.0}) {
    auto pdf = [&](double t) { return t > 0.0 ? pdf_nearest_blcp_point(m, r0, t) : 0.0; };
    const auto total = integrate_semi_infinite(
        pdf, 0.0, QuadSpec{}.with_transform(Transform::kSemiInfinite, 20.0).with_tol(1e-7, 1e-9));
    CHECK(total.value == Approx(1.0).margin(1e-4));
    for (double t : {1.0, 7.0, 25.0, 90.0})
      CHECK(pdf(t) == Approx(nearest_point_density(m, r0, t)).epsilon(1e-5).margin(1e-9));
  }

  // Histogram of simulated distances against the density.
  const auto s = mc_nearest_point_distances(m, 0.0, config(20000, 51));
  std::vector<double> edges;
  for (double e = 0.0; e <= 40.0; e += 2.0) edges.push_back(e);
  const auto chi = chi_square_test(s, edges, [&](double t) { return cdf_nearest_blcp_point(m, 0.0, t); });
  CHECK(chi.p_value > 0.01);
}

TEST_CASE("conditional PGFL trivial cases") {
  const BlcpModel m;
  const PalmContext ctx{5.0, 0.0};
  CHECK(conditional_pgfl(m, 0.0, ctx, RadialFunctional::one()) == 1.0);
  CHECK(pgfl(m, 0.0, RadialFunctional::one()) == 1.0);
  CHECK(conditional_pgfl(m, 0.0, ctx, RadialFunctional::constant(0.5)) == Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(conditional_pgfl(m, 0.0, PalmContext{5.0, 1.0}, RadialFunctional::one()),
                  std::invalid_argument);

  // The split pieces are each in [0, 1].
  const auto sp = palm_split(m, 0.0, ctx, RadialFunctional::sir(0.1, 2.0, 5.0));
  for (double g : {sp.g_serving, sp.g_intersecting, sp.g_nonintersecting, sp.g_i_uniform, sp.g_ni_uniform}) {
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
  }
}

TEST_CASE("PGFL is monotone in the functional") {
  const BlcpModel m;
  double prev = 0.0;
  for (double gamma : {10.0, 1.0, 0.3, 0.1, 0.01}) {
    const double g = conditional_pgfl(m, 0.0, {5.0, 0.0}, RadialFunctional::sir(gamma, 2.0, 5.0));
    CHECK(g >= prev);
    CHECK(g <= 1.0);
    prev = g;
  }
  prev = 0.0;
  for (double c : {0.0, 0.25, 0.5, 0.75, 0.95}) {
    const double g = pgfl(m, 30.0, RadialFunctional::step(8.0, c));
    CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("PGFL of the Laplace functional against simulation") {
  const BlcpModel m;
  for (double s : {0.1, 1.0, 10.0}) {
    const auto f = RadialFunctional::laplace(s, 2.0);
    const double g = pgfl(m, 0.0, f);
    const auto e = mc_pgfl(m, 0.0, f, config(20000, 60));
    CHECK(std::abs(g - e.mean) <= 3.0 * e.std_error + 1e-4);
  }
}

TEST_CASE("PGFL conditioned on the nearest distance against simulation") {
  const BlcpModel m;
  const auto f = RadialFunctional::step(10.0, 0.5);
  const double delta = 0.1;
  // Midpoint average over the window, weighted by the nearest-point density.
  double num = 0.0;
  double den = 0.0;
  const int n = 8;
  for (int k = 0; k < n; ++k) {
    const double d = 5.0 + (k + 0.5) * delta / n;
    const double w = nearest_point_density(m, 0.0, d);
    num += w * conditional_pgfl(m, 0.0, {d, 0.0}, f);
    den += w;
  }
  const auto e = mc_conditional_pgfl(m, 0.0, f, 5.0, delta, config(400000, 61));
  REQUIRE(e.trials > 500);
  CHECK(std::abs(num / den - e.mean) <= 3.0 * e.std_error);
}

TEST_CASE("palm augmentation") {
  const BlcpModel m;
  const Realization base = sample_blcp({{9, 50.0}, 0.1}, 30.0, 3);
  const PlanePoint x{12.0, -7.0};
  const auto out = palm_augment(base, x, m, 4);
  CHECK(out.lines.size() == base.lines.size() + 1);
  CHECK(out.lines.back().distance_to(x) <= 1e-12);
  bool found = false;
  for (double o : out.points_on_line.back()) found = found || distance(out.lines.back().at(o), x) <= 1e-12;
  CHECK(found);

  // The augmented process seen from x matches a typical point seen from itself.
  const auto s = mc_palm_check(m, 0.0, 2.0, config(20000, 70), config(160000, 71));
  REQUIRE(s.empirical.size() > 10000);
  CHECK(ks_two_sample(s.palm, s.empirical) <= 0.015);
}
