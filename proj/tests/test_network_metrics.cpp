#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "blcp/montecarlo.hpp"
#include "blcp/network_metrics.hpp"

using namespace blcp;
using Catch::Approx;

namespace {

McConfig config(std::size_t trials, std::uint64_t seed) {
  McConfig c;
  c.trials = trials;
  c.master_seed = seed;
  return c;
}

RadioParams radio_with(double gamma, double p = 1.0) {
  RadioParams r;
  r.gamma = gamma;
  r.p = p;
  return r;
}

}  // namespace

TEST_CASE("success probability limits") {
  const BlcpModel m;
  CHECK(success_probability(m, radio_with(1e-9), 0.0) == Approx(1.0).margin(1e-6));
  const double a = success_probability(m, radio_with(0.1), 0.0);
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  // Larger thresholds are harder to meet.
  CHECK(success_probability(m, radio_with(1.0), 0.0) < a);
  CHECK_THROWS_AS(success_probability(m, radio_with(-1.0), 0.0), std::invalid_argument);
}

TEST_CASE("single-line alpha = 2 closed form") {
  const BlcpModel one{{1, 50.0}, 0.1};
  const RadioParams r = radio_with(0.1);
  for (auto w : {PalmWeighting::kExact, PalmWeighting::kUniformBand}) {
    for (double d1 : {1.0, 5.0, 20.0}) {
      const double c = pgfl_closed_form_alpha2_nb1(one, r, 0.0, d1, w);
      CHECK(c == Approx(conditional_sir_pgfl(one, r, 0.0, d1, w)).margin(1e-6));
    }
  }
  CHECK(pgfl_closed_form_alpha2_nb1(one, radio_with(1e-12), 0.0, 5.0) == Approx(1.0).margin(1e-9));
  CHECK(pgfl_closed_form_alpha2_nb1(one, r, 0.0, 1e-6) == Approx(1.0).margin(1e-6));

  RadioParams alpha4 = r;
  alpha4.alpha = 4.0;
  CHECK_THROWS_AS(pgfl_closed_form_alpha2_nb1(one, alpha4, 0.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(pgfl_closed_form_alpha2_nb1(BlcpModel{}, r, 0.0, 5.0), std::invalid_argument);
}

TEST_CASE("rate CCDF") {
  const BlcpModel m;
  const RadioParams r;
  CHECK(rate_ccdf(m, r, 0.0, 1e6, 1e6, 1.0) == Approx(success_probability(m, radio_with(1.0), 0.0)).epsilon(1e-12));
  CHECK(rate_ccdf(m, r, 0.0, 1e6, 2e6, 1.0) == Approx(success_probability(m, radio_with(3.0), 0.0)).epsilon(1e-12));
  CHECK(rate_ccdf(m, r, 0.0, 1e6, 1e-6, 1.0) == Approx(1.0).margin(1e-6));
}

TEST_CASE("moments of the conditional success probability") {
  const BlcpModel m;
  const RadioParams half = radio_with(0.1, 0.5);
  CHECK(moment(m, half, 0.0, {0.0}) == std::complex<double>(1.0));
  CHECK(conditional_success_moment(m, half, 0.0, 5.0, {0.0}) == std::complex<double>(1.0));
  CHECK(std::abs(moment(m, half, 0.0, {std::complex<double>(0.0, 1e-9)}) - 1.0) < 1e-6);

  const double ps = success_probability(m, radio_with(0.1), 0.0);
  CHECK(moment(m, radio_with(0.1), 0.0, {1.0}).real() == Approx(ps).margin(1e-4));

  for (std::complex<double> b : {std::complex<double>(1.0, 0.0), {2.0, 0.0}, {0.0, 3.0}, {0.5, -7.0}}) {
    for (double d1 : {0.5, 5.0, 40.0}) CHECK(std::abs(conditional_success_moment(m, half, 0.0, d1, {b})) <= 1.0 + 1e-12);
  }
  // Jensen: M_2 >= M_1^2.
  const double m1 = moment(m, half, 0.0, {1.0}).real();
  const double m2 = moment(m, half, 0.0, {2.0}).real();
  CHECK(m2 >= m1 * m1);
  CHECK(m2 <= m1);
}

TEST_CASE("second moment against nested simulation") {
  const BlcpModel m;
  const RadioParams half = radio_with(0.1, 0.5);
  const double m2 = moment(m, half, 0.0, {2.0}).real();

  // Exact per-realization success probabilities.
  const auto exact = mc_meta_samples(m, half, 0.0, 0, config(40000, 81));
  SampleStats s;
  for (double v : exact) s.add(v * v);
  const auto e = make_estimate(s, 0.99);
  CHECK(std::abs(e.mean - m2) <= 3.0 * e.std_error);

  // Per-realization estimates over 1000 draws; k (k - 1) / (n (n - 1)) is
  // unbiased for P_s^2.
  const double n = 1000.0;
  const auto nested = mc_meta_samples(m, half, 0.0, 1000, config(2000, 82));
  SampleStats t;
  for (double x : nested) t.add((x * n) * (x * n - 1.0) / (n * (n - 1.0)));
  const auto f = make_estimate(t, 0.99);
  CHECK(std::abs(f.mean - m2) <= 3.0 * f.std_error);
}

TEST_CASE("meta distribution endpoints and ordering") {
  const BlcpModel m;
  MetaOptions opt;
  opt.octave_tol = 1e-3;
  const auto c = meta_distribution_curve(m, radio_with(0.1), 0.0, {0.001, 0.3, 0.6, 0.999}, opt);
  CHECK(c.converged);
  CHECK(c.ccdf[0] == Approx(1.0).margin(5e-3));
  CHECK(c.ccdf[3] == Approx(0.0).margin(5e-3));
  for (std::size_t k = 1; k < c.ccdf.size(); ++k) CHECK(c.ccdf[k] <= c.ccdf[k - 1] + 1e-9);
  CHECK_THROWS_AS(meta_distribution_curve(m, radio_with(0.1), 0.0, {1.0}), std::invalid_argument);
}

TEST_CASE("mean local delay") {
  const BlcpModel m;
  const auto d0 = mean_local_delay(m, radio_with(1e-9, 1.0), 0.0);
  CHECK_FALSE(d0.divergent);
  CHECK(d0.value == Approx(1.0).margin(1e-6));

  const auto d = mean_local_delay(m, radio_with(0.1, 0.5), 0.0);
  CHECK_FALSE(d.divergent);
  const double m1 = moment(m, radio_with(0.1, 0.5), 0.0, {1.0}).real();
  CHECK(d.value >= 1.0 / (0.5 * m1));

  // A threshold below the d1-integrand peak reports divergence as a value.
  const auto cut = mean_local_delay(m, radio_with(0.1, 0.5), 0.0, PalmWeighting::kExact,
                                    PalmSpec::nested(), 1e-3);
  CHECK(cut.divergent);
  CHECK(std::isinf(cut.value));
  CHECK_THROWS_AS(mean_local_delay(m, radio_with(0.1, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("successful transmission density") {
  const BlcpModel sparse{{10, 50.0}, 0.01};
  CHECK(successful_transmission_density(sparse, radio_with(0.1, 0.0), 0.0) == 0.0);
  double prev = 0.0;
  for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const RadioParams r = radio_with(0.1, p);
    const double s = successful_transmission_density(sparse, r, 0.0);
    CHECK(s > prev);
    CHECK(s == Approx(p * sparse.lambda * moment(sparse, r, 0.0, {1.0}).real()).epsilon(1e-12));
    prev = s;
  }
  // p = 1 reduces to the always-on success probability.
  CHECK(successful_transmission_density(sparse, radio_with(0.1, 1.0), 0.0) ==
        Approx(sparse.lambda * success_probability(sparse, radio_with(0.1), 0.0)).epsilon(1e-4));
}

TEST_CASE("optimal transmit probability") {
  const BlcpModel m;
  const auto easy = optimal_transmit_probability(m, radio_with(1e-9), 0.0);
  CHECK(easy.p_star == Approx(1.0).margin(1e-3));

  const auto o = optimal_transmit_probability(m, radio_with(0.1), 0.0);
  CHECK(o.grid.size() == 16);
  CHECK(std::abs(o.p_star - o.grid_p) <= 1.0 / 16.0 + 1e-12);
  CHECK(o.delay <= o.grid_delay + 1e-12);
}
