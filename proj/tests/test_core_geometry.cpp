#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "blcp/core.hpp"
#include "blcp/geometry.hpp"
#include "blcp/montecarlo.hpp"
#include "blcp/sampling.hpp"

using namespace blcp;
using Catch::Approx;

TEST_CASE("BLP sampler draws exactly n_B lines with uniform parameters") {
  const BlpModel m{10, 100.0};
  for (std::uint64_t seed : {1u, 2u, 99u}) REQUIRE(sample_blp(m, seed).lines.size() == 10);

  std::vector<double> theta;
  std::vector<double> r;
  Rng rng(12345);
  const BlpModel one{1, 100.0};
  for (int i = 0; i < 100000; ++i) {
    const auto l = sample_line(one, rng);
    REQUIRE(l.theta >= 0.0);
    REQUIRE(l.theta < kPi);
    REQUIRE(std::abs(l.r) <= 100.0);
    theta.push_back(l.theta);
    r.push_back(l.r);
  }
  CHECK(ks_statistic(r, [](double x) { return (x + 100.0) / 200.0; }) < 0.01);
  CHECK(ks_statistic(theta, [](double x) { return x / kPi; }) < 0.01);
}

TEST_CASE("samplers are deterministic in the seed") {
  const BlcpModel m;
  CHECK(sample_blcp(m, 80.0, 5) == sample_blcp(m, 80.0, 5));
  CHECK_FALSE(sample_blcp(m, 80.0, 5) == sample_blcp(m, 80.0, 6));
  CHECK(sample_blp(m.blp, 3) == sample_blp(m.blp, 3));
}

TEST_CASE("BLCP point counts on a chord are Poisson") {
  const double lambda = 0.1;
  Realization base;
  base.lines = {{0.3, 0.0}};
  SampleStats s;
  std::vector<double> counts;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    Realization re = base;
    Rng rng(derive_seed(77, i));
    materialize(re, lambda, {}, 50.0, rng);
    const auto& pts = re.points_on_line[0];
    REQUIRE(std::is_sorted(pts.begin(), pts.end()));
    for (double o : pts) REQUIRE(std::abs(o) <= 50.0);
    s.add(static_cast<double>(pts.size()));
    counts.push_back(static_cast<double>(pts.size()));
  }
  const double mean = s.sum / s.n;
  CHECK(std::abs(mean - 10.0) < 3.0 * std::sqrt(10.0 / s.n));

  // chi-square on counts 0..25 against Poisson(10)
  std::vector<double> edges;
  for (int k = 0; k <= 26; ++k) edges.push_back(k - 0.5);
  auto cdf = [](double x) {
    if (x < 0.0) return 0.0;
    double term = std::exp(-10.0);
    double sum = term;
    for (int k = 1; k <= static_cast<int>(std::floor(x)); ++k) {
      term *= 10.0 / k;
      sum += term;
    }
    return sum;
  };
  const auto chi = chi_square_test(counts, edges, cdf);
  CHECK(chi.p_value > 1e-3);

  // A line missing the ball gets no points.
  Realization far;
  far.lines = {{0.0, 60.0}};
  Rng rng(1);
  materialize(far, lambda, {}, 50.0, rng);
  CHECK(far.points_on_line[0].empty());
}

TEST_CASE("extended materialization keeps the inner points and adds only annular ones") {
  const BlcpModel m;
  Realization re = sample_blcp(m, 20.0, 9);
  const auto inner = re.points_on_line;
  Rng rng(10);
  extend_materialization(re, m.lambda, 60.0, rng);
  for (std::size_t i = 0; i < re.lines.size(); ++i) {
    for (double o : inner[i])
      CHECK(std::find(re.points_on_line[i].begin(), re.points_on_line[i].end(), o) !=
            re.points_on_line[i].end());
    for (double o : re.points_on_line[i]) CHECK(distance(re.lines[i].at(o), {}) <= 60.0 + 1e-9);
  }
}

TEST_CASE("line to test point distance") {
  CHECK(line_point_distance({0.0, 2.0}, 5.0) == Approx(3.0));
  CHECK(line_point_distance({kPi / 2.0, 4.0}, 17.0) == Approx(4.0));
  CHECK(line_point_distance({0.0, 3.5}, 3.5) == 0.0);
}

TEST_CASE("chord lengths") {
  CHECK(chord_length({1.1, 0.0}, 0.0, 5.0) == Approx(10.0));
  CHECK(chord_length({0.0, 3.0}, 0.0, 5.0) == Approx(8.0));
  CHECK(chord_length({0.0, 6.0}, 0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(chord_length({0.0, 0.0}, 0.0, -1.0), std::invalid_argument);

  Rng rng(4);
  const BlpModel m{1, 30.0};
  for (int i = 0; i < 1000; ++i) {
    const auto l = sample_line(m, rng);
    const double r0 = uniform(rng, 0.0, 40.0);
    const double t = uniform(rng, 0.0, 40.0);
    CHECK((chord_length(l, r0, t) > 0.0) == (line_point_distance(l, r0) < t));
  }
}

TEST_CASE("pairwise intersections") {
  CHECK(pairwise_intersections(sample_blp({10, 50.0}, 1)).size() == 45);
  CHECK(pairwise_intersections(sample_blp({1, 50.0}, 1)).empty());
  const auto p = pairwise_intersections(std::vector<LineParams>{{0.0, 1.0}, {kPi / 2.0, 2.0}});
  REQUIRE(p.size() == 1);
  CHECK(p[0].x == Approx(1.0));
  CHECK(p[0].y == Approx(2.0).margin(1e-15));
  CHECK(pairwise_intersections(std::vector<LineParams>{{0.5, 1.0}, {0.5, 2.0}}).empty());

  // The crossing lies on both lines.
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const LineParams a = sample_line({2, 10.0}, rng);
    const LineParams b = sample_line({2, 10.0}, rng);
    const auto q = intersect(a, b);
    REQUIRE(q);
    CHECK(a.distance_to(*q) == Approx(0.0).margin(1e-9 * (1.0 + std::hypot(q->x, q->y))));
    CHECK(b.distance_to(*q) == Approx(0.0).margin(1e-9 * (1.0 + std::hypot(q->x, q->y))));
  }
}

TEST_CASE("two points on a line recover its parameters") {
  Rng rng(3);
  const BlpModel m{1, 100.0};
  for (int i = 0; i < 1000; ++i) {
    const auto l = sample_line(m, rng);
    const auto back = line_through(l.at(uniform(rng, -50, 50)), l.at(uniform(rng, 60, 200)));
    CHECK(back.theta == Approx(l.theta).epsilon(1e-12).margin(1e-12));
    CHECK(back.r == Approx(l.r).epsilon(1e-10).margin(1e-10));
  }
  // The other cylinder convention maps back.
  for (int i = 0; i < 100; ++i) {
    const auto l = sample_line(m, rng);
    const auto p = to_polar(l);
    CHECK(p.rho >= 0.0);
    const auto c = to_canonical(p);
    CHECK(c.theta == Approx(l.theta).margin(1e-12));
    CHECK(c.r == Approx(l.r).margin(1e-10));
  }
}

TEST_CASE("k-th nearest materialized point") {
  Realization re;
  re.lines = {{0.0, 4.0}};
  re.points_on_line = {{0.0}};
  CHECK(nearest_point_distance(re, 4.0, 1) == 0.0);
  CHECK_THROWS_AS(nearest_point_distance(re, 4.0, 2), std::out_of_range);

  re.points_on_line = {{-3.0, 1.0, 2.0}};
  CHECK(nearest_point_distance(re, 4.0, 1) == Approx(1.0));
  CHECK(nearest_point_distance(re, 4.0, 2) == Approx(2.0));
  CHECK(nearest_point_distance(re, 4.0, 3) == Approx(3.0));
}
