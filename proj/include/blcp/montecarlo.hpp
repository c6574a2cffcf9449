#pragma once

// Empirical counterparts of the analytic evaluators. Trial i always draws from
// Rng(derive_seed(master_seed, i)); trials are grouped in fixed blocks whose
// partial sums are merged in block order, so the result does not depend on
// the number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "blcp/blcp_analytic.hpp"
#include "blcp/blp_analytic.hpp"
#include "blcp/core.hpp"
#include "blcp/curve_table.hpp"
#include "blcp/geometry.hpp"
#include "blcp/network_metrics.hpp"
#include "blcp/quadrature.hpp"
#include "blcp/sampling.hpp"

namespace blcp {

/// kIntegrate replaces the points beyond the materialization ball by their
/// exact conditional factor given the lines; kTruncate drops them and reports
/// a bound on the bias.
enum class FarField { kIntegrate, kTruncate };

struct McConfig {
  std::size_t trials = 10000;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;  // 0: hardware concurrency
  double materialize_radius = 0.0;  // 0: 20x the mean nearest-point distance
  double confidence = 0.99;
  FarField far_field = FarField::kIntegrate;
  std::size_t block_size = 256;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
      throw std::invalid_argument("McConfig: confidence in (0, 1)");
    if (!(materialize_radius >= 0.0)) throw std::invalid_argument("McConfig: materialize_radius >= 0");
    if (block_size < 1) throw std::invalid_argument("McConfig: block_size >= 1");
  }

  unsigned worker_count() const {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
  double censored_fraction = 0.0;
  std::vector<std::string> warnings;

  bool covers(double v) const { return ci_low <= v && v <= ci_high; }
  double z_score(double v) const {
    if (std_error > 0.0) return (mean - v) / std_error;
    return mean == v ? 0.0 : std::numeric_limits<double>::infinity();
  }
};

/// Sufficient statistics of a sample. Non-finite values are skipped (used by
/// rejection estimators to mark discarded trials).
struct SampleStats {
  double n = 0.0;
  double sum = 0.0;
  double sum2 = 0.0;

  void add(double v) {
    if (!std::isfinite(v)) return;
    n += 1.0;
    sum += v;
    sum2 += v * v;
  }
  void merge(const SampleStats& o) {
    n += o.n;
    sum += o.sum;
    sum2 += o.sum2;
  }
};

inline double normal_quantile_two_sided(double confidence) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
}

inline Estimate make_estimate(const SampleStats& s, double confidence) {
  Estimate e;
  e.trials = static_cast<std::size_t>(s.n);
  if (s.n == 0.0) {
    e.mean = e.ci_low = e.ci_high = std::numeric_limits<double>::quiet_NaN();
    e.warnings.push_back("no accepted trials");
    return e;
  }
  e.mean = s.sum / s.n;
  if (s.n > 1.0) {
    const double var = std::max(0.0, (s.sum2 - s.n * e.mean * e.mean) / (s.n - 1.0));
    e.std_error = std::sqrt(var / s.n);
  }
  const double z = normal_quantile_two_sided(confidence);
  e.ci_low = e.mean - z * e.std_error;
  e.ci_high = e.mean + z * e.std_error;
  return e;
}

/// Runs fn(begin, end) over fixed trial blocks on the worker pool and returns
/// the block results in block order.
template <class T, class Block>
std::vector<T> run_blocks(std::size_t trials, unsigned workers, std::size_t block_size, Block&& fn) {
  const std::size_t blocks = (trials + block_size - 1) / block_size;
  std::vector<T> out(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks || failed.load()) return;
      const std::size_t lo = b * block_size;
      const std::size_t hi = std::min(trials, lo + block_size);
      try {
        out[b] = fn(lo, hi);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Mean of trial(seed) over cfg.trials trials.
template <class Trial>
Estimate mc_mean(const McConfig& cfg, Trial&& trial) {
  cfg.validate();
  auto parts = run_blocks<SampleStats>(cfg.trials, cfg.worker_count(), cfg.block_size,
                                       [&](std::size_t lo, std::size_t hi) {
                                         SampleStats s;
                                         for (std::size_t i = lo; i < hi; ++i)
                                           s.add(trial(derive_seed(cfg.master_seed, i)));
                                         return s;
                                       });
  SampleStats total;
  for (const auto& p : parts) total.merge(p);
  return make_estimate(total, cfg.confidence);
}

/// Per-trial values in trial order; non-finite values are dropped.
template <class Trial>
std::vector<double> mc_values(const McConfig& cfg, Trial&& trial) {
  cfg.validate();
  auto parts = run_blocks<std::vector<double>>(cfg.trials, cfg.worker_count(), cfg.block_size,
                                               [&](std::size_t lo, std::size_t hi) {
                                                 std::vector<double> v;
                                                 v.reserve(hi - lo);
                                                 for (std::size_t i = lo; i < hi; ++i) {
                                                   const double x =
                                                       trial(derive_seed(cfg.master_seed, i));
                                                   if (std::isfinite(x)) v.push_back(x);
                                                 }
                                                 return v;
                                               });
  std::vector<double> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// ---------------------------------------------------------------------------
// Sample statistics

/// sup |F_n - F| for a sample against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson test of a sample against a density on [edges.front(), edges.back()],
/// merging bins until each expects at least 5 counts.
template <class Cdf>
ChiSquareResult chi_square_test(const std::vector<double>& sample, const std::vector<double>& edges,
                                Cdf&& cdf) {
  if (edges.size() < 3) throw std::invalid_argument("chi_square_test: need >= 2 bins");
  const double n = static_cast<double>(sample.size());
  std::vector<double> observed(edges.size() + 1, 0.0);
  for (double x : sample) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    observed[static_cast<std::size_t>(it - edges.begin())] += 1.0;
  }
  std::vector<double> expected(edges.size() + 1, 0.0);
  expected[0] = n * cdf(edges.front());
  for (std::size_t i = 1; i < edges.size(); ++i) expected[i] = n * (cdf(edges[i]) - cdf(edges[i - 1]));
  expected.back() = n * (1.0 - cdf(edges.back()));
  ChiSquareResult r;
  double o = 0.0;
  double e = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= 5.0 || i + 1 == expected.size()) {
      if (e > 0.0) {
        r.statistic += (o - e) * (o - e) / e;
        ++bins;
      }
      o = e = 0.0;
    }
  }
  r.dof = std::max(1, bins - 1);
  r.p_value = boost::math::cdf(boost::math::complement(
      boost::math::chi_squared_distribution<double>(r.dof), r.statistic));
  return r;
}

// ---------------------------------------------------------------------------
// Domain band and line process

/// Stratified estimate of the measure of {(theta, r): |r0 cos(theta) - r| <= t,
/// |r| <= R}: a sqrt(samples / 2)^2 grid of cells with two uniform points each.
inline Estimate mc_domain_band_area(double r0, double t, double R, std::size_t samples,
                                    std::uint64_t seed, double confidence = 0.99) {
  if (samples < 8) throw std::invalid_argument("mc_domain_band_area: samples >= 8");
  const std::size_t m = static_cast<std::size_t>(std::sqrt(static_cast<double>(samples) / 2.0));
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double dth = kPi / m;
  const double dr = 2.0 * R / m;
  double sum = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double y[2];
      for (double& v : y) {
        const double th = (i + u(rng)) * dth;
        const double r = -R + (j + u(rng)) * dr;
        v = std::abs(r0 * std::cos(th) - r) <= t ? 1.0 : 0.0;
      }
      sum += 0.5 * (y[0] + y[1]);
      var += 0.25 * (y[0] - y[1]) * (y[0] - y[1]);
    }
  }
  const double cells = static_cast<double>(m * m);
  const double measure = kTwoPi * R;
  Estimate e;
  e.trials = 2 * m * m;
  e.mean = measure * sum / cells;
  e.std_error = measure * std::sqrt(var) / cells;
  const double z = normal_quantile_two_sided(confidence);
  e.ci_low = e.mean - z * e.std_error;
  e.ci_high = e.mean + z * e.std_error;
  return e;
}

inline Estimate mc_void_blp(const BlpModel& model, double r0, double t, const McConfig& cfg) {
  model.validate();
  return mc_mean(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    const auto lines = sample_lines(model, rng);
    return nearest_line_distance(lines, r0) > t ? 1.0 : 0.0;
  });
}

inline std::vector<double> mc_nearest_line_distances(const BlpModel& model, double r0,
                                                     const McConfig& cfg) {
  model.validate();
  return mc_values(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    return nearest_line_distance(sample_lines(model, rng), r0);
  });
}

/// Total chord length inside B((r0, 0), t).
inline Estimate mc_line_length_in_disk(const BlpModel& model, double r0, double t,
                                       const McConfig& cfg) {
  model.validate();
  return mc_mean(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    double total = 0.0;
    for (const auto& l : sample_lines(model, rng)) total += chord_length(l, r0, t);
    return total;
  });
}

/// Number of pairwise intersections inside B(0, t).
inline Estimate mc_intersections_in_disk(const BlpModel& model, double t, const McConfig& cfg) {
  model.validate();
  return mc_mean(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    double count = 0.0;
    for (const auto& p : pairwise_intersections(sample_lines(model, rng)))
      if (std::hypot(p.x, p.y) < t) count += 1.0;
    return count;
  });
}

enum class RadialKind { kLineLength, kIntersections };

inline const char* radial_kind_name(RadialKind k) {
  return k == RadialKind::kLineLength ? "line_length" : "intersection";
}

/// Per-annulus (centered at the origin) totals divided by annulus area.
/// Columns: r_inner, r_outer, r, density, std_error, ci_low, ci_high.
inline CurveTable mc_radial_histogram(RadialKind kind, const BlpModel& model, double w,
                                      double r_max, const McConfig& cfg) {
  model.validate();
  cfg.validate();
  if (!(w > 0.0) || !(r_max > w)) throw std::invalid_argument("mc_radial_histogram: need 0 < w < r_max");
  const std::size_t bins = static_cast<std::size_t>(std::ceil(r_max / w));
  using Acc = std::vector<SampleStats>;
  auto parts = run_blocks<Acc>(cfg.trials, cfg.worker_count(), cfg.block_size,
                               [&](std::size_t lo, std::size_t hi) {
                                 Acc acc(bins);
                                 std::vector<double> v(bins);
                                 for (std::size_t i = lo; i < hi; ++i) {
                                   Rng rng(derive_seed(cfg.master_seed, i));
                                   const auto lines = sample_lines(model, rng);
                                   std::fill(v.begin(), v.end(), 0.0);
                                   if (kind == RadialKind::kLineLength) {
                                     for (const auto& l : lines)
                                       for (std::size_t b = 0; b < bins; ++b)
                                         v[b] += annulus_chord_length(l, w * b, w * (b + 1));
                                   } else {
                                     for (const auto& p : pairwise_intersections(lines)) {
                                       const double r = std::hypot(p.x, p.y);
                                       const auto b = static_cast<std::size_t>(r / w);
                                       if (b < bins) v[b] += 1.0;
                                     }
                                   }
                                   for (std::size_t b = 0; b < bins; ++b) acc[b].add(v[b]);
                                 }
                                 return acc;
                               });
  Acc total(bins);
  for (const auto& p : parts)
    for (std::size_t b = 0; b < bins; ++b) total[b].merge(p[b]);
  CurveTable table({"r_inner", "r_outer", "r", "density", "std_error", "ci_low", "ci_high"},
                   {"series"});
  for (std::size_t b = 0; b < bins; ++b) {
    const double area = kPi * w * w * (2.0 * b + 1.0);
    const Estimate e = make_estimate(total[b], cfg.confidence);
    table.add_row({std::string("mc_") + radial_kind_name(kind)},
                  {w * b, w * (b + 1), w * (b + 0.5), e.mean / area, e.std_error / area,
                   e.ci_low / area, e.ci_high / area});
  }
  return table;
}

/// Intersection density of a PLP with generating intensity lambda on
/// [0, pi) x R, counted in B(0, rho). Only lines with |r| < rho can meet the disk.
inline Estimate mc_plp_intersection_density(double lambda, double rho, const McConfig& cfg) {
  if (!(lambda > 0.0) || !(rho > 0.0)) throw std::invalid_argument("mc_plp_intersection_density");
  const double area = kPi * rho * rho;
  return mc_mean(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    const long n = std::poisson_distribution<long>(lambda * kPi * 2.0 * rho)(rng);
    std::vector<LineParams> lines;
    for (long i = 0; i < n; ++i) lines.push_back({uniform(rng, 0.0, kPi), uniform(rng, -rho, rho)});
    double count = 0.0;
    for (const auto& p : pairwise_intersections(lines))
      if (std::hypot(p.x, p.y) < rho) count += 1.0;
    return count / area;
  });
}

/// Distance from (r0, 0) to the nearest crossing of the line through (r0, 0)
/// with direction angle omega0 ~ U[0, pi) by n_B - 1 BLP lines.
inline std::vector<double> mc_nearest_intersection_distances(const BlpModel& model, double r0,
                                                             const McConfig& cfg) {
  model.validate();
  const BlpModel others{model.n_lines - 1, model.radius};
  return mc_values(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    const double omega0 = uniform(rng, 0.0, kPi);
    const PlanePoint x = test_point(r0);
    const LineParams own = line_through(x, {x.x + std::cos(omega0), x.y + std::sin(omega0)});
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < others.n_lines; ++i) {
      const auto p = intersect(own, sample_line(others, rng));
      if (p) best = std::min(best, distance(*p, x));
    }
    return best;
  });
}

// ---------------------------------------------------------------------------
// BLCP points

inline Estimate mc_void_blcp(const BlcpModel& model, double r0, double t, const McConfig& cfg) {
  model.validate();
  return mc_mean(cfg, [&](std::uint64_t seed) {
    if (t <= 0.0) return 1.0;
    Rng rng(seed);
    Realization re;
    re.lines = sample_lines(model.blp, rng);
    materialize(re, model.lambda, test_point(r0), t, rng);
    return re.point_count() == 0 ? 1.0 : 0.0;
  });
}

namespace detail {

// Lines sampled and points materialized around the test point until at least
// k points exist; returns the realization.
inline Realization realization_with_points(const BlcpModel& model, double r0, double radius,
                                           std::size_t k, Rng& rng) {
  Realization re;
  re.lines = sample_lines(model.blp, rng);
  materialize(re, model.lambda, test_point(r0), radius, rng);
  while (re.point_count() < k) extend_materialization(re, model.lambda, 2.0 * re.materialized_radius, rng);
  return re;
}

}  // namespace detail

/// k-th nearest point distance from (r0, 0) per realization.
inline std::vector<double> mc_nearest_point_distances(const BlcpModel& model, double r0,
                                                      const McConfig& cfg, std::size_t k = 1) {
  model.validate();
  const double start = cfg.materialize_radius > 0.0 ? cfg.materialize_radius : 4.0 / model.lambda;
  return mc_values(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    auto re = detail::realization_with_points(model, r0, start, k, rng);
    return nearest_point_distance(re, r0, k);
  });
}

/// E[d1 / d2] per realization.
inline Estimate mc_nearest_ratio(const BlcpModel& model, double r0, const McConfig& cfg) {
  model.validate();
  const double start = cfg.materialize_radius > 0.0 ? cfg.materialize_radius : 4.0 / model.lambda;
  return mc_mean(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    auto re = detail::realization_with_points(model, r0, start, 2, rng);
    return nearest_point_distance(re, r0, 1) / nearest_point_distance(re, r0, 2);
  });
}

/// 20x the mean nearest-point distance from (r0, 0).
inline double default_materialize_radius(const BlcpModel& model, double r0) {
  QuadSpec s = QuadSpec{}.with_tol(1e-6, 1e-9);
  s.transform = Transform::kSemiInfinite;
  s.scale = 1.0 / model.lambda;
  auto res = integrate_semi_infinite(
      [&](double t) { return void_prob_blcp(model, r0, t, QuadSpec{}.with_tol(1e-8, 1e-12)); }, 0.0, s);
  return 20.0 * res.value;
}

inline double resolve_radius(const McConfig& cfg, const BlcpModel& model, double r0) {
  return cfg.materialize_radius > 0.0 ? cfg.materialize_radius : default_materialize_radius(model, r0);
}

// ---------------------------------------------------------------------------
// Shifted and reduced process seen from (r0, 0)

namespace detail {

struct NearestView {
  Realization re;
  std::size_t nearest_line = 0;
  std::size_t nearest_index = 0;
  double d1 = 0.0;
};

inline NearestView nearest_view(Realization re, double r0) {
  if (re.point_count() == 0) throw std::logic_error("nearest_view: no points");
  const PlanePoint x = test_point(r0);
  NearestView v;
  v.d1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < re.lines.size(); ++i)
    for (std::size_t j = 0; j < re.points_on_line[i].size(); ++j) {
      const double d = distance(re.lines[i].at(re.points_on_line[i][j]), x);
      if (d < v.d1) {
        v.d1 = d;
        v.nearest_line = i;
        v.nearest_index = j;
      }
    }
  v.re = std::move(re);
  return v;
}

// Sum over lines of the tails beyond the materialization ball, each line tail
// given by tail(a, lo) over one of its two half-lines.
template <class Tail>
double far_tail_sum(const Realization& re, Tail&& tail) {
  double total = 0.0;
  for (const auto& l : re.lines) {
    const double a = l.distance_to(re.center);
    const double rho = re.materialized_radius;
    const double lo = a < rho ? std::sqrt(rho * rho - a * a) : 0.0;
    total += 2.0 * tail(a, lo);
  }
  return total;
}

}  // namespace detail

/// Product of f over the points other than the nearest one, with the far
/// field replaced by its conditional expectation. With window = {lo, hi} the
/// trial is kept only when lo <= d1 < hi (NaN otherwise).
inline double pgfl_trial(const BlcpModel& model, double r0, const RadialFunctional& f,
                         double radius, std::uint64_t seed, double window_lo = 0.0,
                         double window_hi = std::numeric_limits<double>::infinity()) {
  Rng rng(seed);
  const PlanePoint x = test_point(r0);
  Realization re;
  re.lines = sample_lines(model.blp, rng);
  if (std::isfinite(window_hi)) {
    materialize(re, model.lambda, x, window_hi, rng);
    if (re.point_count() == 0) return std::numeric_limits<double>::quiet_NaN();
    const double d1 = nearest_point_distance(re, r0, 1);
    if (d1 < window_lo) return std::numeric_limits<double>::quiet_NaN();
    extend_materialization(re, model.lambda, std::max(radius, window_hi), rng);
  } else {
    materialize(re, model.lambda, x, radius, rng);
    while (re.point_count() == 0) extend_materialization(re, model.lambda, 2.0 * re.materialized_radius, rng);
  }
  const auto v = detail::nearest_view(std::move(re), r0);
  double prod = 1.0;
  for (std::size_t i = 0; i < v.re.lines.size(); ++i)
    for (std::size_t j = 0; j < v.re.points_on_line[i].size(); ++j) {
      if (i == v.nearest_line && j == v.nearest_index) continue;
      prod *= f(distance(v.re.lines[i].at(v.re.points_on_line[i][j]), x));
    }
  if (f.identically_one || prod == 0.0) return prod;
  const QuadSpec ts = QuadSpec{}.with_tol(1e-8, 1e-12);
  const double far = detail::far_tail_sum(v.re, [&](double a, double lo) { return f.tail(a, lo, ts); });
  return prod * std::exp(-model.lambda * far);
}

/// E[prod f] over the shifted and reduced process.
inline Estimate mc_pgfl(const BlcpModel& model, double r0, const RadialFunctional& f,
                        const McConfig& cfg) {
  model.validate();
  const double radius = resolve_radius(cfg, model, r0);
  return mc_mean(cfg, [&](std::uint64_t seed) { return pgfl_trial(model, r0, f, radius, seed); });
}

/// E[prod f | d1 in [d1, d1 + delta)] by rejection; Estimate::trials counts
/// the accepted realizations.
inline Estimate mc_conditional_pgfl(const BlcpModel& model, double r0, const RadialFunctional& f,
                                    double d1, double delta, const McConfig& cfg) {
  model.validate();
  if (!(d1 > 0.0) || !(delta > 0.0)) throw std::invalid_argument("mc_conditional_pgfl: d1, delta > 0");
  const double radius = resolve_radius(cfg, model, r0);
  return mc_mean(cfg, [&](std::uint64_t seed) {
    return pgfl_trial(model, r0, f, radius, seed, d1, d1 + delta);
  });
}

struct PalmCheckSamples {
  std::vector<double> palm;       // nearest-neighbor distance of x under palm_augment
  std::vector<double> empirical;  // same seen from points of the process near x
};

/// Nearest-neighbor distances from a typical point at x = (r0, 0): one sample
/// built by palm_augment on n_B - 1 lines, the other from every point of an
/// unconditioned realization falling in B(x, eps).
inline PalmCheckSamples mc_palm_check(const BlcpModel& model, double r0, double eps,
                                      const McConfig& palm_cfg, const McConfig& empirical_cfg) {
  model.validate();
  if (model.n_lines() < 2) throw std::invalid_argument("mc_palm_check: n_B >= 2");
  const PlanePoint x = test_point(r0);
  const BlcpModel reduced{{model.n_lines() - 1, model.radius()}, model.lambda};
  const double start = 4.0 / model.lambda;

  auto nn_from = [&](Realization& re, PlanePoint y, Rng& rng, std::size_t self_line,
                     std::size_t self_index) {
    for (;;) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < re.lines.size(); ++i)
        for (std::size_t j = 0; j < re.points_on_line[i].size(); ++j) {
          if (i == self_line && j == self_index) continue;
          best = std::min(best, distance(re.lines[i].at(re.points_on_line[i][j]), y));
        }
      if (best <= re.materialized_radius - distance(y, re.center)) return best;
      extend_materialization(re, model.lambda, 2.0 * re.materialized_radius, rng);
    }
  };

  PalmCheckSamples out;
  out.palm = mc_values(palm_cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    Realization base;
    base.lines = sample_lines(reduced.blp, rng);
    materialize(base, model.lambda, x, start, rng);
    Realization re = palm_augment(base, x, model, mix64(seed));
    const std::size_t li = re.lines.size() - 1;
    const auto& pts = re.points_on_line[li];
    const double own = re.lines[li].offset_of(x);
    const auto j = static_cast<std::size_t>(
        std::min_element(pts.begin(), pts.end(),
                         [&](double a, double b) { return std::abs(a - own) < std::abs(b - own); }) -
        pts.begin());
    return nn_from(re, x, rng, li, j);
  });

  empirical_cfg.validate();
  auto parts = run_blocks<std::vector<double>>(
      empirical_cfg.trials, empirical_cfg.worker_count(), empirical_cfg.block_size,
      [&](std::size_t lo, std::size_t hi) {
        std::vector<double> v;
        for (std::size_t t = lo; t < hi; ++t) {
          Rng rng(derive_seed(empirical_cfg.master_seed, t));
          Realization re;
          re.lines = sample_lines(model.blp, rng);
          bool close = false;
          for (const auto& l : re.lines) close = close || l.distance_to(x) < eps;
          if (!close) continue;
          materialize(re, model.lambda, x, eps, rng);
          if (re.point_count() == 0) continue;
          // Extension only adds points outside B(x, eps), so the window
          // points are the ones sampled above.
          extend_materialization(re, model.lambda, std::max(start, 2.0 * eps), rng);
          // Every point in B(x, eps) contributes one nearest-neighbor sample.
          for (std::size_t i = 0; i < re.lines.size(); ++i)
            for (std::size_t k = 0; k < re.points_on_line[i].size(); ++k) {
              const PlanePoint y = re.lines[i].at(re.points_on_line[i][k]);
              if (distance(y, x) < eps) v.push_back(nn_from(re, y, rng, i, k));
            }
        }
        return v;
      });
  for (auto& p : parts) out.empirical.insert(out.empirical.end(), p.begin(), p.end());
  return out;
}

// ---------------------------------------------------------------------------
// SINR

/// Upper bound on the mean interference, in units of the noise term, from
/// points farther than rho from (r0, 0): the line-length density around the
/// origin is nonincreasing, so rho(|x|) <= rho(|x - (r0, 0)| - r0).
inline double far_interference_bound(const BlcpModel& model, const RadioParams& radio, double r0,
                                     double rho) {
  if (radio.p == 0.0) return 0.0;
  auto g = [&](double r) {
    return kTwoPi * r * line_length_density(model.blp, std::max(0.0, r - r0)) *
           std::pow(r, -radio.alpha);
  };
  QuadSpec s = QuadSpec{}.with_tol(1e-6, 1e-300);
  s.transform = Transform::kSemiInfinite;
  s.scale = rho;
  auto res = integrate_semi_infinite(g, rho, s);
  if (!res.converged) return std::numeric_limits<double>::infinity();
  return radio.xi0 * radio.p * model.lambda * res.value;
}

/// One realization seen by the receiver at (r0, 0): nearest distance, the
/// other materialized distances and the log of the far-field factor
/// E[prod (1 - p gamma d1^a / (r^a + gamma d1^a))] over points outside the ball.
struct LinkScene {
  double d1 = 0.0;
  std::vector<double> interferers;
  double far_log = 0.0;
};

inline LinkScene link_scene(const BlcpModel& model, const RadioParams& radio, double r0,
                            double radius, FarField far, Rng& rng) {
  auto re = detail::realization_with_points(model, r0, radius, 1, rng);
  auto v = detail::nearest_view(std::move(re), r0);
  LinkScene s;
  s.d1 = v.d1;
  const PlanePoint x = test_point(r0);
  for (std::size_t i = 0; i < v.re.lines.size(); ++i)
    for (std::size_t j = 0; j < v.re.points_on_line[i].size(); ++j) {
      if (i == v.nearest_line && j == v.nearest_index) continue;
      s.interferers.push_back(distance(v.re.lines[i].at(v.re.points_on_line[i][j]), x));
    }
  if (far == FarField::kIntegrate && radio.p > 0.0) {
    detail::MomentTail tail{radio, {1.0}, QuadSpec{}.with_tol(1e-9, 1e-14)};
    const double total = detail::far_tail_sum(
        v.re, [&](double a, double lo) { return tail(s.d1, a, lo)[0].real(); });
    s.far_log = -model.lambda * total;
  }
  return s;
}

/// Exact success probability of the scene given the realization.
inline double scene_success_probability(const LinkScene& s, const RadioParams& radio) {
  const double c = radio.gamma * std::pow(s.d1, radio.alpha);
  double log_q = -c / radio.xi0 + s.far_log;
  for (double r : s.interferers)
    log_q += std::log1p(-radio.p * c / (std::pow(r, radio.alpha) + c));
  return std::exp(log_q);
}

/// One slot: fresh ALOHA and Rayleigh fading for the materialized interferers.
inline bool scene_success_draw(const LinkScene& s, const RadioParams& radio, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution active(radio.p);
  const double c = radio.gamma * std::pow(s.d1, radio.alpha);
  double interference = 0.0;
  for (double r : s.interferers)
    if (active(rng)) interference += expo(rng) * std::pow(r, -radio.alpha);
  // P(h1 > c (1/xi0 + I)) times the far factor.
  return expo(rng) > c * (1.0 / radio.xi0 + interference) - s.far_log;
}

namespace detail {

inline void truncation_warning(Estimate& e, const McConfig& cfg, const BlcpModel& model,
                               const RadioParams& radio, double r0, double radius) {
  if (cfg.far_field != FarField::kTruncate) return;
  const double bound = far_interference_bound(model, radio, r0, radius);
  if (bound > 1e-3)
    e.warnings.push_back("truncated interference bound " + std::to_string(bound) +
                         " of the noise term exceeds 1e-3 at radius " + std::to_string(radius));
}

// Doubles the radius until the truncation bound is below 1e-3 or the cap.
inline double truncation_radius(const McConfig& cfg, const BlcpModel& model,
                                const RadioParams& radio, double r0, double radius) {
  if (cfg.far_field != FarField::kTruncate) return radius;
  const double cap = std::max(radius, 64.0 * (model.radius() + r0));
  while (radius < cap && far_interference_bound(model, radio, r0, radius) > 1e-3) radius *= 2.0;
  return std::min(radius, cap);
}

}  // namespace detail

/// Fraction of (realization, fading, ALOHA) draws with SINR > gamma.
inline Estimate mc_sinr_success(const BlcpModel& model, const RadioParams& radio, double r0,
                                const McConfig& cfg) {
  model.validate();
  radio.validate();
  const double radius =
      detail::truncation_radius(cfg, model, radio, r0, resolve_radius(cfg, model, r0));
  Estimate e = mc_mean(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    const auto s = link_scene(model, radio, r0, radius, cfg.far_field, rng);
    return scene_success_draw(s, radio, rng) ? 1.0 : 0.0;
  });
  detail::truncation_warning(e, cfg, model, radio, r0, radius);
  return e;
}

/// Per-realization conditional success probability. fading_draws = 0 gives
/// the exact value given the realization; otherwise the fraction of
/// successes over that many fading/ALOHA draws.
inline std::vector<double> mc_meta_samples(const BlcpModel& model, const RadioParams& radio,
                                           double r0, std::size_t fading_draws,
                                           const McConfig& cfg) {
  model.validate();
  radio.validate();
  const double radius =
      detail::truncation_radius(cfg, model, radio, r0, resolve_radius(cfg, model, r0));
  return mc_values(cfg, [&](std::uint64_t seed) {
    Rng rng(seed);
    const auto s = link_scene(model, radio, r0, radius, cfg.far_field, rng);
    if (fading_draws == 0) return scene_success_probability(s, radio);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < fading_draws; ++k) hits += scene_success_draw(s, radio, rng);
    return static_cast<double>(hits) / static_cast<double>(fading_draws);
  });
}

inline std::vector<double> empirical_ccdf(std::vector<double> samples, const std::vector<double>& at) {
  std::sort(samples.begin(), samples.end());
  std::vector<double> out;
  for (double b : at) {
    const auto it = std::upper_bound(samples.begin(), samples.end(), b);
    out.push_back(static_cast<double>(samples.end() - it) / samples.size());
  }
  return out;
}

/// Mean number of slots until the first success; each slot the typical
/// transmitter is active with probability p and interferers redraw ALOHA and
/// fading. Runs are censored at max_slots.
inline Estimate mc_local_delay(const BlcpModel& model, const RadioParams& radio, double r0,
                               std::size_t max_slots, const McConfig& cfg) {
  model.validate();
  radio.validate();
  if (max_slots < 1) throw std::invalid_argument("mc_local_delay: max_slots >= 1");
  const double radius =
      detail::truncation_radius(cfg, model, radio, r0, resolve_radius(cfg, model, r0));
  cfg.validate();
  struct Acc {
    SampleStats stats;
    double censored = 0.0;
  };
  auto parts = run_blocks<Acc>(cfg.trials, cfg.worker_count(), cfg.block_size,
                               [&](std::size_t lo, std::size_t hi) {
                                 Acc acc;
                                 for (std::size_t i = lo; i < hi; ++i) {
                                   Rng rng(derive_seed(cfg.master_seed, i));
                                   const auto s = link_scene(model, radio, r0, radius, cfg.far_field, rng);
                                   std::bernoulli_distribution tx(radio.p);
                                   std::size_t slot = 1;
                                   for (; slot <= max_slots; ++slot)
                                     if (tx(rng) && scene_success_draw(s, radio, rng)) break;
                                   if (slot > max_slots) {
                                     acc.censored += 1.0;
                                     slot = max_slots;
                                   }
                                   acc.stats.add(static_cast<double>(slot));
                                 }
                                 return acc;
                               });
  Acc total;
  for (const auto& p : parts) {
    total.stats.merge(p.stats);
    total.censored += p.censored;
  }
  Estimate e = make_estimate(total.stats, cfg.confidence);
  e.censored_fraction = total.censored / total.stats.n;
  if (e.censored_fraction > 0.01)
    e.warnings.push_back("censoring fraction " + std::to_string(e.censored_fraction) +
                         " exceeds 1%: the delay may diverge");
  detail::truncation_warning(e, cfg, model, radio, r0, radius);
  return e;
}

}  // namespace blcp
