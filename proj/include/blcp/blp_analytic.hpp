#pragma once

// Closed-form BLP statistics. A line at distance a from the test point is
// handled through the radial weight w(a): the measure, on the parameter
// cylinder, of lines whose distance from (r0, 0) is in [a, a + da] is w(a) da.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blcp/core.hpp"
#include "blcp/quadrature.hpp"

namespace blcp {

struct AnnulusSpec {
  double w = 1.0;
  int i = 0;

  void validate() const {
    if (!(w > 0.0)) throw std::invalid_argument("AnnulusSpec: w must be > 0");
    if (i < 0) throw std::invalid_argument("AnnulusSpec: i must be >= 0");
  }
  double inner() const { return w * i; }
  double outer() const { return w * (i + 1); }
  double area() const { return kPi * w * w * (2.0 * i + 1.0); }
};

struct IntersectionQuery {
  double r0 = 0.0;
  double omega0 = 0.0;
  double t = 0.0;
};

namespace detail {

inline void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || std::isnan(v))
    throw std::invalid_argument(std::string(what) + " must be >= 0");
}

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// J(s) = int_0^pi (r0 cos(theta) + s)^+ dtheta.
inline double positive_part_integral(double r0, double s) {
  if (s >= r0) return kPi * s;
  if (s <= -r0) return 0.0;
  const double a = -s / r0;
  return r0 * std::sqrt(std::max(0.0, 1.0 - a * a)) + s * std::acos(a);
}

}  // namespace detail

/// Measure density of lines at distance a from (r0, 0): the band area grows
/// by w(a) da when t goes from a to a + da. Zero for a > R + r0.
inline double band_weight(double r0, double R, double a) {
  if (a < 0.0) return 0.0;
  if (r0 == 0.0) return a <= R ? kTwoPi : 0.0;
  const double hi = std::acos(detail::clamp_unit((-R - a) / r0));
  const double lo = std::acos(detail::clamp_unit((R - a) / r0));
  return 2.0 * (hi - lo);
}

/// Distances where band_weight is not smooth. Suitable as breakpoints.
inline std::vector<double> band_weight_kinks(double r0, double R) {
  std::vector<double> k{std::abs(R - r0), R + r0};
  return k;
}

/// Lines of the cylinder within distance t of (r0, 0), clipped to |r| <= R.
inline double domain_band_area(double r0, double t, double R) {
  detail::require_nonnegative(r0, "domain_band_area: r0");
  detail::require_nonnegative(t, "domain_band_area: t");
  if (!(R > 0.0)) throw std::invalid_argument("domain_band_area: R must be > 0");
  if (r0 == 0.0) return kTwoPi * std::min(t, R);
  const double area = kTwoPi * t - 2.0 * detail::positive_part_integral(r0, t - R) +
                      2.0 * detail::positive_part_integral(r0, -t - R);
  return std::clamp(area, 0.0, kTwoPi * R);
}

/// One branch of the piecewise band-area formula, evaluated as written
/// (k = 1: r0 + t <= R; k = 2: r0 + t > R and r0 - t <= R; k = 3: r0 - t >= R).
/// Throws std::domain_error where the branch expression is undefined.
inline double domain_band_area_branch(int k, double r0, double t, double R) {
  auto root = [](double x) {
    if (x < -1e-12) throw std::domain_error("domain_band_area_branch: outside branch domain");
    return std::sqrt(std::max(0.0, x));
  };
  auto safe_acos = [](double x) {
    if (std::abs(x) > 1.0 + 1e-12)
      throw std::domain_error("domain_band_area_branch: outside branch domain");
    return std::acos(detail::clamp_unit(x));
  };
  switch (k) {
    case 1:
      return kTwoPi * t;
    case 2: {
      if (r0 == 0.0) throw std::domain_error("domain_band_area_branch: r0 = 0");
      const double u = (R - t) / r0;
      return kTwoPi * t - 2.0 * r0 * root(1.0 - u * u) + 2.0 * (R - t) * safe_acos(u);
    }
    case 3: {
      if (r0 == 0.0) throw std::domain_error("domain_band_area_branch: r0 = 0");
      const double u = (R - t) / r0;
      const double v = (R + t) / r0;
      return kTwoPi * t - 2.0 * r0 * (root(1.0 - u * u) - root(1.0 - v * v)) +
             2.0 * (R - t) * safe_acos(u) - 2.0 * (R + t) * safe_acos(v);
    }
    default:
      throw std::invalid_argument("domain_band_area_branch: k must be 1, 2 or 3");
  }
}

/// Piecewise formula with branch selection (lower branch on boundaries).
inline double domain_band_area_piecewise(double r0, double t, double R) {
  if (r0 + t <= R) return domain_band_area_branch(1, r0, t, R);
  if (r0 - t <= R) return domain_band_area_branch(2, r0, t, R);
  return domain_band_area_branch(3, r0, t, R);
}

/// r-section of the band {|r0 cos(theta) - r| <= t, |r| <= R} at theta.
inline BandSlice domain_band_slice(double r0, double t, double R, double theta) {
  const double c = r0 * std::cos(theta);
  BandSlice s;
  s.add(std::max(-R, c - t), std::min(R, c + t));
  return s;
}

/// Angles in (0, pi) where the band edges hit r = +-R.
inline std::vector<double> domain_band_breaks(double r0, double t, double R) {
  std::vector<double> out;
  if (r0 == 0.0) return out;
  for (double v : {R - t, R + t, -R - t, -R + t}) {
    const double u = v / r0;
    if (std::abs(u) < 1.0) out.push_back(std::acos(u));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double void_prob_blp(const BlpModel& model, double r0, double t) {
  model.validate();
  const double area = domain_band_area(r0, t, model.radius);
  const double q = std::clamp(1.0 - area / model.domain_measure(), 0.0, 1.0);
  return std::pow(q, model.n_lines);
}

inline double cdf_nearest_line(const BlpModel& model, double r0, double t) {
  return 1.0 - void_prob_blp(model, r0, t);
}

// ---------------------------------------------------------------------------
// Line length

inline double line_length_density(const BlpModel& model, double r) {
  model.validate();
  detail::require_nonnegative(r, "line_length_density: r");
  const double n = model.n_lines;
  const double R = model.radius;
  if (r <= R) return n / (2.0 * R);
  return n / (kPi * R) * std::asin(R / r);
}

/// Expected total line length inside the disk of radius t centered at the origin.
inline double line_length_measure_origin(const BlpModel& model, double t) {
  model.validate();
  detail::require_nonnegative(t, "line_length_measure_origin: t");
  const double n = model.n_lines;
  const double R = model.radius;
  if (t <= R) return n * kPi * t * t / (2.0 * R);
  return n * (std::sqrt(t * t - R * R) + t * t * std::asin(R / t) / R);
}

inline double annulus_line_density(const BlpModel& model, const AnnulusSpec& spec) {
  spec.validate();
  const double n = model.n_lines;
  if (spec.outer() <= model.radius) return n / (2.0 * model.radius);
  return (line_length_measure_origin(model, spec.outer()) -
          line_length_measure_origin(model, spec.inner())) /
         spec.area();
}

/// Expected line length inside B((r0, 0), t) by 2-D quadrature of the chord
/// length over the domain band.
inline QuadResult<double> line_length_measure_disk_detailed(const BlpModel& model, double r0,
                                                            double t,
                                                            const QuadSpec& spec = geometry_spec()) {
  model.validate();
  detail::require_nonnegative(r0, "line_length_measure_disk: r0");
  detail::require_nonnegative(t, "line_length_measure_disk: t");
  const double R = model.radius;
  if (t == 0.0) return {};
  auto chord = [&](double theta, double r) {
    const double a = r0 * std::cos(theta) - r;
    return 2.0 * std::sqrt(std::max(0.0, t * t - a * a));
  };
  auto band = [&](double theta) { return domain_band_slice(r0, t, R, theta); };
  const auto breaks = domain_band_breaks(r0, t, R);
  auto res = integrate_2d_band(chord, band, 0.0, kPi, spec, breaks);
  res.value *= model.n_lines / model.domain_measure();
  res.error_estimate *= model.n_lines / model.domain_measure();
  return res;
}

inline double line_length_measure_disk(const BlpModel& model, double r0, double t,
                                       const QuadSpec& spec = geometry_spec()) {
  auto res = line_length_measure_disk_detailed(model, r0, t, spec);
  if (!res.converged)
    throw NumericalError("line_length_measure_disk: quadrature did not converge (r0 = " +
                         std::to_string(r0) + ", t = " + std::to_string(t) + ")");
  return res.value;
}

// ---------------------------------------------------------------------------
// Intersections

inline double intersection_density(const BlpModel& model, double r) {
  model.validate();
  detail::require_nonnegative(r, "intersection_density: r");
  const double n = model.n_lines;
  const double R = model.radius;
  const double pairs = n * (n - 1.0);
  if (r <= R) return pairs / (4.0 * kPi * R * R);
  return pairs / (4.0 * kPi * kPi * R * R * r) *
         (2.0 * r * std::asin(R / r) - 2.0 * R / r * std::sqrt(r * r - R * R));
}

/// Expected number of pairwise intersections in the disk of radius t at the origin.
inline double intersection_measure_disk(const BlpModel& model, double t) {
  model.validate();
  detail::require_nonnegative(t, "intersection_measure_disk: t");
  const double n = model.n_lines;
  const double R = model.radius;
  const double pairs = n * (n - 1.0);
  if (t <= R) return pairs / 4.0 * (t / R) * (t / R);
  return pairs / (2.0 * kPi * R * R) *
         (t * t * std::asin(R / t) + 2.0 * R * R * std::acos(R / t) -
          R * std::sqrt(t * t - R * R));
}

inline double annulus_intersection_density(const BlpModel& model, const AnnulusSpec& spec) {
  spec.validate();
  const double n = model.n_lines;
  if (spec.outer() <= model.radius) return n * (n - 1.0) / (4.0 * kPi * model.radius * model.radius);
  return (intersection_measure_disk(model, spec.outer()) -
          intersection_measure_disk(model, spec.inner())) /
         spec.area();
}

inline double plp_intersection_density(double lambda_ppp) {
  detail::require_nonnegative(lambda_ppp, "plp_intersection_density: lambda");
  return kPi * lambda_ppp * lambda_ppp;
}

/// Range [r_L, r_U] of r for which the line (theta, r) meets the host line
/// through (r0, 0) at angle omega0 within distance t of the test point.
/// Four orientation cases, each clipped to [-R, R].
inline std::pair<double, double> nearest_intersection_band(const IntersectionQuery& q,
                                                           double theta, double R) {
  const double c = q.r0 * std::cos(theta);
  const double k = q.t * std::cos(theta - q.omega0);
  auto clip_a = [R](double v) { return std::max(-R, std::min(R, v)); };
  auto clip_b = [R](double v) { return std::min(R, std::max(-R, v)); };
  constexpr double kHalf = kPi / 2.0;
  if (q.omega0 <= kHalf) {
    if (theta <= q.omega0 + kHalf) return {clip_a(c - k), clip_a(c + k)};
    return {clip_a(c + k), clip_a(c - k)};
  }
  if (theta <= q.omega0 - kHalf) return {clip_b(c + k), clip_b(c - k)};
  return {clip_a(c - k), clip_a(c + k)};
}

/// Same band written with |cos(theta - omega0)|.
inline std::pair<double, double> nearest_intersection_band_abs(const IntersectionQuery& q,
                                                               double theta, double R) {
  const double c = q.r0 * std::cos(theta);
  const double k = q.t * std::abs(std::cos(theta - q.omega0));
  return {std::clamp(c - k, -R, R), std::clamp(c + k, -R, R)};
}

namespace detail {

// Theta in (0, pi) where the band width r_U - r_L has a kink for fixed omega0.
inline std::vector<double> intersection_band_breaks(double r0, double t, double omega0, double R) {
  std::vector<double> out;
  auto keep = [&](double th) {
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
      const double v = th + shift;
      if (v > 0.0 && v < kPi) out.push_back(v);
    }
  };
  keep(omega0 + kPi / 2.0);
  keep(omega0 - kPi / 2.0);
  for (double sign : {1.0, -1.0}) {
    // r0 cos(theta) + sign * t cos(theta - omega0) = A cos(theta - phi)
    const double x = r0 + sign * t * std::cos(omega0);
    const double y = sign * t * std::sin(omega0);
    const double amp = std::hypot(x, y);
    if (amp == 0.0) continue;
    const double phi = std::atan2(y, x);
    for (double level : {R, -R}) {
      const double u = level / amp;
      if (std::abs(u) >= 1.0) continue;
      const double d = std::acos(u);
      keep(phi + d);
      keep(phi - d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Band area for a fixed host orientation omega0.
inline double intersection_band_area(double r0, double t, double omega0, double R,
                                     const QuadSpec& spec = geometry_spec()) {
  const IntersectionQuery q{r0, omega0, t};
  auto width = [&](double theta) {
    const auto [lo, hi] = nearest_intersection_band_abs(q, theta, R);
    return hi - lo;
  };
  const auto breaks = detail::intersection_band_breaks(r0, t, omega0, R);
  auto res = integrate_finite(width, 0.0, kPi, spec, breaks);
  if (!res.converged) throw NumericalError("intersection_band_area: quadrature did not converge");
  return res.value;
}

/// Band area averaged over a uniform host orientation omega0 in [0, pi).
inline double mean_intersection_band_area(double r0, double t, double R,
                                          const QuadSpec& spec = geometry_spec()) {
  detail::require_nonnegative(r0, "mean_intersection_band_area: r0");
  detail::require_nonnegative(t, "mean_intersection_band_area: t");
  if (t == 0.0) return 0.0;
  const QuadSpec inner = spec.with_tol(spec.rel_tol * 0.1, spec.abs_tol * 0.1);
  auto per_omega = [&](double omega0) { return intersection_band_area(r0, t, omega0, R, inner); };
  const double brk[] = {kPi / 2.0};
  auto res = integrate_finite(per_omega, 0.0, kPi, spec, brk);
  if (!res.converged)
    throw NumericalError("mean_intersection_band_area: quadrature did not converge");
  return res.value / kPi;
}

/// CDF of the distance from (r0, 0), lying on a line of the BLP, to the nearest
/// intersection on that line. exponent < 0 selects the default n_B - 1 (the
/// number of other lines).
inline double cdf_nearest_intersection(const BlpModel& model, double r0, double t,
                                       int exponent = -1,
                                       const QuadSpec& spec = QuadSpec{}.with_tol(1e-9, 1e-10)) {
  model.validate();
  detail::require_nonnegative(t, "cdf_nearest_intersection: t");
  const int m = exponent < 0 ? model.n_lines - 1 : exponent;
  if (t == 0.0 || m == 0) return 0.0;
  const double area = mean_intersection_band_area(r0, t, model.radius, spec);
  const double total = model.domain_measure();
  if (area > total * (1.0 + 1e-9))
    throw NumericalError("cdf_nearest_intersection: band area exceeds the domain measure");
  const double q = std::clamp(1.0 - area / total, 0.0, 1.0);
  return 1.0 - std::pow(q, m);
}

}  // namespace blcp
