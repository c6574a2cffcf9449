#pragma once

// BLCP statistics seen from the test point (r0, 0): void probability, law of
// the nearest point, and the PGFL of the remaining points given the nearest
// distance d1.
//
// Every other line enters through its distance a from the test point and the
// radial weight w(a) (see band_weight). For a line at distance a < d1 the
// chord of half-length h = sqrt(d1^2 - a^2) must be empty; the line carrying
// the nearest point contributes the density of a point at the chord end.
// Integrals over a in [0, d1] are taken in the angle phi with a = d1 sin(phi),
// which removes the square-root behavior at a = d1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "blcp/blp_analytic.hpp"
#include "blcp/core.hpp"
#include "blcp/quadrature.hpp"

namespace blcp {

/// Nearest-point distance d1 and the test-point radius it refers to.
struct PalmContext {
  double d1 = 0.0;
  double r0 = 0.0;
};

/// How the lines other than the serving line are weighted given d1.
/// kExact: each line hitting the d1-disk is weighted by the probability that
/// its chord is empty, and the serving line by the density of a point at the
/// chord end. kUniformBand: every line of the band gets the same weight
/// (G = G_I ((A_D G_I + (2 pi R - A_D) G_NI) / 2 pi R)^(n - 1)).
enum class PalmWeighting { kExact, kUniformBand };

struct PalmSpec {
  QuadSpec outer = QuadSpec{}.with_tol(1e-8, 1e-13);
  QuadSpec band = QuadSpec{}.with_tol(1e-9, 1e-14);
  QuadSpec tail = QuadSpec{}.with_tol(1e-10, 1e-14);

  /// For the nested moment computations (d1 x band x line).
  static PalmSpec nested() {
    PalmSpec s;
    s.outer = QuadSpec{}.with_tol(1e-6, 1e-12);
    s.band = QuadSpec{}.with_tol(1e-7, 1e-12);
    s.tail = QuadSpec{}.with_tol(1e-8, 1e-13);
    return s;
  }
};

/// f(|x - test point|) with values in [0, 1].
/// line_tail(a, lo), when set, returns int_lo^inf (1 - f(sqrt(y^2 + a^2))) dy in
/// closed form. far_deficit is lim 1 - f(r) as r -> inf; a positive value
/// makes every line tail infinite. scale is the distance over which 1 - f
/// decays (used by the semi-infinite map). deficit, when set, is 1 - f
/// without the cancellation of the subtraction.
struct RadialFunctional {
  std::function<double(double)> f;
  std::function<double(double)> deficit;
  std::function<double(double, double)> line_tail;
  double far_deficit = 0.0;
  double scale = 1.0;
  bool identically_one = false;

  double operator()(double r) const { return f(r); }

  double tail(double a, double lo, const QuadSpec& spec) const {
    if (identically_one) return 0.0;
    if (far_deficit > 0.0) return std::numeric_limits<double>::infinity();
    if (line_tail) return line_tail(a, lo);
    auto g = [&](double y) {
      const double r = std::hypot(y, a);
      return deficit ? deficit(r) : 1.0 - f(r);
    };
    QuadSpec s = spec;
    s.transform = Transform::kSemiInfinite;
    s.scale = std::max({scale, a, lo, 1e-9});
    auto res = integrate_semi_infinite(g, lo, s);
    if (!res.converged)
      throw NumericalError("RadialFunctional: line tail did not converge at a = " +
                           std::to_string(a) + ", lo = " + std::to_string(lo));
    return res.value;
  }

  static RadialFunctional one() {
    RadialFunctional r;
    r.f = [](double) { return 1.0; };
    r.identically_one = true;
    return r;
  }

  static RadialFunctional constant(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("RadialFunctional: c in [0, 1]");
    if (c == 1.0) return one();
    RadialFunctional r;
    r.f = [c](double) { return c; };
    r.far_deficit = 1.0 - c;
    return r;
  }

  /// 1 / (1 + gamma (d1 / r)^alpha): Rayleigh-fading interference factor.
  static RadialFunctional sir(double gamma, double alpha, double d1) {
    RadialFunctional r;
    r.f = [=](double x) {
      if (x == 0.0) return 0.0;
      return 1.0 / (1.0 + gamma * std::pow(d1 / x, alpha));
    };
    r.deficit = [=](double x) {
      if (x == 0.0) return 1.0;
      const double q = gamma * std::pow(d1 / x, alpha);
      return q / (1.0 + q);
    };
    r.scale = std::max(d1 * std::pow(gamma, 1.0 / alpha), 1e-9);
    if (alpha == 2.0) {
      r.line_tail = [=](double a, double lo) {
        const double c = gamma * d1 * d1;
        const double q = std::sqrt(a * a + c);
        if (q == 0.0) return 0.0;
        return c / q * (lo > 0.0 ? std::atan(q / lo) : kPi / 2.0);
      };
    }
    return r;
  }

  /// exp(-s r^-alpha): Laplace transform of the interference at s.
  static RadialFunctional laplace(double s, double alpha) {
    RadialFunctional r;
    r.f = [=](double x) {
      if (x == 0.0) return 0.0;
      return std::exp(-s * std::pow(x, -alpha));
    };
    r.deficit = [=](double x) {
      if (x == 0.0) return 1.0;
      return -std::expm1(-s * std::pow(x, -alpha));
    };
    r.scale = std::max(std::pow(s, 1.0 / alpha), 1e-9);
    return r;
  }

  /// 1 for r >= rho, c inside; for the window-conditioned checks.
  static RadialFunctional step(double rho, double c) {
    RadialFunctional r;
    r.f = [=](double x) { return x < rho ? c : 1.0; };
    r.line_tail = [=](double a, double lo) {
      if (a >= rho) return 0.0;
      const double h = std::sqrt(rho * rho - a * a);
      return (1.0 - c) * std::max(0.0, h - lo);
    };
    return r;
  }
};

namespace palm {

inline std::complex<double> exp_neg(double two_lambda, const std::complex<double>& t) {
  if (std::isinf(t.real()) && t.real() > 0.0) return 0.0;
  return std::exp(-two_lambda * t);
}

inline std::complex<double> ipow(std::complex<double> x, int n) {
  std::complex<double> out = 1.0;
  while (n > 0) {
    if (n & 1) out *= x;
    x *= x;
    n >>= 1;
  }
  return out;
}

/// Band integrals at nearest distance s, each normalized by 2 pi R.
/// Lanes 0..L-1 belong to the functionals, lane L to f = 1.
///   serving     int K_f w: line carrying the nearest point
///   inner_void  int_{a<s} e^{-2 lambda h} e^{-2 lambda T(a, h)} w
///   inner_plain int_{a<s} e^{-2 lambda T(a, h)} w   (only when requested)
///   outer       int_{a>s} e^{-2 lambda T(a, 0)} w
struct BandIntegrals {
  Lanes serving;
  Lanes inner_void;
  Lanes inner_plain;
  Lanes outer;
  bool converged = true;
  std::size_t evaluations = 0;
};

template <class Tail>
BandIntegrals band_integrals(const BlcpModel& model, double r0, double s, Tail& tail,
                             std::size_t L, bool want_plain, const PalmSpec& spec) {
  const double R = model.radius();
  const double lam = model.lambda;
  const double norm = 1.0 / model.blp.domain_measure();
  const std::size_t N = L + 1;
  const double a_hi = R + r0;
  const auto kinks = band_weight_kinks(r0, R);

  BandIntegrals out;
  out.serving = Lanes(N);
  out.inner_void = Lanes(N);
  out.inner_plain = Lanes(want_plain ? N : 0);
  out.outer = Lanes(N);

  auto lanes_at = [&](double a, double lo) {
    Lanes t;
    if (L > 0) {
      t = tail(s, a, lo);
      if (t.size() != L) throw std::logic_error("palm: tail returned wrong lane count");
    }
    return t;
  };

  if (s > 0.0) {
    const double phi_lo = 0.0;
    const double phi_hi = s > a_hi ? std::asin(a_hi / s) : kPi / 2.0;
    std::vector<double> breaks;
    for (double k : kinks)
      if (k > 0.0 && k < s) breaks.push_back(std::asin(k / s));

    // Serving line.
    auto serving = [&](double phi) {
      const double a = s * std::sin(phi);
      const double h = s * std::cos(phi);
      const double base = norm * 2.0 * lam * s * std::exp(-2.0 * lam * h) * band_weight(r0, R, a);
      Lanes v(N);
      if (base == 0.0) return v;
      const Lanes t = lanes_at(a, h);
      for (std::size_t l = 0; l < L; ++l) v[l] = base * exp_neg(2.0 * lam, t[l]);
      v[L] = base;
      return v;
    };
    auto rs = integrate_finite(serving, phi_lo, phi_hi, spec.band, breaks);
    out.serving = std::move(rs.value);
    out.converged = out.converged && rs.converged;
    out.evaluations += rs.evaluations;

    // Other lines hitting the disk of radius s.
    const std::size_t width = want_plain ? 2 * N : N;
    auto inner = [&](double phi) {
      const double a = s * std::sin(phi);
      const double h = s * std::cos(phi);
      const double plain = norm * band_weight(r0, R, a) * h;
      Lanes v(width);
      if (plain == 0.0) return v;
      const double vd = plain * std::exp(-2.0 * lam * h);
      const Lanes t = lanes_at(a, h);
      for (std::size_t l = 0; l < L; ++l) {
        const auto e = exp_neg(2.0 * lam, t[l]);
        v[l] = vd * e;
        if (want_plain) v[N + l] = plain * e;
      }
      v[L] = vd;
      if (want_plain) v[N + L] = plain;
      return v;
    };
    auto ri = integrate_finite(inner, phi_lo, phi_hi, spec.band, breaks);
    out.converged = out.converged && ri.converged;
    out.evaluations += ri.evaluations;
    for (std::size_t l = 0; l < N; ++l) {
      out.inner_void[l] = ri.value[l];
      if (want_plain) out.inner_plain[l] = ri.value[N + l];
    }
  }

  // Lines missing the disk.
  const double o_lo = s;
  if (a_hi > o_lo) {
    auto outer = [&](double a) {
      const double base = norm * band_weight(r0, R, a);
      Lanes v(N);
      if (base == 0.0) return v;
      const Lanes t = lanes_at(a, 0.0);
      for (std::size_t l = 0; l < L; ++l) v[l] = base * exp_neg(2.0 * lam, t[l]);
      v[L] = base;
      return v;
    };
    auto ro = integrate_finite(outer, o_lo, a_hi, spec.band, kinks);
    out.outer = std::move(ro.value);
    out.converged = out.converged && ro.converged;
    out.evaluations += ro.evaluations;
  }
  return out;
}

/// Conditional PGFL lanes (size L) at nearest distance s.
inline Lanes conditional_lanes(const BandIntegrals& b, int n_lines, PalmWeighting w) {
  const std::size_t L = b.serving.size() - 1;
  Lanes g(L);
  const int m = n_lines - 1;
  if (w == PalmWeighting::kExact) {
    const auto k1 = b.serving[L];
    const auto h1 = b.inner_void[L] + b.outer[L];
    if (std::abs(k1) == 0.0) throw std::invalid_argument("conditional PGFL: d1 outside the support");
    for (std::size_t l = 0; l < L; ++l)
      g[l] = (b.serving[l] / k1) * ipow((b.inner_void[l] + b.outer[l]) / h1, m);
    return g;
  }
  const auto a1 = b.inner_plain[L];
  const auto total = b.inner_plain[L] + b.outer[L];
  if (std::abs(a1) == 0.0) throw std::invalid_argument("conditional PGFL: d1 outside the support");
  for (std::size_t l = 0; l < L; ++l)
    g[l] = (b.inner_plain[l] / a1) * ipow((b.inner_plain[l] + b.outer[l]) / total, m);
  return g;
}

/// Nearest-point density times the conditional PGFL: lanes 0..L-1, plus the
/// density itself in lane L.
inline Lanes joint_lanes(const BandIntegrals& b, int n_lines, PalmWeighting w) {
  const std::size_t L = b.serving.size() - 1;
  const int m = n_lines - 1;
  Lanes j(L + 1);
  const double n = n_lines;
  j[L] = n * b.serving[L] * ipow(b.inner_void[L] + b.outer[L], m);
  if (w == PalmWeighting::kExact) {
    for (std::size_t l = 0; l < L; ++l)
      j[l] = n * b.serving[l] * ipow(b.inner_void[l] + b.outer[l], m);
    return j;
  }
  if (std::abs(j[L]) == 0.0) return j;
  const Lanes g = conditional_lanes(b, n_lines, w);
  for (std::size_t l = 0; l < L; ++l) j[l] = j[L] * g[l];
  return j;
}

struct D1Average {
  Lanes value;
  bool converged = true;
  bool divergent = false;
  double divergence_at = 0.0;
  double s_max = 0.0;
  double mass = 0.0;  // integral of the nearest-point density
  std::size_t evaluations = 0;
};

/// E_{d1}[pre(d1) G_f(d1)] for L functionals at once. tail(s, a, lo) returns
/// the L line tails at nearest distance s; pre(s) returns L prefactors.
/// Flags divergence when any lane of the integrand exceeds the threshold.
template <class Tail, class Pre>
D1Average average_over_d1(const BlcpModel& model, double r0, Tail&& tail, std::size_t L,
                          Pre&& pre, PalmWeighting w, const PalmSpec& spec,
                          double divergence_threshold = 1e12) {
  model.validate();
  const double R = model.radius();
  const double s_lo = 0.0;
  D1Average out;
  bool blown = false;
  double blown_at = 0.0;
  auto integrand = [&](double s) {
    if (!(s > s_lo)) return Lanes(L + 1);
    auto b = band_integrals(model, r0, s, tail, L, w == PalmWeighting::kUniformBand, spec);
    out.converged = out.converged && b.converged;
    out.evaluations += b.evaluations;
    Lanes j = joint_lanes(b, model.n_lines(), w);
    if (L > 0) {
      const Lanes p = pre(s);
      for (std::size_t l = 0; l < L; ++l) j[l] *= p[l];
    }
    for (std::size_t l = 0; l <= L; ++l) {
      const double mag = std::abs(j[l]);
      if (!std::isfinite(mag) || mag > divergence_threshold) {
        if (!blown) blown_at = s;
        blown = true;
        j[l] = 0.0;
      }
    }
    return j;
  };

  // Scan outward for the effective support.
  std::vector<double> scan;
  const double d0 = std::min(1.0, 0.05 / model.lambda);
  double peak = 0.0;
  double s_hi = s_lo + d0;
  int quiet = 0;
  for (int k = 0; k < 200; ++k) {
    s_hi = s_lo + d0 * std::pow(1.5, k);
    const Lanes v = integrand(s_hi);
    if (blown) break;
    scan.push_back(s_hi);
    const double mag = quad_norm(v);
    peak = std::max(peak, mag);
    if (peak > 0.0 && mag < 1e-15 * peak && s_hi > R + r0) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    if (s_hi > 1e7) {
      blown = true;
      blown_at = s_hi;
      break;
    }
  }
  if (blown) {
    out.divergent = true;
    out.divergence_at = blown_at;
    out.value = Lanes(L);
    return out;
  }
  for (double k : band_weight_kinks(r0, R))
    if (k > s_lo && k < s_hi) scan.push_back(k);
  auto res = integrate_finite(integrand, s_lo, s_hi, spec.outer, scan);
  out.converged = out.converged && res.converged;
  out.evaluations += res.evaluations;
  out.s_max = s_hi;
  if (blown) {
    out.divergent = true;
    out.divergence_at = blown_at;
    out.value = Lanes(L);
    return out;
  }
  const auto mass = res.value[L];
  out.mass = mass.real();
  out.value = Lanes(L);
  for (std::size_t l = 0; l < L; ++l) out.value[l] = res.value[l] / mass;
  return out;
}

/// Adapts a RadialFunctional to the lane interface.
struct FunctionalTail {
  const RadialFunctional* f;
  QuadSpec spec;
  Lanes operator()(double, double a, double lo) const { return Lanes{f->tail(a, lo, spec)}; }
};

}  // namespace palm

// ---------------------------------------------------------------------------
// Void probability and the nearest point

inline QuadSpec void_spec() { return QuadSpec{}.with_tol(1e-12, 1e-16); }

/// Probability that no BLCP point lies in B((r0, 0), t).
inline double void_prob_blcp(const BlcpModel& model, double r0, double t,
                             const QuadSpec& spec = void_spec()) {
  model.validate();
  detail::require_nonnegative(r0, "void_prob_blcp: r0");
  detail::require_nonnegative(t, "void_prob_blcp: t");
  const double R = model.radius();
  if (t == 0.0) return 1.0;
  const double lam = model.lambda;
  const double phi_lo = 0.0;
  const double phi_hi = t > R + r0 ? std::asin((R + r0) / t) : kPi / 2.0;
  std::vector<double> breaks;
  for (double k : band_weight_kinks(r0, R))
    if (k > 0.0 && k < t) breaks.push_back(std::asin(k / t));
  auto g = [&](double phi) {
    const double h = t * std::cos(phi);
    return -std::expm1(-2.0 * lam * h) * band_weight(r0, R, t * std::sin(phi)) * h;
  };
  auto res = integrate_finite(g, phi_lo, phi_hi, spec, breaks);
  if (!res.converged)
    throw NumericalError("void_prob_blcp: quadrature did not converge at t = " + std::to_string(t));
  const double hit = res.value / model.blp.domain_measure();
  return std::pow(std::clamp(1.0 - hit, 0.0, 1.0), model.n_lines());
}

/// Same quantity as a 2-D integral of 1 - exp(-lambda C) over the clipped band.
inline double void_prob_blcp_band(const BlcpModel& model, double r0, double t,
                                  const QuadSpec& spec = geometry_spec()) {
  model.validate();
  const double R = model.radius();
  if (t == 0.0) return 1.0;
  const double lam = model.lambda;
  auto g = [&](double theta, double r) {
    const double a = r0 * std::cos(theta) - r;
    const double c = 2.0 * std::sqrt(std::max(0.0, t * t - a * a));
    return -std::expm1(-lam * c);
  };
  auto band = [&](double theta) { return domain_band_slice(r0, t, R, theta); };
  auto res = integrate_2d_band(g, band, 0.0, kPi, spec, domain_band_breaks(r0, t, R));
  if (!res.converged) throw NumericalError("void_prob_blcp_band: quadrature did not converge");
  const double hit = res.value / model.blp.domain_measure();
  return std::pow(std::clamp(1.0 - hit, 0.0, 1.0), model.n_lines());
}

inline double cdf_nearest_blcp_point(const BlcpModel& model, double r0, double t,
                                     const QuadSpec& spec = void_spec()) {
  return 1.0 - void_prob_blcp(model, r0, t, spec);
}

/// Density of the nearest distance by numeric differentiation of the CDF.
inline double pdf_nearest_blcp_point(const BlcpModel& model, double r0, double t,
                                     DiffScheme scheme = DiffScheme::kRichardson) {
  if (!(t > 0.0)) throw std::invalid_argument("pdf_nearest_blcp_point: t must be > 0");
  double h = std::max(1e-4, 1e-3 * t);
  h = std::min(h, 0.5 * t);
  auto F = [&](double x) { return cdf_nearest_blcp_point(model, r0, std::max(0.0, x)); };
  const auto d = differentiate(F, t, scheme, h);
  return std::max(0.0, d.value);
}

/// Closed-form density of the nearest distance (serving-line density times
/// the other lines' void probability).
inline double nearest_point_density(const BlcpModel& model, double r0, double s,
                                    const PalmSpec& spec = PalmSpec{}) {
  model.validate();
  if (!(s > 0.0)) return 0.0;
  auto no_tail = [](double, double, double) { return Lanes(); };
  auto b = palm::band_integrals(model, r0, s, no_tail, 0, false, spec);
  if (!b.converged) throw NumericalError("nearest_point_density: quadrature did not converge");
  return palm::joint_lanes(b, model.n_lines(), PalmWeighting::kExact)[0].real();
}

/// Quantile of the nearest distance (inverse CDF).
inline double nearest_point_quantile(const BlcpModel& model, double r0, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("nearest_point_quantile: u in (0, 1)");
  const double lo0 = 0.0;
  double hi = 1.0;
  while (cdf_nearest_blcp_point(model, r0, hi) < u) hi *= 2.0;
  auto g = [&](double t) { return cdf_nearest_blcp_point(model, r0, t) - u; };
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo0, hi, g(lo0), g(hi),
                                             boost::math::tools::eps_tolerance<double>(48), iters);
  return 0.5 * (r.first + r.second);
}

// ---------------------------------------------------------------------------
// PGFL of the shifted and reduced process

inline void check_context(double r0, const PalmContext& ctx) {
  if (!(ctx.d1 > 0.0)) throw std::invalid_argument("PalmContext: d1 must be > 0");
  if (ctx.r0 != r0) throw std::invalid_argument("PalmContext: r0 does not match");
}

inline double conditional_pgfl(const BlcpModel& model, double r0, const PalmContext& ctx,
                               const RadialFunctional& f,
                               PalmWeighting weighting = PalmWeighting::kExact,
                               const PalmSpec& spec = PalmSpec{}) {
  model.validate();
  check_context(r0, ctx);
  if (f.identically_one) return 1.0;
  palm::FunctionalTail tail{&f, spec.tail};
  auto b = palm::band_integrals(model, r0, ctx.d1, tail, 1,
                                weighting == PalmWeighting::kUniformBand, spec);
  if (!b.converged)
    throw NumericalError("conditional_pgfl: band quadrature did not converge at d1 = " +
                         std::to_string(ctx.d1));
  const double g = palm::conditional_lanes(b, model.n_lines(), weighting)[0].real();
  return std::clamp(g, 0.0, 1.0);
}

/// Intersecting / non-intersecting split at d1. The g_* values are the
/// per-class PGFL averages; w_* the class weights (fractions of 2 pi R).
struct PalmSplit {
  double band_area = 0.0;
  // Exact weighting.
  double g_serving = 0.0;
  double g_intersecting = 0.0;
  double g_nonintersecting = 0.0;
  double w_intersecting = 0.0;
  double w_nonintersecting = 0.0;
  // Uniform band weighting.
  double g_i_uniform = 0.0;
  double g_ni_uniform = 0.0;
};

inline PalmSplit palm_split(const BlcpModel& model, double r0, const PalmContext& ctx,
                            const RadialFunctional& f, const PalmSpec& spec = PalmSpec{}) {
  model.validate();
  check_context(r0, ctx);
  palm::FunctionalTail tail{&f, spec.tail};
  auto b = palm::band_integrals(model, r0, ctx.d1, tail, 1, true, spec);
  if (!b.converged) throw NumericalError("palm_split: band quadrature did not converge");
  PalmSplit s;
  s.band_area = domain_band_area(r0, ctx.d1, model.radius());
  auto ratio = [](std::complex<double> x, std::complex<double> y) {
    return std::abs(y) > 0.0 ? (x / y).real() : 1.0;
  };
  s.g_serving = ratio(b.serving[0], b.serving[1]);
  s.g_intersecting = ratio(b.inner_void[0], b.inner_void[1]);
  s.g_nonintersecting = ratio(b.outer[0], b.outer[1]);
  s.w_intersecting = b.inner_void[1].real();
  s.w_nonintersecting = b.outer[1].real();
  s.g_i_uniform = ratio(b.inner_plain[0], b.inner_plain[1]);
  s.g_ni_uniform = ratio(b.outer[0], b.outer[1]);
  return s;
}

inline palm::D1Average pgfl_detailed(const BlcpModel& model, double r0, const RadialFunctional& f,
                                     PalmWeighting weighting = PalmWeighting::kExact,
                                     const PalmSpec& spec = PalmSpec{}) {
  palm::FunctionalTail tail{&f, spec.tail};
  auto pre = [](double) { return Lanes{1.0}; };
  return palm::average_over_d1(model, r0, tail, 1, pre, weighting, spec);
}

/// Unconditional PGFL E_{d1}[G] of the shifted and reduced process.
inline double pgfl(const BlcpModel& model, double r0, const RadialFunctional& f,
                   PalmWeighting weighting = PalmWeighting::kExact,
                   const PalmSpec& spec = PalmSpec{}) {
  model.validate();
  if (f.identically_one) return 1.0;
  auto res = pgfl_detailed(model, r0, f, weighting, spec);
  if (!res.converged) throw NumericalError("pgfl: quadrature did not converge");
  return std::clamp(res.value[0].real(), 0.0, 1.0);
}

/// E_{d1}[g(d1)] by stratified inverse-CDF sampling: g at the quantiles
/// (k + 1/2) / strata of the nearest distance.
template <class G>
double expectation_over_d1_inverse_cdf(const BlcpModel& model, double r0, G&& g,
                                       int strata = 256) {
  if (strata < 1) throw std::invalid_argument("expectation_over_d1_inverse_cdf: strata >= 1");
  double sum = 0.0;
  for (int k = 0; k < strata; ++k) {
    const double u = (k + 0.5) / strata;
    sum += g(nearest_point_quantile(model, r0, u));
  }
  return sum / strata;
}

inline double pgfl_inverse_cdf(const BlcpModel& model, double r0, const RadialFunctional& f,
                               int strata = 256,
                               PalmWeighting weighting = PalmWeighting::kExact) {
  return expectation_over_d1_inverse_cdf(
      model, r0,
      [&](double s) { return conditional_pgfl(model, r0, PalmContext{s, r0}, f, weighting); },
      strata);
}

}  // namespace blcp
