#pragma once

// Wireless metrics for access points at the BLCP points and a receiver at
// (r0, 0) attached to the nearest one. Rayleigh fading, path loss r^-alpha,
// ALOHA interferers. SINR = xi0 d1^-alpha h1 / (1 + xi0 sum r^-alpha h), so
// xi0 is already normalized by the noise power.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "blcp/blcp_analytic.hpp"
#include "blcp/core.hpp"
#include "blcp/quadrature.hpp"

namespace blcp {

/// Noise-to-signal normalization used for the reference scenario. The link
/// constant of the SINR expression is its reciprocal.
inline constexpr double kReferenceNoiseToSignal = 2.9858e-8;

struct RadioParams {
  double alpha = 2.0;
  double xi0 = 1.0 / kReferenceNoiseToSignal;
  double gamma = 0.1;
  double p = 1.0;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::invalid_argument("RadioParams: alpha must be > 0");
    if (!(xi0 > 0.0)) throw std::invalid_argument("RadioParams: xi0 must be > 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("RadioParams: gamma must be > 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("RadioParams: p must be in [0, 1]");
  }
};

struct MomentOrder {
  std::complex<double> b;
};

struct MetaQuery {
  double gamma = 0.1;
  double beta = 0.5;
};

namespace detail {

// Line tails of 1 - (1 - p gamma s^alpha / (r^alpha + gamma s^alpha))^b for a
// set of orders b at nearest distance s.
struct MomentTail {
  RadioParams radio;
  std::vector<std::complex<double>> orders;
  QuadSpec spec;

  Lanes operator()(double s, double a, double lo) const {
    const std::size_t L = orders.size();
    Lanes out(L);
    const double p = radio.p;
    const double g = radio.gamma;
    if (p == 0.0) return out;
    std::vector<std::size_t> numeric;
    if (radio.alpha == 2.0) {
      const double c = g * s * s;
      for (std::size_t l = 0; l < L; ++l) {
        const auto b = orders[l];
        if (b == 0.0) continue;
        if (b == 1.0) {
          const double q = std::sqrt(a * a + c);
          out[l] = p * c / q * (lo > 0.0 ? std::atan(q / lo) : kPi / 2.0);
        } else if (b == -1.0 && (p < 1.0 || a > 0.0)) {
          const double q = std::sqrt(a * a + (1.0 - p) * c);
          out[l] = -p * c / q * (lo > 0.0 ? std::atan(q / lo) : kPi / 2.0);
        } else {
          numeric.push_back(l);
        }
      }
    } else {
      for (std::size_t l = 0; l < L; ++l)
        if (orders[l] != 0.0) numeric.push_back(l);
    }
    if (numeric.empty()) return out;
    const double sa = std::pow(s, radio.alpha);
    auto integrand = [&](double y) {
      const double r = std::hypot(y, a);
      const double ra = std::pow(r, radio.alpha);
      const double x = p * g * sa / (ra + g * sa);
      const double lg = std::log1p(-x);
      Lanes v(numeric.size());
      for (std::size_t k = 0; k < numeric.size(); ++k) {
        const auto z = orders[numeric[k]] * lg;
        // 1 - e^z, accurate for small z
        v[k] = -(std::abs(z) < 1e-5 ? z + 0.5 * z * z : std::exp(z) - 1.0);
      }
      return v;
    };
    QuadSpec ts = spec;
    ts.transform = Transform::kSemiInfinite;
    ts.scale = std::max({std::hypot(a, lo), s * std::pow(g, 1.0 / radio.alpha), 1e-9});
    auto res = integrate_semi_infinite(integrand, lo, ts);
    if (!res.converged)
      throw NumericalError("moment tail did not converge at s = " + std::to_string(s) +
                           ", a = " + std::to_string(a));
    for (std::size_t k = 0; k < numeric.size(); ++k) out[numeric[k]] = res.value[k];
    return out;
  }
};

inline Lanes noise_prefactor(const RadioParams& radio,
                             const std::vector<std::complex<double>>& orders, double s) {
  const double e = radio.gamma * std::pow(s, radio.alpha) / radio.xi0;
  Lanes out(orders.size());
  for (std::size_t l = 0; l < orders.size(); ++l) out[l] = std::exp(-orders[l] * e);
  return out;
}

}  // namespace detail

/// Unconditional moments E[P_s^b] for several orders sharing one quadrature.
inline palm::D1Average moment_lanes(const BlcpModel& model, const RadioParams& radio, double r0,
                                    const std::vector<std::complex<double>>& orders,
                                    PalmWeighting weighting = PalmWeighting::kExact,
                                    const PalmSpec& spec = PalmSpec::nested(),
                                    double divergence_threshold = 1e12) {
  model.validate();
  radio.validate();
  detail::MomentTail tail{radio, orders, spec.tail};
  auto pre = [&](double s) { return detail::noise_prefactor(radio, orders, s); };
  return palm::average_over_d1(model, r0, tail, orders.size(), pre, weighting, spec,
                               divergence_threshold);
}

/// M_b(d1): b-th moment of the conditional success probability given d1.
inline std::complex<double> conditional_success_moment(
    const BlcpModel& model, const RadioParams& radio, double r0, double d1, MomentOrder order,
    PalmWeighting weighting = PalmWeighting::kExact, const PalmSpec& spec = PalmSpec{}) {
  model.validate();
  radio.validate();
  if (!(d1 > 0.0)) throw std::invalid_argument("conditional_success_moment: d1 must be > 0");
  if (order.b == 0.0) return 1.0;
  const std::vector<std::complex<double>> orders{order.b};
  detail::MomentTail tail{radio, orders, spec.tail};
  auto b = palm::band_integrals(model, r0, d1, tail, 1,
                                weighting == PalmWeighting::kUniformBand, spec);
  if (!b.converged) throw NumericalError("conditional_success_moment: quadrature did not converge");
  const auto g = palm::conditional_lanes(b, model.n_lines(), weighting)[0];
  const auto m = detail::noise_prefactor(radio, orders, d1)[0] * g;
  if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
    throw NumericalError("conditional_success_moment: diverges at d1 = " + std::to_string(d1));
  return m;
}

inline std::complex<double> moment(const BlcpModel& model, const RadioParams& radio, double r0,
                                   MomentOrder order,
                                   PalmWeighting weighting = PalmWeighting::kExact,
                                   const PalmSpec& spec = PalmSpec::nested()) {
  if (order.b == 0.0) return 1.0;
  auto res = moment_lanes(model, radio, r0, {order.b}, weighting, spec);
  if (res.divergent) throw NumericalError("moment: the d1 average diverges");
  if (!res.converged) throw NumericalError("moment: quadrature did not converge");
  return res.value[0];
}

/// Success probability with every interferer active (p is ignored).
inline double success_probability(const BlcpModel& model, const RadioParams& radio, double r0,
                                  PalmWeighting weighting = PalmWeighting::kExact,
                                  const PalmSpec& spec = PalmSpec{}) {
  RadioParams r = radio;
  r.p = 1.0;
  auto res = moment_lanes(model, r, r0, {1.0}, weighting, spec);
  if (!res.converged) throw NumericalError("success_probability: quadrature did not converge");
  return std::clamp(res.value[0].real(), 0.0, 1.0);
}

/// Conditional SIR PGFL for alpha = 2 and a single line, with the line
/// integral in arctan form and the band integral taken over (theta, r).
inline double pgfl_closed_form_alpha2_nb1(const BlcpModel& model, const RadioParams& radio,
                                          double r0, double d1,
                                          PalmWeighting weighting = PalmWeighting::kExact,
                                          const QuadSpec& spec = QuadSpec{}.with_tol(1e-10, 1e-14)) {
  model.validate();
  radio.validate();
  if (radio.alpha != 2.0) throw std::invalid_argument("pgfl_closed_form_alpha2_nb1: alpha must be 2");
  if (model.n_lines() != 1)
    throw std::invalid_argument("pgfl_closed_form_alpha2_nb1: n_B must be 1");
  if (!(d1 > 0.0)) throw std::invalid_argument("pgfl_closed_form_alpha2_nb1: d1 must be > 0");
  const double R = model.radius();
  const double lam = model.lambda;
  const double c = radio.gamma * d1 * d1;
  // Inner variable: l = r0 cos(theta) - r = d1 sin(phi), so h = d1 cos(phi).
  auto band = [&](double theta) {
    const double ct = r0 * std::cos(theta);
    const double lo = std::max(-1.0, (ct - R) / d1);
    const double hi = std::min(1.0, (ct + R) / d1);
    BandSlice sl;
    if (hi > lo) sl.add(std::asin(lo), std::asin(hi));
    return sl;
  };
  auto term = [&](double, double phi) {
    const double l = d1 * std::sin(phi);
    const double h = d1 * std::cos(phi);
    const double q = std::sqrt(c + l * l);
    const double e = std::exp(-2.0 * lam * c / q * std::atan(q / h));
    const double weight = weighting == PalmWeighting::kExact ? std::exp(-2.0 * lam * h) * h : h;
    return e * weight;
  };
  auto norm = [&](double, double phi) {
    const double h = d1 * std::cos(phi);
    return weighting == PalmWeighting::kExact ? std::exp(-2.0 * lam * h) * h : h;
  };
  // For the exact weighting the serving-line density carries d1 / h, which
  // cancels the Jacobian h: both integrands lose the factor h.
  auto term_exact = [&](double th, double phi) {
    const double h = d1 * std::cos(phi);
    return h > 0.0 ? term(th, phi) / h : 0.0;
  };
  auto norm_exact = [&](double th, double phi) {
    const double h = d1 * std::cos(phi);
    return h > 0.0 ? norm(th, phi) / h : 0.0;
  };
  const auto breaks = domain_band_breaks(r0, d1, R);
  double num = 0.0;
  double den = 0.0;
  if (weighting == PalmWeighting::kExact) {
    auto a = integrate_2d_band(term_exact, band, 0.0, kPi, spec, breaks);
    auto b = integrate_2d_band(norm_exact, band, 0.0, kPi, spec, breaks);
    if (!a.converged || !b.converged)
      throw NumericalError("pgfl_closed_form_alpha2_nb1: quadrature did not converge");
    num = a.value;
    den = b.value;
  } else {
    auto a = integrate_2d_band(term, band, 0.0, kPi, spec, breaks);
    auto b = integrate_2d_band(norm, band, 0.0, kPi, spec, breaks);
    if (!a.converged || !b.converged)
      throw NumericalError("pgfl_closed_form_alpha2_nb1: quadrature did not converge");
    num = a.value;
    den = b.value;
  }
  if (!(den > 0.0)) throw std::invalid_argument("pgfl_closed_form_alpha2_nb1: d1 outside support");
  return num / den;
}

/// Conditional SIR PGFL by the general route (numeric or closed line tails).
inline double conditional_sir_pgfl(const BlcpModel& model, const RadioParams& radio, double r0,
                                   double d1, PalmWeighting weighting = PalmWeighting::kExact,
                                   const PalmSpec& spec = PalmSpec{}) {
  return conditional_pgfl(model, r0, PalmContext{d1, r0},
                          RadialFunctional::sir(radio.gamma, radio.alpha, d1), weighting, spec);
}

/// P(C > b / T) for bandwidth W, file size b and deadline T.
inline double rate_ccdf(const BlcpModel& model, const RadioParams& radio, double r0,
                        double bandwidth, double filesize, double deadline,
                        PalmWeighting weighting = PalmWeighting::kExact) {
  if (!(bandwidth > 0.0) || !(filesize > 0.0) || !(deadline > 0.0))
    throw std::invalid_argument("rate_ccdf: W, b, T must be > 0");
  RadioParams r = radio;
  r.gamma = std::exp2(filesize / (deadline * bandwidth)) - 1.0;
  return success_probability(model, r, r0, weighting);
}

// ---------------------------------------------------------------------------
// Meta distribution (Gil-Pelaez)

struct MetaCurve {
  std::vector<double> beta;
  std::vector<double> ccdf;
  double u_max = 0.0;          // truncation point of the u integral
  double last_octave = 0.0;    // largest change over the final octave
  double kappa = 0.0;          // rate of the subtracted reference law (0: none)
  bool converged = true;
  std::size_t nodes = 0;
};

struct MetaOptions {
  double octave_tol = 1e-4;
  double u_limit = 4096.0;
  // Periods of exp(-j u log beta) covered by one 16-point Gauss panel.
  double panel_periods = 4.0;
  // Subtract the law of -Exp(kappa), whose density jump at 0 matches that of
  // log P_s; its CCDF 1 - beta^kappa is added back exactly. kappa is
  // re-estimated from the highest octave as ju M / (1 - M).
  bool reference_subtraction = true;
  PalmSpec spec = meta_spec();
  PalmWeighting weighting = PalmWeighting::kExact;

  static PalmSpec meta_spec() {
    PalmSpec s;
    s.outer = QuadSpec{}.with_tol(1e-5, 1e-11);
    s.band = QuadSpec{}.with_tol(1e-6, 1e-11);
    s.tail = QuadSpec{}.with_tol(1e-7, 1e-12);
    return s;
  }
};

/// CCDF P(P_s > beta) for a set of beta values, sharing M_{ju} across beta.
inline MetaCurve meta_distribution_curve(const BlcpModel& model, const RadioParams& radio,
                                         double r0, const std::vector<double>& betas,
                                         const MetaOptions& opt = MetaOptions{}) {
  model.validate();
  radio.validate();
  for (double b : betas)
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("meta_distribution: beta in (0, 1)");
  MetaCurve out;
  out.beta = betas;
  double omega = 4.0;
  for (double b : betas) omega = std::max(omega, std::abs(std::log(b)) + 4.0);

  using GL = boost::math::quadrature::gauss<double, 16>;
  auto panel_nodes = [&](double a, double b, std::vector<double>& u, std::vector<double>& wts) {
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) * omega /
                                                          (2.0 * kPi * opt.panel_periods))));
    const double h = (b - a) / m;
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    for (int k = 0; k < m; ++k) {
      const double c = a + (k + 0.5) * h;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double xs[2] = {x[i], -x[i]};
        const int count = x[i] == 0.0 ? 1 : 2;
        for (int j = 0; j < count; ++j) {
          u.push_back(c + 0.5 * h * xs[j]);
          wts.push_back(0.5 * h * w[i]);
        }
      }
    }
  };

  std::vector<double> nodes_u;
  std::vector<double> nodes_w;
  std::vector<std::complex<double>> nodes_m;
  auto evaluate = [&](double kappa, std::vector<double>& ccdf) {
    for (std::size_t k = 0; k < betas.size(); ++k) {
      const double lb = std::log(betas[k]);
      double sum = 0.0;
      for (std::size_t i = 0; i < nodes_u.size(); ++i) {
        const std::complex<double> ju(0.0, nodes_u[i]);
        const auto ref = kappa > 0.0 ? kappa / (kappa + ju) : std::complex<double>(0.0);
        const auto z = std::exp(-ju * lb) * (nodes_m[i] - ref);
        sum += nodes_w[i] * z.imag() / nodes_u[i];
      }
      const double base = kappa > 0.0 ? 1.0 - std::pow(betas[k], kappa) : 0.5;
      ccdf[k] = base + sum / kPi;
    }
  };

  std::vector<double> prev(betas.size(), 0.0);
  std::vector<double> cur(betas.size(), 0.0);
  double a = 0.0;
  double b = 1.0;
  while (true) {
    std::vector<double> u;
    std::vector<double> wts;
    panel_nodes(a, b, u, wts);
    std::vector<std::complex<double>> orders;
    orders.reserve(u.size());
    for (double x : u) orders.emplace_back(0.0, x);
    auto m = moment_lanes(model, radio, r0, orders, opt.weighting, opt.spec);
    if (m.divergent) throw NumericalError("meta_distribution: moment average diverged");
    out.converged = out.converged && m.converged;
    out.nodes += u.size();
    double ksum = 0.0;
    double wsum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      nodes_u.push_back(u[i]);
      nodes_w.push_back(wts[i]);
      nodes_m.push_back(m.value[i]);
      const std::complex<double> ju(0.0, u[i]);
      const double k = (ju * m.value[i] / (1.0 - m.value[i])).real();
      if (std::isfinite(k)) {
        ksum += wts[i] * k;
        wsum += wts[i];
      }
    }
    if (opt.reference_subtraction && wsum > 0.0) out.kappa = std::clamp(ksum / wsum, 1e-3, 1e3);
    evaluate(out.kappa, cur);
    double change = 0.0;
    for (std::size_t k = 0; k < betas.size(); ++k) change = std::max(change, std::abs(cur[k] - prev[k]));
    prev = cur;
    out.u_max = b;
    out.last_octave = change;
    if (b >= 8.0 && change < opt.octave_tol) break;
    if (b >= opt.u_limit) {
      out.converged = false;
      break;
    }
    a = b;
    b *= 2.0;
  }
  out.ccdf.resize(betas.size());
  for (std::size_t k = 0; k < betas.size(); ++k) out.ccdf[k] = std::clamp(cur[k], 0.0, 1.0);
  return out;
}

inline double meta_distribution(const BlcpModel& model, const RadioParams& radio, double r0,
                                const MetaQuery& query, const MetaOptions& opt = MetaOptions{}) {
  RadioParams r = radio;
  r.gamma = query.gamma;
  auto c = meta_distribution_curve(model, r, r0, {query.beta}, opt);
  if (!c.converged)
    throw NumericalError("meta_distribution: u integral not converged (u_max = " +
                         std::to_string(c.u_max) + ", last octave = " +
                         std::to_string(c.last_octave) + ")");
  return c.ccdf[0];
}

// ---------------------------------------------------------------------------
// Delay, throughput, access probability

struct DelayResult {
  double value = std::numeric_limits<double>::infinity();
  bool divergent = false;
  double threshold = 1e12;
  double divergence_at = 0.0;  // d1 where the integrand crossed the threshold
};

/// Mean number of slots until success, M_{-1} / p, or DIVERGENT.
inline DelayResult mean_local_delay(const BlcpModel& model, const RadioParams& radio, double r0,
                                    PalmWeighting weighting = PalmWeighting::kExact,
                                    const PalmSpec& spec = PalmSpec::nested(),
                                    double threshold = 1e12) {
  radio.validate();
  if (!(radio.p > 0.0)) throw std::invalid_argument("mean_local_delay: p must be > 0");
  DelayResult out;
  out.threshold = threshold;
  auto m = moment_lanes(model, radio, r0, {-1.0}, weighting, spec, threshold);
  if (m.divergent) {
    out.divergent = true;
    out.divergence_at = m.divergence_at;
    return out;
  }
  if (!m.converged) throw NumericalError("mean_local_delay: quadrature did not converge");
  out.value = m.value[0].real() / radio.p;
  return out;
}

inline double successful_transmission_density(const BlcpModel& model, const RadioParams& radio,
                                              double r0,
                                              PalmWeighting weighting = PalmWeighting::kExact) {
  radio.validate();
  if (radio.p == 0.0) return 0.0;
  const double m1 = moment(model, radio, r0, {1.0}, weighting).real();
  return radio.p * model.lambda * std::max(0.0, m1);
}

struct TransmitOptimum {
  double p_star = 1.0;
  double delay = 0.0;
  double grid_p = 1.0;      // best grid point
  double grid_delay = 0.0;
  std::vector<double> grid;
  std::vector<DelayResult> grid_values;
};

/// argmin_p D(p): 16-point grid on (0, 1], then golden-section refinement.
inline TransmitOptimum optimal_transmit_probability(const BlcpModel& model,
                                                    const RadioParams& radio, double r0,
                                                    PalmWeighting weighting = PalmWeighting::kExact,
                                                    double tol = 1e-3) {
  TransmitOptimum out;
  auto delay_at = [&](double p) {
    RadioParams r = radio;
    r.p = p;
    return mean_local_delay(model, r, r0, weighting);
  };
  constexpr int kGrid = 16;
  int best = -1;
  for (int k = 1; k <= kGrid; ++k) {
    const double p = static_cast<double>(k) / kGrid;
    out.grid.push_back(p);
    out.grid_values.push_back(delay_at(p));
    const auto& d = out.grid_values.back();
    if (!d.divergent && (best < 0 || d.value < out.grid_values[static_cast<std::size_t>(best)].value))
      best = k - 1;
  }
  if (best < 0) throw NumericalError("optimal_transmit_probability: delay diverges for every p");
  out.grid_p = out.grid[static_cast<std::size_t>(best)];
  out.grid_delay = out.grid_values[static_cast<std::size_t>(best)].value;
  double lo = best > 0 ? out.grid[static_cast<std::size_t>(best - 1)] : 1e-3;
  double hi = best + 1 < kGrid ? out.grid[static_cast<std::size_t>(best + 1)] : 1.0;
  auto value = [&](double p) {
    const auto d = delay_at(p);
    return d.divergent ? std::numeric_limits<double>::infinity() : d.value;
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = value(x1);
  double f2 = value(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = value(x2);
    }
  }
  const double p_mid = 0.5 * (lo + hi);
  const double f_mid = value(p_mid);
  out.p_star = p_mid;
  out.delay = f_mid;
  if (out.grid_delay < f_mid) {
    out.p_star = out.grid_p;
    out.delay = out.grid_delay;
  }
  return out;
}

}  // namespace blcp
