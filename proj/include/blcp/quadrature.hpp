#pragma once

// Adaptive Gauss-Kronrod integration (G7/K15, global bisection), semi-infinite
// and oscillatory-tail transforms, iterated band integrals, and numeric
// differentiation. Integrands may return double, std::complex<double>, or
// Lanes (a complex vector); vector-valued integrands share one subdivision tree.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blcp/core.hpp"

namespace blcp {

/// Fixed-length complex vector with elementwise arithmetic.
class Lanes {
 public:
  using value_type = std::complex<double>;

  Lanes() = default;
  explicit Lanes(std::size_t n, value_type fill = {}) : v_(n, fill) {}
  Lanes(std::initializer_list<value_type> init) : v_(init) {}

  std::size_t size() const { return v_.size(); }
  value_type& operator[](std::size_t i) { return v_[i]; }
  const value_type& operator[](std::size_t i) const { return v_[i]; }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  Lanes& operator+=(const Lanes& o) {
    if (v_.empty()) {
      v_ = o.v_;
      return *this;
    }
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Lanes& operator-=(const Lanes& o) {
    if (v_.empty()) v_.assign(o.size(), {});
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Lanes& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }
  Lanes& operator*=(const Lanes& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] *= o.v_[i];
    return *this;
  }
  Lanes& operator/=(const Lanes& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] /= o.v_[i];
    return *this;
  }

  friend Lanes operator+(Lanes a, const Lanes& b) { return a += b; }
  friend Lanes operator-(Lanes a, const Lanes& b) { return a -= b; }
  friend Lanes operator*(double s, Lanes a) { return a *= s; }
  friend Lanes operator*(Lanes a, double s) { return a *= s; }
  friend Lanes operator*(Lanes a, const Lanes& b) { return a *= b; }
  friend Lanes operator/(Lanes a, const Lanes& b) { return a /= b; }

 private:
  std::vector<value_type> v_;
};

inline double quad_norm(double x) { return std::abs(x); }
inline double quad_norm(const std::complex<double>& x) { return std::abs(x); }
inline double quad_norm(const Lanes& x) {
  double m = 0.0;
  for (const auto& v : x) m = std::max(m, std::abs(v));
  return m;
}

enum class Transform { kNone, kSemiInfinite, kOscillatoryTail };

struct QuadSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_depth = 48;
  std::size_t max_evaluations = 4'000'000;
  Transform transform = Transform::kNone;
  /// Length scale of the semi-infinite map y = a + scale * u / (1 - u).
  double scale = 1.0;
  /// Panel width for the oscillatory tail.
  double period = kPi;
  int max_panels = 2000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("QuadSpec: tolerances must be positive");
    if (max_depth < 1 || max_depth > 200)
      throw std::invalid_argument("QuadSpec: max_depth out of range");
  }

  QuadSpec with_tol(double rel, double abs) const {
    QuadSpec s = *this;
    s.rel_tol = rel;
    s.abs_tol = abs;
    return s;
  }
  QuadSpec with_transform(Transform t, double scale_or_period = 1.0) const {
    QuadSpec s = *this;
    s.transform = t;
    if (t == Transform::kSemiInfinite) s.scale = scale_or_period;
    if (t == Transform::kOscillatoryTail) s.period = scale_or_period;
    return s;
  }
};

/// Geometry evaluators (single and double integrals).
inline QuadSpec geometry_spec() { return QuadSpec{}; }
/// Triple-nested network metrics.
inline QuadSpec nested_spec() { return QuadSpec{}.with_tol(1e-5, 1e-9); }

template <class V>
struct QuadResult {
  V value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
  double a;
  double b;
  V value;
  double error;
  int depth;
};

template <class V, class F>
Segment<V> gk15(F& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V fc = f(c);
  V kron = kWgk[7] * fc;
  V gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    V f1 = f(c - dx);
    V f2 = f(c + dx);
    V sum = f1 + f2;
    kron += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  V value = h * kron;
  V g = h * gauss;
  const double err = quad_norm(value - g);
  return {a, b, std::move(value), err, depth};
}

template <class V>
bool err_less(const Segment<V>& x, const Segment<V>& y) {
  return x.error < y.error;
}

}  // namespace detail

/// Adaptive integration over [a, b] (finite). Breakpoints inside (a, b) seed
/// the subdivision so kinks at known locations are resolved immediately.
template <class F>
auto integrate_finite(F&& f, double a, double b, const QuadSpec& spec,
                      std::span<const double> breakpoints = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using V = std::decay_t<decltype(f(a))>;
  spec.validate();
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("integrate: need finite a <= b");
  QuadResult<V> out;
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<detail::Segment<V>> heap;
  std::vector<detail::Segment<V>> retired;
  std::size_t evals = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) {
      heap.push_back(detail::gk15<V>(f, cuts[i], cuts[i + 1], 0));
      evals += 15;
    }
  }
  if (heap.empty()) {
    // Degenerate interval: value of the right type times zero width.
    out.value = 0.0 * f(a);
    out.evaluations = 1;
    return out;
  }
  std::make_heap(heap.begin(), heap.end(), detail::err_less<V>);

  auto totals = [&](V& value, double& err) {
    bool first = true;
    err = 0.0;
    for (const auto* list : {&heap, &retired})
      for (const auto& s : *list) {
        if (first) {
          value = s.value;
          first = false;
        } else {
          value += s.value;
        }
        err += s.error;
      }
  };

  V total;
  double err = 0.0;
  totals(total, err);
  int since_recompute = 0;
  while (!heap.empty()) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * quad_norm(total));
    if (err <= tol) break;
    if (evals >= spec.max_evaluations) break;
    std::pop_heap(heap.begin(), heap.end(), detail::err_less<V>);
    detail::Segment<V> worst = std::move(heap.back());
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= spec.max_depth || !(mid > worst.a && mid < worst.b)) {
      retired.push_back(std::move(worst));
      continue;
    }
    auto left = detail::gk15<V>(f, worst.a, mid, worst.depth + 1);
    auto right = detail::gk15<V>(f, mid, worst.b, worst.depth + 1);
    evals += 30;
    total -= worst.value;
    total += left.value;
    total += right.value;
    err += left.error + right.error - worst.error;
    heap.push_back(std::move(left));
    std::push_heap(heap.begin(), heap.end(), detail::err_less<V>);
    heap.push_back(std::move(right));
    std::push_heap(heap.begin(), heap.end(), detail::err_less<V>);
    if (++since_recompute == 64) {
      totals(total, err);
      since_recompute = 0;
    }
  }
  totals(total, err);
  out.value = std::move(total);
  out.error_estimate = err;
  out.evaluations = evals;
  out.converged = err <= std::max(spec.abs_tol, spec.rel_tol * quad_norm(out.value));
  return out;
}

/// Integral over [a, inf) through y = a + scale * u / (1 - u).
template <class F>
auto integrate_semi_infinite(F&& f, double a, const QuadSpec& spec)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  const double scale = spec.scale > 0.0 ? spec.scale : 1.0;
  auto g = [&](double u) {
    const double one_minus = 1.0 - u;
    const double y = a + scale * u / one_minus;
    return (scale / (one_minus * one_minus)) * f(y);
  };
  return integrate_finite(g, 0.0, 1.0, spec);
}

namespace detail {

// Wynn epsilon extrapolation of a partial-sum sequence (scalar types).
template <class T>
T wynn_epsilon(const std::vector<T>& s) {
  const std::size_t n = s.size();
  if (n < 3) return s.back();
  std::vector<T> prev(n + 1, T{});  // column k-1
  std::vector<T> cur(s.begin(), s.end());  // column k
  T best = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<T> next(n - k);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const T diff = cur[i + 1] - cur[i];
      if (std::abs(diff) == 0.0) return best;
      next[i] = prev[i + 1] + T(1.0) / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0 && !cur.empty()) best = cur.back();
  }
  return best;
}

}  // namespace detail

/// Integral over [a, inf) of an oscillatory integrand: panels of width
/// spec.period are summed and the partial sums extrapolated (Wynn epsilon).
template <class F>
auto integrate_oscillatory_tail(F&& f, double a, const QuadSpec& spec)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using V = std::decay_t<decltype(f(a))>;
  QuadResult<V> out;
  std::vector<V> partial;
  V running{};
  V last_extrap{};
  int stable = 0;
  QuadSpec panel_spec = spec;
  panel_spec.transform = Transform::kNone;
  panel_spec.abs_tol = spec.abs_tol * 1e-2;
  for (int k = 0; k < spec.max_panels; ++k) {
    const double lo = a + k * spec.period;
    auto r = integrate_finite(f, lo, lo + spec.period, panel_spec);
    out.evaluations += r.evaluations;
    out.error_estimate += r.error_estimate;
    out.converged = out.converged && r.converged;
    running += r.value;
    partial.push_back(running);
    if (partial.size() > 60) partial.erase(partial.begin());
    const V extrap = detail::wynn_epsilon(partial);
    const double change = std::abs(extrap - last_extrap);
    last_extrap = extrap;
    if (k >= 4 && change <= std::max(spec.abs_tol, spec.rel_tol * std::abs(extrap))) {
      if (++stable >= 3) {
        out.value = extrap;
        out.error_estimate += change;
        return out;
      }
    } else {
      stable = 0;
    }
  }
  out.value = last_extrap;
  out.converged = false;
  return out;
}

/// Dispatches on spec.transform. For kNone, b must be finite; for the two
/// semi-infinite transforms b is ignored (the range is [a, inf)).
template <class F>
auto integrate_1d(F&& f, double a, double b, const QuadSpec& spec)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  switch (spec.transform) {
    case Transform::kSemiInfinite:
      return integrate_semi_infinite(f, a, spec);
    case Transform::kOscillatoryTail:
      return integrate_oscillatory_tail(f, a, spec);
    case Transform::kNone:
      break;
  }
  if (std::isinf(b)) return integrate_semi_infinite(f, a, spec);
  return integrate_finite(f, a, b, spec);
}

struct RInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi > lo ? hi - lo : 0.0; }
};

/// The r-section of a band at one theta: at most two disjoint intervals.
struct BandSlice {
  std::array<RInterval, 2> parts{};
  int count = 0;

  void add(double lo, double hi) {
    if (hi > lo && count < 2) parts[static_cast<std::size_t>(count++)] = {lo, hi};
  }
  double width() const {
    double w = 0.0;
    for (int i = 0; i < count; ++i) w += parts[static_cast<std::size_t>(i)].width();
    return w;
  }
};

/// Iterated integration: outer theta over [theta_lo, theta_hi], inner r over
/// band(theta). The inner tolerance is tightened so the outer error dominates.
template <class F, class Band>
QuadResult<double> integrate_2d_band(F&& f, Band&& band, double theta_lo, double theta_hi,
                                     const QuadSpec& spec,
                                     std::span<const double> theta_breaks = {}) {
  QuadSpec inner = spec;
  inner.transform = Transform::kNone;
  inner.rel_tol = spec.rel_tol * 0.1;
  inner.abs_tol = spec.abs_tol * 0.1 / std::max(1.0, theta_hi - theta_lo);
  std::size_t inner_evals = 0;
  bool inner_ok = true;
  auto outer = [&](double theta) {
    const BandSlice slice = band(theta);
    double sum = 0.0;
    for (int i = 0; i < slice.count; ++i) {
      const auto& part = slice.parts[static_cast<std::size_t>(i)];
      auto g = [&](double r) { return f(theta, r); };
      auto res = integrate_finite(g, part.lo, part.hi, inner);
      inner_evals += res.evaluations;
      inner_ok = inner_ok && res.converged;
      sum += res.value;
    }
    return sum;
  };
  QuadSpec outer_spec = spec;
  outer_spec.transform = Transform::kNone;
  auto res = integrate_finite(outer, theta_lo, theta_hi, outer_spec, theta_breaks);
  res.evaluations += inner_evals;
  res.converged = res.converged && inner_ok;
  return res;
}

enum class DiffScheme { kCentral, kRichardson };

struct DiffResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Numeric derivative. Default step h = max(1e-4, 1e-3 |x|). kRichardson runs
/// Ridders' extrapolation over a shrinking step tableau.
template <class F>
DiffResult differentiate(F&& f, double x, DiffScheme scheme, double h = 0.0) {
  if (h <= 0.0) h = std::max(1e-4, 1e-3 * std::abs(x));
  if (!(x + h > x) || !(x - h < x))
    throw NumericalError("differentiate: step underflow at x = " + std::to_string(x));
  if (scheme == DiffScheme::kCentral) {
    const double d = (f(x + h) - f(x - h)) / (2.0 * h);
    return {d, std::abs(d) * 1e-8};
  }
  constexpr int kTab = 10;
  constexpr double kCon = 1.4;
  constexpr double kCon2 = kCon * kCon;
  std::array<std::array<double, kTab>, kTab> a{};
  double hh = h;
  a[0][0] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
  DiffResult best{a[0][0], std::numeric_limits<double>::max()};
  for (int i = 1; i < kTab; ++i) {
    hh /= kCon;
    if (!(x + hh > x)) break;
    a[0][static_cast<std::size_t>(i)] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      a[uj][ui] = (a[uj - 1][ui] * fac - a[uj - 1][ui - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double errt = std::max(std::abs(a[uj][ui] - a[uj - 1][ui]),
                                   std::abs(a[uj][ui] - a[uj - 1][ui - 1]));
      if (errt <= best.error_estimate) {
        best = {a[uj][ui], errt};
      }
    }
    const auto ui = static_cast<std::size_t>(i);
    if (std::abs(a[ui][ui] - a[ui - 1][ui - 1]) >= 2.0 * best.error_estimate) break;
  }
  return best;
}

}  // namespace blcp
