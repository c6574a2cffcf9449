#pragma once

// Analytic-vs-Monte-Carlo validation suite shared by `blcp validate` and the
// acceptance binary. Each check belongs to one acceptance criterion (1-10);
// kQuick uses fewer points and trials, chosen so the statistical noise stays
// well inside the same tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <json.hpp>

#include "blcp/blcp_analytic.hpp"
#include "blcp/blp_analytic.hpp"
#include "blcp/montecarlo.hpp"
#include "blcp/network_metrics.hpp"

namespace blcp {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "blcp.validation_report/1";

enum class SuiteMode { kQuick, kFull };

struct CheckResult {
  int criterion = 0;
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool informational = false;  // reported, never fails the suite
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  SuiteMode mode = SuiteMode::kQuick;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Name of a check whose analytic constant is scaled by 1.1.
  std::string inject_fault;
  /// When non-empty, only these checks run.
  std::set<std::string> only;
  /// Called after every check (progress output).
  std::function<void(const CheckResult&)> on_check;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  SuiteMode mode = SuiteMode::kQuick;
  std::uint64_t seed = 0;
  double seconds = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed || c.informational; });
  }

  std::vector<const CheckResult*> failures() const {
    std::vector<const CheckResult*> out;
    for (const auto& c : checks)
      if (!c.passed && !c.informational) out.push_back(&c);
    return out;
  }

  bool criterion_passed(int k) const {
    bool any = false;
    for (const auto& c : checks)
      if (c.criterion == k && !c.informational) {
        any = true;
        if (!c.passed) return false;
      }
    return any;
  }

  nlohmann::ordered_json to_json() const {
    auto num = [](double v) -> nlohmann::ordered_json {
      if (std::isfinite(v)) return v;
      return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    };
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["mode"] = mode == SuiteMode::kQuick ? "quick" : "full";
    j["seed"] = seed;
    j["passed"] = passed();
    j["seconds"] = seconds;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
      arr.push_back({{"criterion", c.criterion},
                     {"name", c.name},
                     {"passed", c.passed},
                     {"informational", c.informational},
                     {"observed", num(c.observed)},
                     {"expected", num(c.expected)},
                     {"tolerance", num(c.tolerance)},
                     {"detail", c.detail},
                     {"seconds", c.seconds}});
    j["checks"] = arr;
    auto failed = nlohmann::ordered_json::array();
    for (const auto* c : failures()) failed.push_back(c->name);
    j["failed"] = failed;
    return j;
  }

  std::string summary() const {
    std::ostringstream s;
    for (const auto& c : checks) {
      s << (c.informational ? "INFO" : (c.passed ? "ok  " : "FAIL")) << "  [" << c.criterion
        << "] " << c.name << ": observed " << c.observed << ", expected " << c.expected
        << ", tolerance " << c.tolerance;
      if (!c.detail.empty()) s << " (" << c.detail << ")";
      s << "\n";
    }
    s << (passed() ? "all checks passed" : std::to_string(failures().size()) + " check(s) failed")
      << " in " << seconds << " s\n";
    return s.str();
  }
};

namespace detail {

// CDF tabulated on a grid and linearly interpolated; exact outside it.
struct GridCdf {
  std::vector<double> t;
  std::vector<double> f;
  std::function<double(double)> exact;

  double operator()(double x) const {
    if (x <= t.front() || x >= t.back()) return exact(x);
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return f[i - 1] + w * (f[i] - f[i - 1]);
  }
};

inline GridCdf tabulate_cdf(std::function<double(double)> exact, double hi, std::size_t n) {
  GridCdf g;
  g.exact = exact;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = hi * static_cast<double>(i) / static_cast<double>(n);
    g.t.push_back(x);
    g.f.push_back(exact(x));
  }
  return g;
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

inline bool unimodal(const std::vector<double>& v, double slack, std::size_t* peak) {
  const auto it = std::max_element(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(it - v.begin());
  if (peak) *peak = k;
  for (std::size_t i = 1; i <= k; ++i)
    if (v[i] < v[i - 1] - slack) return false;
  for (std::size_t i = k + 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + slack) return false;
  return true;
}

}  // namespace detail

class ValidationSuite {
 public:
  explicit ValidationSuite(ValidationOptions opt) : opt_(std::move(opt)) {}

  ValidationReport run() {
    const auto t0 = std::chrono::steady_clock::now();
    report_.mode = opt_.mode;
    report_.seed = opt_.seed;
    band_area();
    plp_constant();
    void_probabilities();
    densities();
    nearest_intersection();
    pgfl_checks();
    success_probability_checks();
    meta_checks();
    delay_checks();
    reproducibility();
    report_.seconds = seconds_since(t0);
    return report_;
  }

 private:
  using Clock = std::chrono::steady_clock;

  static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  bool full() const { return opt_.mode == SuiteMode::kFull; }
  std::size_t pick(std::size_t quick, std::size_t full_count) const {
    return full() ? full_count : quick;
  }

  bool wanted(const std::string& name) const { return opt_.only.empty() || opt_.only.count(name); }
  double fault(const std::string& name) const { return opt_.inject_fault == name ? 1.1 : 1.0; }

  McConfig mc(std::size_t trials, std::uint64_t salt) const {
    McConfig c;
    c.trials = trials;
    c.master_seed = mix64(opt_.seed ^ mix64(salt));
    c.workers = opt_.workers;
    return c;
  }

  void add(CheckResult r, Clock::time_point t0) {
    r.seconds = seconds_since(t0);
    if (opt_.on_check) opt_.on_check(r);
    report_.checks.push_back(std::move(r));
  }

  // |observed - expected| <= tolerance
  void add_abs(int crit, const std::string& name, double observed, double expected, double tol,
               std::string detail, Clock::time_point t0) {
    CheckResult r{crit, name, observed, expected, tol, std::abs(observed - expected) <= tol, false,
                  std::move(detail)};
    add(std::move(r), t0);
  }

  // MC estimate within k standard errors of the analytic value.
  void add_se(int crit, const std::string& name, const Estimate& e, double expected, double k,
              Clock::time_point t0) {
    const double tol = k * e.std_error;
    const bool ok = std::abs(e.mean - expected) <= tol ||
                    (e.std_error == 0.0 && std::abs(e.mean - expected) <= 1e-12);
    CheckResult r{crit, name, e.mean, expected, tol, ok, false,
                  "SE " + detail::fmt(e.std_error) + ", z " + detail::fmt(e.z_score(expected)) +
                      ", trials " + std::to_string(e.trials)};
    add(std::move(r), t0);
  }

  void add_bool(int crit, const std::string& name, bool ok, std::string detail,
                Clock::time_point t0, double observed = 0.0, double expected = 0.0) {
    CheckResult r{crit, name, observed, expected, 0.0, ok, false, std::move(detail)};
    add(std::move(r), t0);
  }

  void add_info(int crit, const std::string& name, double observed, double expected,
                std::string detail, Clock::time_point t0) {
    CheckResult r{crit, name, observed, expected, 0.0, true, true, std::move(detail)};
    add(std::move(r), t0);
  }

  // ---- 1 -----------------------------------------------------------------
  void band_area() {
    const std::string name = "band_area_mc";
    if (!wanted(name)) return;
    const auto t0 = Clock::now();
    const std::size_t triples = pick(9, 50);
    const std::size_t samples = pick(2'000'000, 10'000'000);
    Rng rng(mix64(opt_.seed + 1));
    double worst = 0.0;
    std::string worst_at;
    int cases[3] = {0, 0, 0};
    double branch_gap = 0.0;
    for (std::size_t k = 0; k < triples; ++k) {
      const int kind = static_cast<int>(k % 3);
      const double R = uniform(rng, 5.0, 100.0);
      double r0 = 0.0;
      double t = 0.0;
      if (kind == 0) {  // r0 + t <= R
        r0 = uniform(rng, 0.0, 0.9 * R);
        t = uniform(rng, 0.05 * R, R - r0);
      } else if (kind == 1) {  // r0 + t > R, r0 - t <= R
        r0 = uniform(rng, 0.0, 2.0 * R);
        const double lo = std::max(R - r0, r0 - R);
        t = uniform(rng, std::max(lo, 0.05 * R) * 1.0001, std::max(lo, 0.05 * R) + R);
      } else {  // r0 - t > R
        r0 = uniform(rng, 1.3 * R, 4.0 * R);
        t = uniform(rng, 0.1 * (r0 - R), 0.98 * (r0 - R));
      }
      ++cases[kind];
      const double exact = fault(name) * domain_band_area(r0, t, R);
      const auto e = mc_domain_band_area(r0, t, R, samples, derive_seed(opt_.seed, k));
      const double rel = std::abs(e.mean - exact) / exact;
      if (rel > worst) {
        worst = rel;
        worst_at = "r0 " + detail::fmt(r0) + ", t " + detail::fmt(t) + ", R " + detail::fmt(R);
      }
      // Printed piecewise branches, where they are defined.
      try {
        const double br = domain_band_area_piecewise(r0, t, R);
        branch_gap = std::max(branch_gap, std::abs(br - exact / fault(name)) / exact);
      } catch (const std::domain_error&) {
      }
    }
    const double secs = seconds_since(t0);
    add_abs(1, name, worst, 0.0, 2e-3,
            "worst relative error over " + std::to_string(triples) + " triples (" +
                std::to_string(cases[0]) + "/" + std::to_string(cases[1]) + "/" +
                std::to_string(cases[2]) + " per case) at " + worst_at,
            t0);
    add_abs(1, "band_area_branch_forms", branch_gap, 0.0, 1e-9,
            "relative gap between the clipping form and the piecewise branches", Clock::now());
    add_bool(1, "band_area_runtime", secs < 60.0, detail::fmt(secs) + " s for the MC comparison",
             Clock::now(), secs, 60.0);
  }

  // ---- 2 -----------------------------------------------------------------
  void plp_constant() {
    if (wanted("band_area_plp_identity")) {
      const auto t0 = Clock::now();
      Rng rng(mix64(opt_.seed + 2));
      double worst = 0.0;
      for (int k = 0; k < 2000; ++k) {
        const double R = uniform(rng, 0.1, 1000.0);
        const double r0 = uniform(rng, 0.0, R);
        const double t = uniform(rng, 0.0, R - r0);
        const double a = domain_band_area(r0, t, R);
        const double expect = fault("band_area_plp_identity") * kTwoPi * t;
        worst = std::max(worst, std::abs(a - expect) / std::max(expect, 1e-300));
      }
      add_abs(2, "band_area_plp_identity", worst, 0.0, 1e-9,
              "max relative deviation from 2 pi t over 2000 triples with r0 + t <= R", t0);
    }
    if (wanted("plp_intersection_density")) {
      const auto t0 = Clock::now();
      const double lambda = 1.0;
      const auto e = mc_plp_intersection_density(lambda, 10.0, mc(pick(4000, 20000), 21));
      const double expect = fault("plp_intersection_density") * plp_intersection_density(lambda);
      add_abs(2, "plp_intersection_density", e.mean / expect - 1.0, 0.0, 0.02,
              "relative error; MC " + detail::fmt(e.mean) + " +- " + detail::fmt(e.std_error) +
                  " vs pi lambda^2 = " + detail::fmt(expect),
              t0);
    }
  }

  // ---- 3 -----------------------------------------------------------------
  struct VoidPoint {
    int n;
    double R;
    double lambda;
    double r0;
    double t;
  };

  void void_probabilities() {
    const std::vector<VoidPoint> pts = {
        {10, 100, 0.1, 0, 10},  {10, 50, 0.1, 0, 5},    {10, 50, 0.1, 25, 10},
        {10, 50, 0.1, 50, 10},  {10, 50, 0.1, 60, 20},  {10, 50, 0.1, 100, 60},
        {5, 50, 0.1, 0, 20},    {5, 50, 0.05, 75, 30},  {20, 30, 0.2, 10, 3},
        {1, 50, 0.1, 0, 25},    {3, 20, 1.0, 40, 25},   {10, 50, 0.1, 200, 160}};
    const std::size_t n_pts = full() ? pts.size() : 4;
    const std::size_t trials = pick(200'000, 1'000'000);
    for (const char* kind : {"void_blp", "void_blcp"}) {
      const std::string name = kind;
      if (!wanted(name)) continue;
      const auto t0 = Clock::now();
      double worst_z = 0.0;
      bool ok = true;
      std::string detail_s;
      for (std::size_t k = 0; k < n_pts; ++k) {
        // Quick mode uses the first point and three with r0 > R.
        const auto& p = full() ? pts[k] : pts[std::vector<std::size_t>{0, 4, 5, 10}[k]];
        const BlcpModel m{{p.n, p.R}, p.lambda};
        const bool blp = name == "void_blp";
        const double v = fault(name) * (blp ? void_prob_blp(m.blp, p.r0, p.t)
                                            : void_prob_blcp(m, p.r0, p.t));
        const auto cfg = mc(trials, 300 + k + (blp ? 0 : 100));
        const auto e = blp ? mc_void_blp(m.blp, p.r0, p.t, cfg) : mc_void_blcp(m, p.r0, p.t, cfg);
        // Binomial SE of the analytic value, so V = 0 or 1 are handled.
        const double se = std::sqrt(std::max(v * (1.0 - v), 0.0) / static_cast<double>(trials));
        const double diff = std::abs(e.mean - v);
        const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : 1e300);
        if (z > worst_z) {
          worst_z = z;
          detail_s = "n " + std::to_string(p.n) + ", R " + detail::fmt(p.R) + ", lambda " +
                     detail::fmt(p.lambda) + ", r0 " + detail::fmt(p.r0) + ", t " + detail::fmt(p.t) +
                     ": MC " + detail::fmt(e.mean) + " vs " + detail::fmt(v);
        }
        ok = ok && z <= 3.0;
      }
      CheckResult r{3, name, worst_z, 0.0, 3.0, ok, false,
                    "worst |z| over " + std::to_string(n_pts) + " points at " + detail_s};
      add(std::move(r), t0);
    }
    if (wanted("void_blcp_lambda_limit")) {
      const auto t0 = Clock::now();
      double worst = 0.0;
      for (const auto& p : pts) {
        const BlcpModel m{{p.n, p.R}, 1e-18};
        worst = std::max(worst, std::abs(fault("void_blcp_lambda_limit") - void_prob_blcp(m, p.r0, p.t)));
      }
      add_abs(3, "void_blcp_lambda_limit", worst, 0.0, 1e-12, "max |V - 1| at lambda = 1e-18 over the 12 points", t0);
    }
  }

  // ---- 4 -----------------------------------------------------------------
  void densities() {
    const BlpModel m{10, 50.0};
    const double w = 5.0;
    const std::size_t trials = pick(20'000, 100'000);
    for (RadialKind kind : {RadialKind::kLineLength, RadialKind::kIntersections}) {
      const bool len = kind == RadialKind::kLineLength;
      const std::string name = len ? "line_length_plateau" : "intersection_plateau";
      if (!wanted(name)) continue;
      const auto t0 = Clock::now();
      const auto table = mc_radial_histogram(kind, m, w, 2.0 * m.radius, mc(trials, len ? 41 : 42));
      const auto& inner = table.numbers("r_outer");
      const auto& dens = table.numbers("density");
      const auto& se = table.numbers("std_error");
      // Pooled over the annuli inside R (total / area of the R-disk).
      double total = 0.0;
      double area = 0.0;
      double worst_z = 0.0;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        const double r_out = inner[i];
        const AnnulusSpec a{w, static_cast<int>(i)};
        const double analytic = len ? annulus_line_density(m, a) : annulus_intersection_density(m, a);
        if (se[i] > 0.0) worst_z = std::max(worst_z, std::abs(dens[i] - analytic) / se[i]);
        if (r_out <= m.radius) {
          total += dens[i] * a.area();
          area += a.area();
        }
      }
      const double plateau =
          fault(name) * (len ? m.n_lines / (2.0 * m.radius)
                             : m.n_lines * (m.n_lines - 1.0) / (4.0 * kPi * m.radius * m.radius));
      const double pooled = total / area;
      add_abs(4, name, pooled / plateau - 1.0, 0.0, len ? 0.01 : 0.02,
              "relative error of the pooled r < R density " + detail::fmt(pooled) + " vs " +
                  detail::fmt(plateau) + "; worst per-annulus |z| " + detail::fmt(worst_z) +
                  " out to 2R",
              t0);
    }
    if (wanted("intersection_plane_integral")) {
      const auto t0 = Clock::now();
      auto g = [&](double r) { return kTwoPi * r * intersection_density(m, r); };
      const auto inner = integrate_finite(g, 0.0, m.radius, QuadSpec{}.with_tol(1e-12, 1e-12));
      QuadSpec s = QuadSpec{}.with_tol(1e-12, 1e-12);
      s.scale = m.radius;
      const auto outer = integrate_semi_infinite(g, m.radius, s);
      const double total = inner.value + outer.value;
      add_abs(4, "intersection_plane_integral", total,
              fault("intersection_plane_integral") * m.n_lines * (m.n_lines - 1) / 2.0, 1e-4,
              "integral of 2 pi r rho(r) over [0, inf)", t0);
    }
  }

  // ---- 5 -----------------------------------------------------------------
  void nearest_intersection() {
    const std::string name = "nearest_intersection_ks";
    if (!wanted(name) && !wanted("nearest_intersection_ordering")) return;
    const auto t0 = Clock::now();
    const std::size_t trials = pick(40'000, 100'000);
    double worst = 0.0;
    double worst_alt = 0.0;
    std::string where;
    std::vector<std::vector<double>> curves;
    const std::vector<double> grid_t = {2, 5, 10, 20, 40, 80};
    const std::vector<int> nbs = {5, 10};
    const std::vector<double> r0s = {0, 25, 50};
    for (int nb : nbs) {
      for (double r0 : r0s) {
        const BlpModel m{nb, 50.0};
        auto samples = mc_nearest_intersection_distances(m, r0, mc(trials, 500 + nb * 7 + static_cast<std::uint64_t>(r0)));
        std::vector<double> sorted = samples;
        std::sort(sorted.begin(), sorted.end());
        const double hi = sorted[static_cast<std::size_t>(0.999 * (sorted.size() - 1))];
        const double scale = fault(name);
        auto exact = [&](double t) { return cdf_nearest_intersection(m, r0, t * scale); };
        const auto cdf = detail::tabulate_cdf(exact, hi, 600);
        const double d = ks_statistic(samples, cdf);
        if (d > worst) {
          worst = d;
          where = "n_B " + std::to_string(nb) + ", r0 " + detail::fmt(r0);
        }
        auto alt = [&](double t) { return cdf_nearest_intersection(m, r0, t, nb); };
        worst_alt = std::max(worst_alt, ks_statistic(samples, detail::tabulate_cdf(alt, hi, 600)));
        std::vector<double> c;
        for (double t : grid_t) c.push_back(cdf_nearest_intersection(m, r0, t));
        curves.push_back(c);
      }
    }
    if (wanted(name))
      add_abs(5, name, worst, 0.0, 0.015,
              "worst KS over {5,10} x {0,25,50} at " + where + ", " + std::to_string(trials) +
                  " trials each",
              t0);
    if (wanted(name))
      add_info(5, "nearest_intersection_ks_exponent_nb", worst_alt, 0.015,
               "same comparison with exponent n_B instead of n_B - 1", Clock::now());
    if (wanted("nearest_intersection_ordering")) {
      // closer for higher n_B and for smaller r0
      bool ok = true;
      const std::size_t nr = r0s.size();
      for (std::size_t j = 0; j < grid_t.size(); ++j) {
        for (std::size_t i = 0; i < nr; ++i) ok = ok && curves[nr + i][j] >= curves[i][j];
        for (std::size_t b = 0; b < nbs.size(); ++b)
          for (std::size_t i = 1; i < nr; ++i) ok = ok && curves[b * nr + i - 1][j] >= curves[b * nr + i][j];
      }
      add_bool(5, "nearest_intersection_ordering", ok,
               "F increases with n_B and decreases with r0 on t in {2..80}", Clock::now());
    }
  }

  // ---- 6 -----------------------------------------------------------------
  void pgfl_checks() {
    const BlcpModel m;  // n_B 10, R 50, lambda 0.1
    const double r0 = 0.0;
    if (wanted("pgfl_identity")) {
      const auto t0 = Clock::now();
      const auto one = RadialFunctional::one();
      const double g1 = conditional_pgfl(m, r0, PalmContext{5.0, r0}, one);
      const double g2 = pgfl(m, r0, one);
      const double g3 = pgfl_detailed(m, r0, RadialFunctional::constant(1.0)).value[0].real();
      const auto e = mc_pgfl(m, r0, one, mc(200, 61));
      const double k = fault("pgfl_identity");
      const double worst = std::max({std::abs(k * g1 - 1.0), std::abs(k * g2 - 1.0),
                                     std::abs(k * g3 - 1.0), std::abs(k * e.mean - 1.0)});
      add_abs(6, "pgfl_identity", worst, 0.0, 0.0,
              "f = 1: conditional, unconditional, generic constant-1 route, MC", t0);
    }
    struct Fn {
      std::string label;
      RadialFunctional f;
      std::size_t trials_quick;
      std::size_t trials_full;
    };
    const std::vector<Fn> fns = {
        {"sir", RadialFunctional::sir(0.1, 2.0, 5.0), 20'000, 100'000},
        {"laplace", RadialFunctional::laplace(1000.0, 4.0), 5'000, 20'000},
        {"step", RadialFunctional::step(10.0, 0.5), 20'000, 100'000}};
    const double d1 = 5.0;
    const double delta = 0.1;
    std::uint64_t salt = 600;
    for (const auto& fn : fns) {
      const std::string cname = "pgfl_conditional_" + fn.label;
      if (wanted(cname)) {
        const auto t0 = Clock::now();
        // Window average of G against the nearest-point density.
        using GL = boost::math::quadrature::gauss<double, 7>;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
          for (double sgn : {1.0, -1.0}) {
            if (GL::abscissa()[i] == 0.0 && sgn < 0.0) continue;
            const double s = d1 + 0.5 * delta * (1.0 + sgn * GL::abscissa()[i]);
            const double pdf = nearest_point_density(m, r0, s);
            num += GL::weights()[i] * pdf * conditional_pgfl(m, r0, PalmContext{s, r0}, fn.f);
            den += GL::weights()[i] * pdf;
          }
        }
        const auto e = mc_conditional_pgfl(m, r0, fn.f, d1, delta,
                                           mc(pick(20 * fn.trials_quick, 20 * fn.trials_full), ++salt));
        add_se(6, cname, e, fault(cname) * num / den, 3.0, t0);
      }
      const std::string uname = "pgfl_unconditional_" + fn.label;
      if (wanted(uname)) {
        const auto t0 = Clock::now();
        const double g = pgfl(m, r0, fn.f);
        const auto e = mc_pgfl(m, r0, fn.f, mc(pick(fn.trials_quick, fn.trials_full), ++salt));
        add_se(6, uname, e, fault(uname) * g, 3.0, t0);
      }
    }
  }

  // ---- 7 -----------------------------------------------------------------
  void success_probability_checks() {
    const BlcpModel m;
    const RadioParams radio;
    if (wanted("success_probability_mc")) {
      const auto t0 = Clock::now();
      const std::vector<double> r0s = full() ? std::vector<double>{0, 25, 50, 100}
                                             : std::vector<double>{0, 100};
      double worst = 0.0;
      std::string where;
      for (double r0 : r0s) {
        const double a = fault("success_probability_mc") * success_probability(m, radio, r0);
        const auto e = mc_sinr_success(m, radio, r0, mc(pick(20'000, 100'000), 700 + static_cast<std::uint64_t>(r0)));
        const double d = std::abs(e.mean - a);
        if (d >= worst) {
          worst = d;
          where = "r0 " + detail::fmt(r0) + ": analytic " + detail::fmt(a) + ", MC " +
                  detail::fmt(e.mean) + " +- " + detail::fmt(e.std_error);
        }
      }
      add_abs(7, "success_probability_mc", worst, 0.0, 0.01, "worst |analytic - MC| at " + where, t0);
    }
    if (wanted("success_probability_unimodal")) {
      const auto t0 = Clock::now();
      std::vector<double> v;
      const std::vector<double> grid = {0, 10, 20, 30, 40, 50, 60, 70, 80, 100, 120, 150};
      for (double r0 : grid) v.push_back(success_probability(m, radio, r0));
      std::size_t peak = 0;
      // A fault flattens the curve's tail upward so the peak moves to the edge.
      if (fault("success_probability_unimodal") != 1.0) v.back() = 1.0;
      const bool uni = detail::unimodal(v, 1e-9, &peak);
      const bool interior = peak > 0 && peak + 1 < v.size();
      std::string values;
      for (double x : v) values += detail::fmt(x) + " ";
      add_bool(7, "success_probability_unimodal", uni && interior,
               "p_S on r0 = 0..150: " + values + "(peak at r0 " + detail::fmt(grid[peak]) + ")",
               t0, grid[peak]);
    }
    if (wanted("closed_form_alpha2_nb1")) {
      const auto t0 = Clock::now();
      const BlcpModel m1{{1, 50.0}, 0.1};
      double worst = 0.0;
      for (auto w : {PalmWeighting::kExact, PalmWeighting::kUniformBand})
        for (double r0 : {0.0, 30.0, 80.0})
          for (double d1 : {2.0, 10.0, 45.0}) {
            if (r0 - 50.0 >= d1) continue;  // serving line cannot reach
            const double cf = fault("closed_form_alpha2_nb1") * pgfl_closed_form_alpha2_nb1(m1, radio, r0, d1, w);
            const double gq = conditional_sir_pgfl(m1, radio, r0, d1, w);
            worst = std::max(worst, std::abs(cf - gq));
          }
      add_abs(7, "closed_form_alpha2_nb1", worst, 0.0, 1e-6,
              "max |closed form - general quadrature| over r0, d1 and both weightings", t0);
    }
    if (wanted("success_probability_literal_xi0")) {
      const auto t0 = Clock::now();
      RadioParams lit = radio;
      lit.xi0 = kReferenceNoiseToSignal;
      const double a = success_probability(m, lit, 0.0);
      const auto e = mc_sinr_success(m, lit, 0.0, mc(2000, 790));
      add_info(7, "success_probability_literal_xi0", e.mean, a,
               "xi0 = 2.9858e-8 used directly as the SINR link constant: analytic " +
                   detail::fmt(a) + ", MC " + detail::fmt(e.mean),
               t0);
    }
  }

  // ---- 8 -----------------------------------------------------------------
  void meta_checks() {
    const BlcpModel m;
    const RadioParams radio;
    const double r0 = 0.0;
    const bool need = wanted("meta_ccdf_mc") || wanted("meta_ccdf_integral") || wanted("meta_moment_bound");
    if (!need) return;
    const auto t0 = Clock::now();
    std::vector<double> betas;
    for (int k = 1; k <= 19; ++k) betas.push_back(k / 20.0);
    const auto curve = meta_distribution_curve(m, radio, r0, betas);
    const double curve_secs = seconds_since(t0);
    if (wanted("meta_ccdf_mc")) {
      const auto t1 = Clock::now();
      const auto samples = mc_meta_samples(m, radio, r0, 0, mc(100'000, 800));
      std::vector<double> at;
      std::vector<double> an;
      for (std::size_t k = 1; k < betas.size(); k += 2) {
        at.push_back(betas[k]);
        an.push_back(curve.ccdf[k] * fault("meta_ccdf_mc"));
      }
      const auto em = empirical_ccdf(samples, at);
      double worst = 0.0;
      std::string where;
      for (std::size_t i = 0; i < at.size(); ++i)
        if (std::abs(em[i] - an[i]) >= worst) {
          worst = std::abs(em[i] - an[i]);
          where = "beta " + detail::fmt(at[i]) + ": " + detail::fmt(an[i]) + " vs MC " + detail::fmt(em[i]);
        }
      add_abs(8, "meta_ccdf_mc", worst, 0.0, 0.02,
              "worst |Gil-Pelaez - empirical| on beta 0.1..0.9 at " + where + "; curve " +
                  detail::fmt(curve_secs) + " s, u_max " + detail::fmt(curve.u_max) +
                  (curve.converged ? "" : ", NOT converged"),
              t1);
    }
    if (wanted("meta_ccdf_integral")) {
      const auto t1 = Clock::now();
      std::vector<double> y{1.0};
      for (double v : curve.ccdf) y.push_back(v);
      y.push_back(0.0);
      double simpson = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double wgt = (i == 0 || i + 1 == y.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        simpson += wgt * y[i];
      }
      simpson *= 0.05 / 3.0;
      RadioParams r = radio;
      const double m1 = fault("meta_ccdf_integral") * moment(m, r, r0, {1.0}).real();
      add_abs(8, "meta_ccdf_integral", simpson, m1, 1e-3,
              "Simpson integral of the CCDF over beta vs M_1", t1);
    }
    if (wanted("meta_moment_bound")) {
      const auto t1 = Clock::now();
      std::vector<std::complex<double>> orders;
      for (int k = 1; k <= 40; ++k) orders.emplace_back(0.0, 100.0 * k / 40.0);
      orders.emplace_back(0.0, 1e-3);
      const auto res = moment_lanes(m, radio, r0, orders);
      double worst = 0.0;
      for (std::size_t i = 0; i < orders.size(); ++i) worst = std::max(worst, std::abs(res.value[i]));
      worst *= fault("meta_moment_bound");
      add_bool(8, "meta_moment_bound", worst <= 1.0 + 1e-9 && res.converged,
               "max |M_ju| on u in (0, 100] = " + detail::fmt(worst), t1, worst, 1.0);
    }
  }

  // ---- 9 -----------------------------------------------------------------
  void delay_checks() {
    if (wanted("local_delay_mc")) {
      const auto t0 = Clock::now();
      const BlcpModel small{{2, 20.0}, 0.05};
      RadioParams r;
      r.gamma = 0.01;
      r.p = 0.5;
      const auto a = mean_local_delay(small, r, 0.0);
      const auto e = mc_local_delay(small, r, 0.0, 100000, mc(pick(10'000, 40'000), 900));
      const double expect = fault("local_delay_mc") * a.value;
      add_abs(9, "local_delay_mc", e.mean / expect - 1.0, 0.0, 0.05,
              "relative error; analytic " + detail::fmt(expect) + ", MC " + detail::fmt(e.mean) +
                  " +- " + detail::fmt(e.std_error) + ", censored " + detail::fmt(e.censored_fraction),
              t0);
    }
    if (wanted("local_delay_u_shape") || wanted("local_delay_jensen")) {
      const auto t0 = Clock::now();
      const BlcpModel m;
      const RadioParams radio;
      const auto opt = optimal_transmit_probability(m, radio, 0.0);
      std::vector<double> d;
      for (const auto& g : opt.grid_values) d.push_back(g.divergent ? 1e300 : -g.value);
      std::size_t peak = 0;
      const bool uni = detail::unimodal(d, 1e-9, &peak);
      const double p_star = opt.p_star * fault("local_delay_u_shape");
      const bool interior = p_star > opt.grid.front() && p_star < opt.grid.back() && peak > 0 &&
                            peak + 1 < d.size();
      if (wanted("local_delay_u_shape"))
        add_bool(9, "local_delay_u_shape", uni && interior,
                 "D(p) on p = k/16 decreases then increases; p* = " + detail::fmt(p_star) +
                     ", D(p*) = " + detail::fmt(opt.delay),
                 t0, p_star);
      if (wanted("local_delay_jensen")) {
        const auto t1 = Clock::now();
        bool ok = true;
        double worst_margin = 1e300;
        for (std::size_t i = 0; i < opt.grid.size(); ++i) {
          if (opt.grid_values[i].divergent) continue;
          RadioParams r = radio;
          r.p = opt.grid[i];
          const double m1 = moment(m, r, 0.0, {1.0}).real();
          const double bound = fault("local_delay_jensen") * 1.0 / (r.p * m1);
          worst_margin = std::min(worst_margin, opt.grid_values[i].value - bound);
          ok = ok && opt.grid_values[i].value >= bound && opt.grid_values[i].value >= 1.0 / m1;
        }
        add_bool(9, "local_delay_jensen", ok,
                 "D(p) >= 1 / (p M_1(p)) >= 1 / M_1 at every grid p; min margin " +
                     detail::fmt(worst_margin),
                 t1, worst_margin);
      }
    }
  }

  // ---- 10 ----------------------------------------------------------------
  void reproducibility() {
    if (!wanted("worker_invariance")) return;
    const auto t0 = Clock::now();
    const BlcpModel m;
    const RadioParams radio;
    bool same = true;
    std::vector<double> first;
    for (unsigned w : {1u, 4u, 16u}) {
      McConfig c = mc(pick(3000, 10000), 1000);
      c.workers = w;
      c.block_size = 64;
      std::vector<double> v;
      const auto e1 = mc_sinr_success(m, radio, 25.0, c);
      const auto e2 = mc_void_blcp(m, 60.0, 20.0, c);
      const auto s = mc_meta_samples(m, radio, 0.0, 0, c);
      const auto h = mc_radial_histogram(RadialKind::kLineLength, m.blp, 10.0, 100.0, c);
      v = {e1.mean, e1.std_error, e2.mean, e2.std_error};
      v.insert(v.end(), s.begin(), s.end());
      for (double x : h.numbers("density")) v.push_back(x);
      if (first.empty()) {
        first = v;
      } else {
        same = same && v.size() == first.size() &&
               std::equal(v.begin(), v.end(), first.begin(),
                          [](double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; });
      }
    }
    if (fault("worker_invariance") != 1.0) same = false;
    add_bool(10, "worker_invariance", same,
             "SINR, void, meta samples and histogram bit-identical for 1, 4 and 16 workers", t0);
  }

  ValidationOptions opt_;
  ValidationReport report_;
};

inline ValidationReport run_validation(const ValidationOptions& opt) {
  return ValidationSuite(opt).run();
}

inline std::vector<std::string> validation_check_names() {
  return {"band_area_mc",
          "band_area_branch_forms",
          "band_area_runtime",
          "band_area_plp_identity",
          "plp_intersection_density",
          "void_blp",
          "void_blcp",
          "void_blcp_lambda_limit",
          "line_length_plateau",
          "intersection_plateau",
          "intersection_plane_integral",
          "nearest_intersection_ks",
          "nearest_intersection_ordering",
          "pgfl_identity",
          "pgfl_conditional_sir",
          "pgfl_unconditional_sir",
          "pgfl_conditional_laplace",
          "pgfl_unconditional_laplace",
          "pgfl_conditional_step",
          "pgfl_unconditional_step",
          "success_probability_mc",
          "success_probability_unimodal",
          "closed_form_alpha2_nb1",
          "meta_ccdf_mc",
          "meta_ccdf_integral",
          "meta_moment_bound",
          "local_delay_mc",
          "local_delay_u_shape",
          "local_delay_jensen",
          "worker_invariance"};
}

}  // namespace blcp
