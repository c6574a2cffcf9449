// blcp: figure data, realizations and validation reports for the binomial
// line Cox process.
//
//   blcp sample   --nb 10 --radius 100 --seed 7 --out run/sample
//   blcp density  --kind intersection --trials 20000
//   blcp nearest  --target intersection --nb-list 5,10 --r0-list 0,25,50
//   blcp coverage --sweep r0 --values 0,25,50,100 --trials 20000
//   blcp meta     --gamma-list 0.1,1 --format json
//   blcp delay | blcp std
//   blcp validate --quick --out report.json
//
// Table output goes to --out, else $BLCP_OUTPUT_DIR/<command>.<ext>, else stdout.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blcp/blcp_analytic.hpp"
#include "blcp/blp_analytic.hpp"
#include "blcp/curve_table.hpp"
#include "blcp/montecarlo.hpp"
#include "blcp/network_metrics.hpp"
#include "blcp/sampling.hpp"
#include "blcp/validation.hpp"

namespace {

using blcp::CurveTable;
using json = nlohmann::ordered_json;

struct RunConfig {
  int nb = 10;
  double radius = 50.0;
  double lambda = 0.1;
  double alpha = 2.0;
  double xi0 = blcp::kReferenceNoiseToSignal;  // noise-to-signal normalization
  double gamma = 0.1;
  double p = 1.0;
  double r0 = 0.0;
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  unsigned workers = 1;
  std::string far_field = "integrate";
  std::string format = "csv";
  std::string out;

  blcp::BlcpModel model() const { return {{nb, radius}, lambda}; }

  blcp::RadioParams radio() const {
    blcp::RadioParams r;
    r.alpha = alpha;
    r.xi0 = 1.0 / xi0;
    r.gamma = gamma;
    r.p = p;
    return r;
  }

  blcp::McConfig mc(std::size_t n) const {
    blcp::McConfig c;
    c.trials = n;
    c.master_seed = seed;
    c.workers = workers;
    if (far_field == "truncate") {
      c.far_field = blcp::FarField::kTruncate;
    } else if (far_field != "integrate") {
      throw std::invalid_argument("--far-field must be integrate or truncate");
    }
    return c;
  }

  // Worker count is deliberately absent: it never changes the numbers.
  json to_json() const {
    return {{"nb", nb},       {"radius", radius}, {"lambda", lambda},   {"alpha", alpha},
            {"xi0", xi0},     {"gamma", gamma},   {"p", p},             {"r0", r0},
            {"seed", seed},   {"trials", trials}, {"far_field", far_field}};
  }
};

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--nb", c.nb, "number of lines n_B")->capture_default_str();
  app->add_option("--radius", c.radius, "domain radius R")->capture_default_str();
  app->add_option("--lambda", c.lambda, "point intensity per unit line length")->capture_default_str();
  app->add_option("--alpha", c.alpha, "path-loss exponent")->capture_default_str();
  app->add_option("--xi0", c.xi0, "noise-to-signal normalization (link constant is 1/xi0)")
      ->capture_default_str();
  app->add_option("--gamma", c.gamma, "SINR threshold")->capture_default_str();
  app->add_option("--p", c.p, "ALOHA transmit probability")->capture_default_str();
  app->add_option("--r0", c.r0, "receiver distance from the origin")->capture_default_str();
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--trials", c.trials, "Monte Carlo trials for the overlay (0: none)")
      ->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads (0: all cores)")->capture_default_str();
  app->add_option("--far-field", c.far_field, "integrate | truncate")->capture_default_str();
  app->add_option("--format", c.format, "csv | json")->capture_default_str();
  app->add_option("--out", c.out, "output path");
}

json metadata(const std::string& command, const RunConfig& c, json params) {
  json j;
  j["tool"] = "blcp";
  j["tool_version"] = blcp::kToolVersion;
  j["command"] = command;
  j["seed"] = c.seed;
  j["config"] = c.to_json();
  j["params"] = std::move(params);
  return j;
}

std::string resolve_out(const RunConfig& c, const std::string& stem) {
  if (!c.out.empty()) return c.out;
  if (const char* dir = std::getenv("BLCP_OUTPUT_DIR"); dir && *dir) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / (stem + blcp::format_extension(blcp::parse_format(c.format))))
        .string();
  }
  return {};
}

void emit(const CurveTable& t, const RunConfig& c, const std::string& stem) {
  const auto fmt = blcp::parse_format(c.format);
  const std::string path = resolve_out(c, stem);
  if (path.empty()) {
    t.write(std::cout, fmt);
  } else {
    t.write_file(path, fmt);
    std::cerr << "wrote " << path << "\n";
  }
}

void note_warnings(json& meta, const blcp::Estimate& e, const std::string& where) {
  for (const auto& w : e.warnings) {
    meta["warnings"].push_back(where + ": " + w);
    std::cerr << "warning (" << where << "): " << w << "\n";
  }
}

// Long-format table: series and status labels, command-specific numeric keys,
// then x, y and the MC uncertainty columns (nan for analytic rows).
CurveTable curve_table(const std::vector<std::string>& keys) {
  CurveTable t;
  t.add_column("series", true);
  t.add_column("status", true);
  for (const auto& k : keys) t.add_column(k, false);
  for (const char* k : {"x", "y", "std_error", "ci_low", "ci_high"}) t.add_column(k, false);
  return t;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1.0));
  return v;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string kind = "blcp";
  double window = 0.0;
};

void cmd_sample(const RunConfig& c, const SampleArgs& a) {
  if (a.kind != "blp" && a.kind != "blcp") throw std::invalid_argument("--kind must be blp or blcp");
  const auto model = c.model();
  const double window = a.window > 0.0 ? a.window : c.radius;
  blcp::Realization re = a.kind == "blp" ? blcp::sample_blp(model.blp, c.seed)
                                         : blcp::sample_blcp(model, window, c.seed);
  json params{{"kind", a.kind}, {"window", a.kind == "blp" ? 0.0 : window}};

  CurveTable lines({"line", "theta", "r", "points"});
  lines.metadata = metadata("sample", c, params);
  lines.metadata["table"] = "lines";
  for (std::size_t i = 0; i < re.lines.size(); ++i)
    lines.add_row({}, {static_cast<double>(i), re.lines[i].theta, re.lines[i].r,
                       static_cast<double>(re.points_on_line[i].size())});
  CurveTable points({"line", "offset", "x", "y"});
  points.metadata = metadata("sample", c, params);
  points.metadata["table"] = "points";
  for (std::size_t i = 0; i < re.lines.size(); ++i)
    for (double s : re.points_on_line[i]) {
      const auto q = re.lines[i].at(s);
      points.add_row({}, {static_cast<double>(i), s, q.x, q.y});
    }

  const auto fmt = blcp::parse_format(c.format);
  std::string prefix = c.out;
  if (prefix.empty()) {
    const char* dir = std::getenv("BLCP_OUTPUT_DIR");
    prefix = (std::filesystem::path(dir && *dir ? dir : ".") / "sample").string();
  }
  const auto parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  for (const auto& [table, name] : {std::pair{&lines, "_lines"}, std::pair{&points, "_points"}}) {
    const std::string path = prefix + name + blcp::format_extension(fmt);
    table->write_file(path, fmt);
    std::cerr << "wrote " << path << "\n";
  }
}

// ---------------------------------------------------------------------------

struct DensityArgs {
  std::string kind = "line_length";
  double r_max = 0.0;
  std::size_t points = 101;
  double width = 0.0;
};

void cmd_density(const RunConfig& c, const DensityArgs& a) {
  const auto m = c.model().blp;
  m.validate();
  const bool len = a.kind == "line_length";
  if (!len && a.kind != "intersection")
    throw std::invalid_argument("--kind must be line_length or intersection");
  const double r_max = a.r_max > 0.0 ? a.r_max : 2.0 * m.radius;
  const double w = a.width > 0.0 ? a.width : m.radius / 10.0;
  auto t = curve_table({});
  json params{{"kind", a.kind}, {"r_max", r_max}, {"points", a.points}, {"width", w}};
  t.metadata = metadata("density", c, params);
  for (double r : linspace(0.0, r_max, a.points))
    t.add_row({"analytic", "ok"},
              {r, len ? blcp::line_length_density(m, r) : blcp::intersection_density(m, r), kNaN,
               kNaN, kNaN});
  const double plateau = len ? m.n_lines / (2.0 * m.radius)
                             : m.n_lines * (m.n_lines - 1.0) / (4.0 * blcp::kPi * m.radius * m.radius);
  t.metadata["plateau"] = plateau;
  if (c.trials > 0) {
    const auto h = blcp::mc_radial_histogram(
        len ? blcp::RadialKind::kLineLength : blcp::RadialKind::kIntersections, m, w, r_max,
        c.mc(c.trials));
    const auto& x = h.numbers("r");
    const auto& y = h.numbers("density");
    const auto& se = h.numbers("std_error");
    const auto& lo = h.numbers("ci_low");
    const auto& hi = h.numbers("ci_high");
    for (std::size_t i = 0; i < x.size(); ++i)
      t.add_row({"mc_annulus", "ok"}, {x[i], y[i], se[i], lo[i], hi[i]});
  }
  emit(t, c, "density_" + a.kind);
}

// ---------------------------------------------------------------------------

struct NearestArgs {
  std::string target = "intersection";
  std::vector<int> nb_list{5, 10};
  std::vector<double> r0_list{0.0, 25.0, 50.0};
  double t_max = 0.0;
  std::size_t points = 81;
};

void cmd_nearest(const RunConfig& c, const NearestArgs& a) {
  if (a.target != "line" && a.target != "blcp_point" && a.target != "intersection")
    throw std::invalid_argument("--target must be line, blcp_point or intersection");
  auto t = curve_table({"nb", "r0"});
  const double t_max = a.t_max > 0.0 ? a.t_max : c.radius;
  json params{{"target", a.target}, {"nb_list", a.nb_list}, {"r0_list", a.r0_list},
              {"t_max", t_max}, {"points", a.points}};
  t.metadata = metadata("nearest", c, params);
  const auto grid = linspace(0.0, t_max, a.points);
  std::uint64_t series = 0;
  for (int nb : a.nb_list) {
    for (double r0 : a.r0_list) {
      const blcp::BlcpModel m{{nb, c.radius}, c.lambda};
      m.validate();
      auto cdf = [&](double x) {
        if (a.target == "line") return blcp::cdf_nearest_line(m.blp, r0, x);
        if (a.target == "blcp_point") return blcp::cdf_nearest_blcp_point(m, r0, x);
        return blcp::cdf_nearest_intersection(m.blp, r0, x);
      };
      for (double x : grid)
        t.add_row({"analytic", "ok"}, {static_cast<double>(nb), r0, x, cdf(x), kNaN, kNaN, kNaN});
      if (c.trials == 0) continue;
      auto cfg = c.mc(c.trials);
      cfg.master_seed = blcp::derive_seed(c.seed, series++);
      std::vector<double> s;
      if (a.target == "line") {
        s = blcp::mc_nearest_line_distances(m.blp, r0, cfg);
      } else if (a.target == "blcp_point") {
        s = blcp::mc_nearest_point_distances(m, r0, cfg);
      } else {
        s = blcp::mc_nearest_intersection_distances(m.blp, r0, cfg);
      }
      const double n = static_cast<double>(cfg.trials);  // misses count as +inf
      const double z = blcp::normal_quantile_two_sided(cfg.confidence);
      const auto ccdf = blcp::empirical_ccdf(s, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = (static_cast<double>(s.size()) * (1.0 - ccdf[i])) / n;
        const double se = std::sqrt(f * (1.0 - f) / n);
        t.add_row({"mc", "ok"},
                  {static_cast<double>(nb), r0, grid[i], f, se, f - z * se, f + z * se});
      }
      if (!s.empty())
        t.metadata["ks"].push_back({{"nb", nb}, {"r0", r0}, {"D", blcp::ks_statistic(s, cdf)}});
    }
  }
  emit(t, c, "nearest_" + a.target);
}

// ---------------------------------------------------------------------------

struct CoverageArgs {
  std::string sweep = "r0";
  std::vector<double> values;
  std::vector<double> gamma_list;
};

void cmd_coverage(const RunConfig& c, const CoverageArgs& a) {
  std::vector<double> values = a.values;
  if (values.empty()) {
    if (a.sweep == "r0") {
      values = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 120, 150};
    } else if (a.sweep == "nb") {
      values = {1, 2, 5, 10, 15, 20, 30};
    } else if (a.sweep == "lambda") {
      values = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
    }
  }
  if (a.sweep != "r0" && a.sweep != "nb" && a.sweep != "lambda")
    throw std::invalid_argument("--sweep must be r0, nb or lambda");
  const std::vector<double> gammas = a.gamma_list.empty() ? std::vector<double>{c.gamma} : a.gamma_list;
  auto t = curve_table({"gamma"});
  json params{{"sweep", a.sweep}, {"values", values}, {"gamma_list", gammas}};
  t.metadata = metadata("coverage", c, params);
  std::uint64_t series = 0;
  for (double g : gammas) {
    for (double v : values) {
      RunConfig k = c;
      k.gamma = g;
      if (a.sweep == "r0") k.r0 = v;
      if (a.sweep == "nb") k.nb = static_cast<int>(v);
      if (a.sweep == "lambda") k.lambda = v;
      const auto m = k.model();
      const auto radio = k.radio();
      t.add_row({"analytic", "ok"}, {g, v, blcp::success_probability(m, radio, k.r0), kNaN, kNaN, kNaN});
      if (c.trials == 0) continue;
      auto cfg = c.mc(c.trials);
      cfg.master_seed = blcp::derive_seed(c.seed, series++);
      const auto e = blcp::mc_sinr_success(m, radio, k.r0, cfg);
      note_warnings(t.metadata, e, a.sweep + "=" + blcp::detail::fmt(v));
      t.add_row({"mc", "ok"}, {g, v, e.mean, e.std_error, e.ci_low, e.ci_high});
    }
  }
  emit(t, c, "coverage_" + a.sweep);
}

// ---------------------------------------------------------------------------

struct MetaArgs {
  std::vector<double> beta_list;
  std::vector<double> gamma_list;
};

void cmd_meta(const RunConfig& c, const MetaArgs& a) {
  std::vector<double> betas = a.beta_list;
  if (betas.empty())
    for (int k = 1; k <= 19; ++k) betas.push_back(k / 20.0);
  const std::vector<double> gammas = a.gamma_list.empty() ? std::vector<double>{c.gamma} : a.gamma_list;
  auto t = curve_table({"gamma"});
  json params{{"beta_list", betas}, {"gamma_list", gammas}};
  t.metadata = metadata("meta", c, params);
  std::uint64_t series = 0;
  for (double g : gammas) {
    RunConfig k = c;
    k.gamma = g;
    const auto curve = blcp::meta_distribution_curve(k.model(), k.radio(), k.r0, betas);
    for (std::size_t i = 0; i < betas.size(); ++i)
      t.add_row({"gil_pelaez", curve.converged ? "ok" : "NOT_CONVERGED"},
                {g, betas[i], curve.ccdf[i], kNaN, kNaN, kNaN});
    t.metadata["u_max"].push_back(curve.u_max);
    if (c.trials == 0) continue;
    auto cfg = c.mc(c.trials);
    cfg.master_seed = blcp::derive_seed(c.seed, series++);
    const auto s = blcp::mc_meta_samples(k.model(), k.radio(), k.r0, 0, cfg);
    const auto em = blcp::empirical_ccdf(s, betas);
    const double n = static_cast<double>(s.size());
    const double z = blcp::normal_quantile_two_sided(cfg.confidence);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double se = std::sqrt(em[i] * (1.0 - em[i]) / n);
      t.add_row({"mc", "ok"}, {g, betas[i], em[i], se, em[i] - z * se, em[i] + z * se});
    }
  }
  emit(t, c, "meta");
}

// ---------------------------------------------------------------------------

struct DelayArgs {
  std::vector<double> p_list;
  std::size_t max_slots = 100000;
};

std::vector<double> default_p_grid(const std::vector<double>& given) {
  if (!given.empty()) return given;
  std::vector<double> p;
  for (int k = 1; k <= 16; ++k) p.push_back(k / 16.0);
  return p;
}

void cmd_delay(const RunConfig& c, const DelayArgs& a) {
  const auto ps = default_p_grid(a.p_list);
  auto t = curve_table({});
  json params{{"p_list", ps}, {"max_slots", a.max_slots}};
  t.metadata = metadata("delay", c, params);
  const auto m = c.model();
  std::uint64_t series = 0;
  for (double p : ps) {
    RunConfig k = c;
    k.p = p;
    const auto d = blcp::mean_local_delay(m, k.radio(), c.r0);
    t.add_row({"analytic", d.divergent ? "DIVERGENT" : "ok"},
              {p, d.divergent ? std::numeric_limits<double>::infinity() : d.value, kNaN, kNaN, kNaN});
    if (c.trials == 0) continue;
    auto cfg = c.mc(c.trials);
    cfg.master_seed = blcp::derive_seed(c.seed, series++);
    const auto e = blcp::mc_local_delay(m, k.radio(), c.r0, a.max_slots, cfg);
    note_warnings(t.metadata, e, "p=" + blcp::detail::fmt(p));
    t.add_row({"mc", e.censored_fraction > 0.01 ? "CENSORED" : "ok"},
              {p, e.mean, e.std_error, e.ci_low, e.ci_high});
  }
  const auto opt = blcp::optimal_transmit_probability(m, c.radio(), c.r0);
  t.add_row({"p_star", std::isfinite(opt.delay) ? "ok" : "DIVERGENT"},
            {opt.p_star, opt.delay, kNaN, kNaN, kNaN});
  emit(t, c, "delay");
}

void cmd_std(const RunConfig& c, const DelayArgs& a) {
  const auto ps = default_p_grid(a.p_list);
  auto t = curve_table({});
  t.metadata = metadata("std", c, json{{"p_list", ps}});
  const auto m = c.model();
  double best_p = 0.0;
  double best = -1.0;
  for (double p : ps) {
    RunConfig k = c;
    k.p = p;
    const double v = blcp::successful_transmission_density(m, k.radio(), c.r0);
    if (v > best) {
      best = v;
      best_p = p;
    }
    t.add_row({"analytic", "ok"}, {p, v, kNaN, kNaN, kNaN});
  }
  t.add_row({"grid_argmax", "ok"}, {best_p, best, kNaN, kNaN, kNaN});
  emit(t, c, "std");
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  bool quick = false;
  bool full = false;
  bool list = false;
  std::string inject;
  std::vector<std::string> only;
};

int cmd_validate(const RunConfig& c, const ValidateArgs& a) {
  if (a.list) {
    for (const auto& n : blcp::validation_check_names()) std::cout << n << "\n";
    return 0;
  }
  blcp::ValidationOptions o;
  o.mode = a.quick ? blcp::SuiteMode::kQuick : blcp::SuiteMode::kFull;
  o.seed = c.seed;
  o.workers = c.workers;
  o.inject_fault = a.inject;
  if (!a.inject.empty()) {
    const auto names = blcp::validation_check_names();
    if (std::find(names.begin(), names.end(), a.inject) == names.end())
      throw std::invalid_argument("--inject: unknown check '" + a.inject + "'");
  }
  o.only.insert(a.only.begin(), a.only.end());
  o.on_check = [](const blcp::CheckResult& r) {
    std::cerr << (r.informational ? "  info " : (r.passed ? "  ok   " : "  FAIL ")) << r.name << " ("
              << r.seconds << " s)\n";
  };
  const auto report = blcp::run_validation(o);
  std::cout << report.summary();
  const std::string path = resolve_out(c, "validate_report");
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << report.to_json().dump(2) << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
    std::cerr << "wrote " << path << "\n";
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binomial line Cox process toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", blcp::kToolVersion);

  RunConfig cfg;

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "write one realization (lines and points)");
  add_common(s, cfg);
  s->add_option("--kind", sample.kind, "blp | blcp")->capture_default_str();
  s->add_option("--window", sample.window, "points are materialized in B(0, window); default R");

  DensityArgs density;
  auto* d = app.add_subcommand("density", "line-length or intersection density vs r");
  add_common(d, cfg);
  d->add_option("--kind", density.kind, "line_length | intersection")->capture_default_str();
  d->add_option("--r-max", density.r_max, "largest r (default 2R)");
  d->add_option("--points", density.points, "analytic grid size")->capture_default_str();
  d->add_option("--width", density.width, "MC annulus width (default R/10)");

  NearestArgs nearest;
  auto* n = app.add_subcommand("nearest", "nearest-distance CDFs");
  add_common(n, cfg);
  n->add_option("--target", nearest.target, "line | blcp_point | intersection")->capture_default_str();
  n->add_option("--nb-list", nearest.nb_list, "n_B values")->delimiter(',')->capture_default_str();
  n->add_option("--r0-list", nearest.r0_list, "r0 values")->delimiter(',')->capture_default_str();
  n->add_option("--t-max", nearest.t_max, "largest t (default R)");
  n->add_option("--points", nearest.points, "grid size")->capture_default_str();

  CoverageArgs coverage;
  auto* cv = app.add_subcommand("coverage", "success probability sweeps");
  add_common(cv, cfg);
  cv->add_option("--sweep", coverage.sweep, "r0 | nb | lambda")->capture_default_str();
  cv->add_option("--values", coverage.values, "sweep values")->delimiter(',');
  cv->add_option("--gamma-list", coverage.gamma_list, "thresholds, one series each")->delimiter(',');

  MetaArgs meta;
  auto* me = app.add_subcommand("meta", "SINR meta distribution (CCDF over beta)");
  add_common(me, cfg);
  me->add_option("--beta-list", meta.beta_list, "beta values in (0, 1)")->delimiter(',');
  me->add_option("--gamma-list", meta.gamma_list, "thresholds, one series each")->delimiter(',');

  DelayArgs delay;
  auto* de = app.add_subcommand("delay", "mean local delay vs p and the optimal p");
  add_common(de, cfg);
  de->add_option("--p-list", delay.p_list, "transmit probabilities")->delimiter(',');
  de->add_option("--max-slots", delay.max_slots, "MC censoring limit")->capture_default_str();

  DelayArgs stdargs;
  auto* st = app.add_subcommand("std", "successful transmission density vs p");
  add_common(st, cfg);
  st->add_option("--p-list", stdargs.p_list, "transmit probabilities")->delimiter(',');

  ValidateArgs validate;
  auto* va = app.add_subcommand("validate", "analytic vs Monte Carlo check suite");
  add_common(va, cfg);
  auto* quick = va->add_flag("--quick", validate.quick, "reduced trials");
  va->add_flag("--full", validate.full, "acceptance-size trials (default)")->excludes(quick);
  va->add_flag("--list-checks", validate.list, "print check names and exit");
  va->add_option("--inject", validate.inject, "scale one check's analytic constant by 1.1");
  va->add_option("--only", validate.only, "run only these checks")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s) cmd_sample(cfg, sample);
    if (*d) cmd_density(cfg, density);
    if (*n) cmd_nearest(cfg, nearest);
    if (*cv) cmd_coverage(cfg, coverage);
    if (*me) cmd_meta(cfg, meta);
    if (*de) cmd_delay(cfg, delay);
    if (*st) cmd_std(cfg, stdargs);
    if (*va) return cmd_validate(cfg, validate);
  } catch (const std::exception& e) {
    std::cerr << "blcp: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
