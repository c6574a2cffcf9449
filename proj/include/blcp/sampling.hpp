#pragma once

// Exact samplers for the BLP and BLCP. Every sampler is a pure function of its
// inputs and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "blcp/core.hpp"
#include "blcp/geometry.hpp"

namespace blcp {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-trial seeds.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline LineParams sample_line(const BlpModel& model, Rng& rng) {
  const double theta = uniform(rng, 0.0, kPi);
  const double r = uniform(rng, -model.radius, model.radius);
  return {theta, r};
}

inline std::vector<LineParams> sample_lines(const BlpModel& model, Rng& rng) {
  std::vector<LineParams> lines;
  lines.reserve(static_cast<std::size_t>(model.n_lines));
  for (int i = 0; i < model.n_lines; ++i) lines.push_back(sample_line(model, rng));
  return lines;
}

inline Realization sample_blp(const BlpModel& model, std::uint64_t seed) {
  model.validate();
  Rng rng(seed);
  Realization out;
  out.lines = sample_lines(model, rng);
  out.points_on_line.assign(out.lines.size(), {});
  return out;
}

namespace detail {

// Appends Poisson(lambda * (hi - lo)) uniform offsets on [lo, hi).
inline void add_poisson_segment(std::vector<double>& offsets, double lambda, double lo, double hi,
                                Rng& rng) {
  if (!(hi > lo)) return;
  const double mean = lambda * (hi - lo);
  const auto count = std::poisson_distribution<long>(mean)(rng);
  std::uniform_real_distribution<double> u(lo, hi);
  for (long k = 0; k < count; ++k) offsets.push_back(u(rng));
}

// Half-length of the chord of B(center, radius) on the line, or -1 when missed.
inline double half_chord(const LineParams& line, PlanePoint center, double radius) {
  const double a = line.distance_to(center);
  if (a >= radius) return -1.0;
  return std::sqrt(radius * radius - a * a);
}

}  // namespace detail

/// Materializes the 1-D PPPs of every line inside B(center, radius).
inline void materialize(Realization& realization, double lambda, PlanePoint center, double radius,
                        Rng& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("materialize: radius must be > 0");
  realization.center = center;
  realization.materialized_radius = radius;
  realization.points_on_line.assign(realization.lines.size(), {});
  for (std::size_t i = 0; i < realization.lines.size(); ++i) {
    const auto& line = realization.lines[i];
    const double h = detail::half_chord(line, center, radius);
    if (h < 0.0) continue;
    const double mid = line.offset_of(center);
    auto& pts = realization.points_on_line[i];
    detail::add_poisson_segment(pts, lambda, mid - h, mid + h, rng);
    std::sort(pts.begin(), pts.end());
  }
}

/// Grows the materialization ball (same center) to new_radius, sampling only
/// the chord pieces not covered yet. The result has the law of a direct
/// materialization at new_radius.
inline void extend_materialization(Realization& realization, double lambda, double new_radius,
                                   Rng& rng) {
  const double old_radius = realization.materialized_radius;
  if (!(new_radius > old_radius)) return;
  const PlanePoint center = realization.center;
  for (std::size_t i = 0; i < realization.lines.size(); ++i) {
    const auto& line = realization.lines[i];
    const double h2 = detail::half_chord(line, center, new_radius);
    if (h2 < 0.0) continue;
    const double h1 = std::max(0.0, detail::half_chord(line, center, old_radius));
    const double mid = line.offset_of(center);
    auto& pts = realization.points_on_line[i];
    if (h1 <= 0.0) {
      detail::add_poisson_segment(pts, lambda, mid - h2, mid + h2, rng);
    } else {
      detail::add_poisson_segment(pts, lambda, mid - h2, mid - h1, rng);
      detail::add_poisson_segment(pts, lambda, mid + h1, mid + h2, rng);
    }
    std::sort(pts.begin(), pts.end());
  }
  realization.materialized_radius = new_radius;
}

/// BLCP with points materialized inside B(center, materialize_radius).
inline Realization sample_blcp(const BlcpModel& model, double materialize_radius, std::uint64_t seed,
                               PlanePoint center = {}) {
  model.validate();
  if (!(materialize_radius > 0.0))
    throw std::invalid_argument("sample_blcp: materialize_radius must be > 0");
  Rng rng(seed);
  Realization out;
  out.lines = sample_lines(model.blp, rng);
  materialize(out, model.lambda, center, materialize_radius, rng);
  return out;
}

/// Palm augmentation at x: adds a line through x with uniform orientation
/// (restricted to |r| <= R, which is every orientation when |x| <= R), a fresh
/// 1-D PPP on it inside the realization's ball, and the atom at x.
/// The input is expected to hold n_B - 1 lines.
inline Realization palm_augment(const Realization& realization, PlanePoint x,
                                const BlcpModel& model, std::uint64_t seed) {
  if (!std::isfinite(x.x) || !std::isfinite(x.y))
    throw std::invalid_argument("palm_augment: x must be finite");
  model.validate();
  Rng rng(seed);
  LineParams line;
  for (;;) {
    const double theta = uniform(rng, 0.0, kPi);
    const double r = x.x * std::cos(theta) + x.y * std::sin(theta);
    if (std::abs(r) <= model.radius()) {
      line = {theta, r};
      break;
    }
  }
  Realization out = realization;
  std::vector<double> pts;
  const double radius = realization.materialized_radius > 0.0 ? realization.materialized_radius
                                                              : 1.0;
  const double h = detail::half_chord(line, realization.center, radius);
  if (h >= 0.0) {
    const double mid = line.offset_of(realization.center);
    detail::add_poisson_segment(pts, model.lambda, mid - h, mid + h, rng);
  }
  pts.push_back(line.offset_of(x));
  std::sort(pts.begin(), pts.end());
  out.lines.push_back(line);
  out.points_on_line.push_back(std::move(pts));
  if (out.materialized_radius <= 0.0) out.materialized_radius = radius;
  return out;
}

}  // namespace blcp
