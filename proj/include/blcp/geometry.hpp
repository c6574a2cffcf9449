#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "blcp/core.hpp"

namespace blcp {

/// Distance between the line and the test point (r0, 0): |r0 cos(theta) - r|.
inline double line_point_distance(const LineParams& line, double r0) {
  return std::abs(r0 * std::cos(line.theta) - line.r);
}

/// Length of the chord cut by the line from the disk of radius t around (r0, 0).
inline double chord_length(const LineParams& line, double r0, double t) {
  if (t < 0.0) throw std::invalid_argument("chord_length: t must be >= 0");
  const double a = line_point_distance(line, r0);
  if (a > t) return 0.0;
  return 2.0 * std::sqrt(std::max(0.0, t * t - a * a));
}

/// Length of the chord cut from the disk B(center, t).
inline double chord_length(const LineParams& line, PlanePoint center, double t) {
  const double a = line.distance_to(center);
  if (a > t) return 0.0;
  return 2.0 * std::sqrt(std::max(0.0, t * t - a * a));
}

/// Length of the line inside the annulus {inner < |x| <= outer} around the origin.
inline double annulus_chord_length(const LineParams& line, double inner, double outer) {
  return chord_length(line, 0.0, outer) - chord_length(line, 0.0, inner);
}

/// Intersection point of two lines; empty when they are exactly parallel.
inline std::optional<PlanePoint> intersect(const LineParams& a, const LineParams& b) {
  const double det = std::sin(b.theta - a.theta);
  if (det == 0.0) return std::nullopt;
  const double x = (a.r * std::sin(b.theta) - b.r * std::sin(a.theta)) / det;
  const double y = (b.r * std::cos(a.theta) - a.r * std::cos(b.theta)) / det;
  return PlanePoint{x, y};
}

inline std::vector<PlanePoint> pairwise_intersections(const std::vector<LineParams>& lines) {
  std::vector<PlanePoint> out;
  if (lines.size() < 2) return out;
  out.reserve(lines.size() * (lines.size() - 1) / 2);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (auto p = intersect(lines[i], lines[j])) out.push_back(*p);
  return out;
}

inline std::vector<PlanePoint> pairwise_intersections(const Realization& realization) {
  return pairwise_intersections(realization.lines);
}

/// Smallest distance from (r0, 0) to any line.
inline double nearest_line_distance(const std::vector<LineParams>& lines, double r0) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& l : lines) best = std::min(best, line_point_distance(l, r0));
  return best;
}

/// k-th smallest distance (k >= 1) from (r0, 0) to a materialized point.
/// Throws when fewer than k points exist; the caller should widen the
/// materialization radius.
inline double nearest_point_distance(const Realization& realization, double r0, std::size_t k) {
  if (k < 1) throw std::invalid_argument("nearest_point_distance: k must be >= 1");
  const PlanePoint origin = test_point(r0);
  std::vector<double> d;
  d.reserve(realization.point_count());
  for (std::size_t i = 0; i < realization.lines.size(); ++i)
    for (double s : realization.points_on_line[i])
      d.push_back(distance(realization.lines[i].at(s), origin));
  if (d.size() < k)
    throw std::out_of_range("nearest_point_distance: fewer than k materialized points");
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
  return d[k - 1];
}

}  // namespace blcp
