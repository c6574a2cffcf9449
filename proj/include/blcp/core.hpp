#pragma once

// Domain types shared by every module: line parameters, process models,
// realizations and plane points.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace blcp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown when an evaluator cannot reach its requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

inline double distance(PlanePoint a, PlanePoint b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// The test point at distance r0 from the origin, placed on the positive x-axis.
inline PlanePoint test_point(double r0) { return {r0, 0.0}; }

/// Generating point of the line {x cos(theta) + y sin(theta) = r}.
/// Canonical domain: theta in [0, pi), r signed.
struct LineParams {
  double theta = 0.0;
  double r = 0.0;

  PlanePoint normal() const { return {std::cos(theta), std::sin(theta)}; }
  PlanePoint direction() const { return {-std::sin(theta), std::cos(theta)}; }
  PlanePoint foot() const { return {r * std::cos(theta), r * std::sin(theta)}; }

  /// Point at signed offset s along the line, measured from the foot of the normal.
  PlanePoint at(double s) const {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    return {r * c - s * sn, r * sn + s * c};
  }

  /// Offset of the orthogonal projection of p onto the line.
  double offset_of(PlanePoint p) const {
    return -p.x * std::sin(theta) + p.y * std::cos(theta);
  }

  /// Unsigned distance from p to the line.
  double distance_to(PlanePoint p) const {
    return std::abs(p.x * std::cos(theta) + p.y * std::sin(theta) - r);
  }

  friend bool operator==(const LineParams&, const LineParams&) = default;
};

/// Generating point on the alternative cylinder [0, 2pi) x [0, R].
struct PolarLineParams {
  double phi = 0.0;
  double rho = 0.0;
};

/// [0, 2pi) x [0, R] -> [0, pi) x [-R, R]. Both cylinders have measure 2 pi R.
inline LineParams to_canonical(PolarLineParams p) {
  double phi = std::fmod(p.phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kPi) return {phi - kPi, -p.rho};
  return {phi, p.rho};
}

inline PolarLineParams to_polar(LineParams l) {
  if (l.r < 0.0) return {l.theta + kPi, -l.r};
  return {l.theta, l.r};
}

/// Rebuilds the canonical parameters of the line through two distinct points.
inline LineParams line_through(PlanePoint p, PlanePoint q) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) throw std::invalid_argument("line_through: coincident points");
  double nx = -dy / len;
  double ny = dx / len;
  double theta = std::atan2(ny, nx);
  if (theta < 0.0) {
    theta += kPi;
    nx = -nx;
    ny = -ny;
  }
  if (theta >= kPi) {
    theta -= kPi;
    nx = -nx;
    ny = -ny;
  }
  return {theta, nx * p.x + ny * p.y};
}

/// Binomial line process: n_lines i.i.d. uniform generating points on [0, pi) x [-R, R].
struct BlpModel {
  int n_lines = 10;
  double radius = 50.0;

  void validate() const {
    if (n_lines < 1) throw std::invalid_argument("BlpModel: n_lines must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("BlpModel: radius must be positive and finite");
  }
  double domain_measure() const { return kTwoPi * radius; }
};

/// Binomial line Cox process: a 1-D PPP of intensity lambda on each BLP line.
struct BlcpModel {
  BlpModel blp;
  double lambda = 0.1;

  void validate() const {
    blp.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("BlcpModel: lambda must be positive and finite");
  }
  int n_lines() const { return blp.n_lines; }
  double radius() const { return blp.radius; }
};

/// One sampled process. Points are stored per line as sorted offsets along the
/// line; only points inside the ball B(center, materialized_radius) exist.
struct Realization {
  std::vector<LineParams> lines;
  std::vector<std::vector<double>> points_on_line;
  PlanePoint center{};
  double materialized_radius = 0.0;

  std::size_t point_count() const {
    std::size_t n = 0;
    for (const auto& p : points_on_line) n += p.size();
    return n;
  }

  std::vector<PlanePoint> points() const {
    std::vector<PlanePoint> out;
    out.reserve(point_count());
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (double s : points_on_line[i]) out.push_back(lines[i].at(s));
    return out;
  }

  friend bool operator==(const Realization&, const Realization&) = default;
};

}  // namespace blcp
