#pragma once

// Coordinate charts for the plane: Cartesian, polar and log-polar.
//
// Angles are carried unwrapped. Reduction to the principal branch only
// happens when leaving the Cartesian chart; everything downstream keeps the
// lifted value so that winding can be counted.

#include <cmath>
#include <numbers>

namespace thomflow {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Polar point with r > 0 and an unwrapped angle.
struct PolarPoint {
  double r = 1.0;
  double theta = 0.0;
};

/// Log-polar point, rho = log(1/r). Canonical state for dynamics near the
/// origin: rho stays moderate long after r has left floating-point range.
struct LogPolarPoint {
  double rho = 0.0;
  double theta = 0.0;
};

inline CartesianPoint to_cartesian(const PolarPoint& p) {
  return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

/// Representative of `new_principal` + 2*pi*k closest to `prev_unwrapped`.
inline double lift_angle(double prev_unwrapped, double new_principal) {
  const double k = std::round((prev_unwrapped - new_principal) / two_pi);
  return new_principal + two_pi * k;
}

/// Principal-branch angle in (-pi, pi].
inline PolarPoint to_polar(const CartesianPoint& c) {
  return {std::hypot(c.x, c.y), std::atan2(c.y, c.x)};
}

/// Polar conversion lifted against a reference angle.
inline PolarPoint to_polar(const CartesianPoint& c, double reference_theta) {
  PolarPoint p = to_polar(c);
  p.theta = lift_angle(reference_theta, p.theta);
  return p;
}

inline LogPolarPoint to_log_polar(const PolarPoint& p) {
  return {-std::log(p.r), p.theta};
}

inline PolarPoint to_polar(const LogPolarPoint& q) {
  return {std::exp(-q.rho), q.theta};
}

inline CartesianPoint to_cartesian(const LogPolarPoint& q) {
  return to_cartesian(to_polar(q));
}

/// Euclidean distance between two log-polar points, stable for tiny radii
/// and for nearly coincident points.
inline double chord_length(const LogPolarPoint& a, const LogPolarPoint& b) {
  const double ra = std::exp(-a.rho);
  const double dr = -ra * std::expm1(a.rho - b.rho);
  const double geo_mean = std::exp(-0.5 * (a.rho + b.rho));
  const double half = std::sin(0.5 * (a.theta - b.theta));
  // |a-b|^2 = (ra-rb)^2 + 4 ra rb sin^2(dtheta/2)
  return std::hypot(dr, 2.0 * geo_mean * half);
}

inline double distance(const CartesianPoint& a, const CartesianPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace thomflow
