#pragma once

// The spiral gamma(t) = (r, theta) = (1/t, log log t), t >= 2.
//
// gamma reaches the origin with finite length, its remaining length is
// asymptotic to its distance from the origin, and its polar angle grows
// without bound. Parameters too large for a double are passed as log t.

#include <cmath>
#include <stdexcept>
#include <string>

#include "thomflow/geom.hpp"
#include "thomflow/quadrature.hpp"

namespace thomflow {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Curve parameter t >= 2.
class GammaParam {
 public:
  explicit GammaParam(double t) : t_(t) {
    if (!(t >= 2.0)) {
      throw DomainError("gamma parameter must satisfy t >= 2, got " +
                        std::to_string(t));
    }
  }
  double t() const { return t_; }

 private:
  double t_;
};

inline PolarPoint gamma_point(GammaParam t) {
  return {1.0 / t.t(), std::log(std::log(t.t()))};
}

/// gamma in the log-polar chart for log t = rho_t: (rho, theta) = (rho_t,
/// log rho_t). Valid for any rho_t >= log 2.
inline LogPolarPoint gamma_point_log(double rho_t) {
  if (!(rho_t >= std::log(2.0))) {
    throw DomainError("gamma log-parameter must be >= log 2, got " +
                      std::to_string(rho_t));
  }
  return {rho_t, std::log(rho_t)};
}

/// |gamma'(t)| = (1/t^2) sqrt(1 + 1/log^2 t).
inline double gamma_speed(GammaParam t) {
  const double lt = std::log(t.t());
  const double inv_t = 1.0 / t.t();
  return inv_t * inv_t * std::sqrt(1.0 + 1.0 / (lt * lt));
}

/// Unwrapped angle of the unit secant gamma(t)/|gamma(t)|, for log t = rho_t.
inline double secant_angle_closed_form(double rho_t) {
  return std::log(rho_t);
}

struct TailLengthResult {
  double s = 2.0;
  double length = 0.0;
  double abs_error_estimate = 0.0;
};

inline constexpr double default_tail_tol = 1e-10;

/// Remaining length of gamma beyond parameter s, i.e. the integral of
/// gamma_speed over [s, inf). With u = 1/t the integral becomes
/// int_0^{1/s} sqrt(1 + 1/log^2 u) du, whose integrand tends to 1 at u = 0.
inline TailLengthResult tail_length(double s, double tol = default_tail_tol) {
  if (!(s >= 2.0)) {
    throw DomainError("tail_length requires s >= 2, got " + std::to_string(s));
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tail_length: tol must be > 0");
  auto integrand = [](double u) {
    const double lu = std::log(u);
    return std::sqrt(1.0 + 1.0 / (lu * lu));
  };
  const QuadratureResult q = integrate_adaptive(integrand, 0.0, 1.0 / s, tol);
  return {s, q.value, q.abs_error_estimate};
}

/// Upper bound 1/s + 1/(s log^2 s) on the tail length.
inline double tail_length_upper_bound(double s) {
  const double ls = std::log(s);
  return (1.0 + 1.0 / (ls * ls)) / s;
}

}  // namespace thomflow
