#pragma once

// Two independent derivative oracles for scalar expressions of (r, theta):
// forward-mode dual numbers and Richardson-extrapolated central differences.
//
// An expression is any callable that accepts two arguments of the same type
// and is generic over double and Dual<double>, e.g.
//
//   auto g = [](auto r, auto th) { using std::sin; return 1.0 - sin(th) * r; };

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thomflow/dual.hpp"
#include "thomflow/geom.hpp"

namespace thomflow {

enum class Variable { r, theta };

inline const char* to_string(Variable v) {
  return v == Variable::r ? "r" : "theta";
}

/// Partial derivative of `expr` at `p` by dual propagation.
template <typename Expr>
double dual_partial(const Expr& expr, const PolarPoint& p, Variable which) {
  using D = Dual<double>;
  const D r = which == Variable::r ? D::variable(p.r) : D(p.r);
  const D th = which == Variable::theta ? D::variable(p.theta) : D(p.theta);
  return expr(r, th).deriv;
}

struct FiniteDifference {
  double estimate = 0.0;
  double error_estimate = 0.0;
};

class StepUnderflow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Central differences at h0 and h0/2 combined by one Richardson step.
/// The error estimate is the gap between the extrapolated value and the
/// finer central difference.
template <typename Expr>
FiniteDifference fd_partial(const Expr& expr, const PolarPoint& p,
                            Variable which, double h0) {
  const double x = which == Variable::r ? p.r : p.theta;
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  if (!(h0 > floor)) {
    throw StepUnderflow("fd_partial: step " + std::to_string(h0) +
                        " below resolution at " + to_string(which) + " = " +
                        std::to_string(x));
  }
  auto at = [&](double offset) {
    return which == Variable::r ? expr(p.r + offset, p.theta)
                                : expr(p.r, p.theta + offset);
  };
  auto central = [&](double h) { return (at(h) - at(-h)) / (2.0 * h); };

  const double coarse = central(h0);
  const double fine = central(0.5 * h0);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  return {extrapolated, std::abs(extrapolated - fine)};
}

}  // namespace thomflow
