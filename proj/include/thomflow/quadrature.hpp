#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
// The worst panel is bisected until the summed error estimate meets the
// tolerance or the panel budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace thomflow {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int panels = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1] (symmetric), odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kronrod_w[7];
  double gauss = fc * gauss_w[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_x[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_w[j] * sum;
    if (j % 2 == 1) gauss += gauss_w[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integral of f over [a, b] to absolute tolerance `tol`. The endpoints are
/// never evaluated, so integrable endpoint singularities are acceptable.
/// Throws QuadratureError when the tolerance cannot be met within
/// `max_panels` subintervals.
template <typename F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double tol,
                                    int max_panels = 4000) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature: tol must be > 0");
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gauss_kronrod(f, a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  int count = 1;

  auto target = [&] {
    // Below a few ulps of the result no subdivision can help.
    return std::max(tol, 50.0 * std::numeric_limits<double>::epsilon() *
                             std::abs(value));
  };

  while (error > target()) {
    if (count >= max_panels) {
      throw QuadratureError("quadrature: error estimate " +
                            std::to_string(error) + " above tolerance " +
                            std::to_string(tol) + " after " +
                            std::to_string(count) + " panels");
    }
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Panel left = detail::gauss_kronrod(f, worst.a, mid);
    const detail::Panel right = detail::gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }

  // Re-sum to shed drift from the incremental updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_error += panels.top().error;
    panels.pop();
  }
  return {total, total_error, count};
}

}  // namespace thomflow
