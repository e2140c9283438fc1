#pragma once

// Normalized gradient-descent flow x'(s) = -grad f / |grad f|.
//
// The flow is integrated against the conformal parameter tau, ds = r dtau.
// In the log-polar chart the unit-speed flow then reads
//
//   d rho / d tau = d_rho,  d theta / d tau = d_theta,  ds / d tau = e^{-rho},
//
// with (d_rho, d_theta) a unit vector, so the right-hand side is bounded no
// matter how close the orbit gets to the origin. The Cartesian chart uses the
// same parameter, dx/dtau = r u, for cross-checks on raw gradients.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thomflow/curve.hpp"
#include "thomflow/field.hpp"
#include "thomflow/geom.hpp"
#include "thomflow/signed_log.hpp"

namespace thomflow {

enum class Method { rk4_fixed, rk45_adaptive };

enum class FlowConvention { cartesian_euclidean, polar_euclidean, polar_paper };

enum class FlowSign { descent, ascent };

enum class StopReason {
  rho_max,
  critical_point,
  max_arclength,
  domain_exit,
  max_steps
};

inline const char* to_string(Method m) {
  return m == Method::rk4_fixed ? "rk4" : "rk45";
}

inline const char* to_string(FlowConvention c) {
  switch (c) {
    case FlowConvention::cartesian_euclidean: return "cartesian-euclidean";
    case FlowConvention::polar_euclidean: return "polar-euclidean";
    case FlowConvention::polar_paper: return "polar-paper";
  }
  return "?";
}

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::rho_max: return "rho_max";
    case StopReason::critical_point: return "critical_point";
    case StopReason::max_arclength: return "max_arclength";
    case StopReason::domain_exit: return "domain_exit";
    case StopReason::max_steps: return "max_steps";
  }
  return "?";
}

inline Convention gradient_convention(FlowConvention c) {
  return c == FlowConvention::polar_paper ? Convention::paper
                                          : Convention::euclidean;
}

/// Step sizes are in units of tau (ds = r dtau).
struct IntegratorConfig {
  Method method = Method::rk45_adaptive;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-2;
  double h_min = 1e-14;
  double h_max = 0.25;
  long max_steps = 1'000'000;
  FlowSign sign = FlowSign::descent;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
      throw std::invalid_argument("integrator: tolerances must be positive");
    }
    if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max)) {
      throw std::invalid_argument(
          "integrator: require 0 < h_min <= h_init <= h_max");
    }
    if (max_steps <= 0) {
      throw std::invalid_argument("integrator: max_steps must be positive");
    }
  }
};

struct StopCondition {
  double rho_max = 20.0;
  double grad_floor = default_grad_floor;
  double max_arclength = std::numeric_limits<double>::infinity();
  bool domain_exit = true;

  void validate() const {
    if (std::isnan(rho_max) || std::isnan(grad_floor) ||
        std::isnan(max_arclength)) {
      throw std::invalid_argument("stop condition: NaN threshold");
    }
    if (!std::isfinite(rho_max) && !(grad_floor > 0.0) &&
        !std::isfinite(max_arclength) && !domain_exit) {
      throw std::invalid_argument("stop condition: no condition set");
    }
  }
};

struct TrajectorySample {
  double s = 0.0;  // Euclidean arc length from the start
  LogPolarPoint q;
  SignedLogValue f_value;
  double factored_grad_magnitude = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StopReason stop_reason = StopReason::max_steps;
  FlowConvention convention = FlowConvention::polar_euclidean;
  FieldKind kind = FieldKind::spiral;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

namespace detail {

// State layout: log-polar charts use (rho, theta, s), Cartesian uses (x, y, s).
using State = std::array<double, 3>;

inline State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

class FlowSystem {
 public:
  FlowSystem(const FieldHandle& field, FlowConvention convention, FlowSign sign)
      : field_(field),
        convention_(convention),
        sign_(sign == FlowSign::descent ? 1.0 : -1.0) {}

  bool cartesian() const {
    return convention_ == FlowConvention::cartesian_euclidean;
  }

  State derivative(const State& y) const {
    if (!cartesian()) {
      const DirectionSample d = detail::direction(
          field_, {y[0], y[1]}, gradient_convention(convention_));
      return {sign_ * d.d_rho, sign_ * d.d_theta, std::exp(-y[0])};
    }
    const double r = std::hypot(y[0], y[1]);
    const auto [ux, uy] = cartesian_direction(y);
    return {sign_ * r * ux, sign_ * r * uy, r};
  }

  LogPolarPoint position(const State& y, double reference_theta) const {
    if (!cartesian()) return {y[0], y[1]};
    const PolarPoint p = to_polar(CartesianPoint{y[0], y[1]}, reference_theta);
    return to_log_polar(p);
  }

  State initial(const PolarPoint& x0) const {
    if (!cartesian()) {
      const LogPolarPoint q = to_log_polar(x0);
      return {q.rho, q.theta, 0.0};
    }
    const CartesianPoint c = to_cartesian(x0);
    return {c.x, c.y, 0.0};
  }

  double magnitude(const LogPolarPoint& q) const {
    if (!cartesian()) {
      return detail::direction(field_, q, gradient_convention(convention_))
          .factored_magnitude;
    }
    // Raw gradient, reported in the same factored units as the polar charts.
    const PolarGradient g = polar_partials(field_, to_polar(q));
    const SignedLogValue gr = g.f_r;
    const SignedLogValue gt = g.f_theta * SignedLogValue::from_log(q.rho);
    const double envelope = field_.is_spiral() ? -std::exp(q.rho) : 0.0;
    const double a = gr.sign == 0 ? 0.0 : std::exp(gr.log_magnitude - envelope);
    const double b = gt.sign == 0 ? 0.0 : std::exp(gt.log_magnitude - envelope);
    return std::hypot(a, b);
  }

 private:
  // Unit descent direction from raw (exp-expanded) polar partials.
  std::array<double, 2> cartesian_direction(const State& y) const {
    const double r = std::hypot(y[0], y[1]);
    const double theta = std::atan2(y[1], y[0]);
    PolarGradient g;
    try {
      g = polar_partials(field_, {r, theta});
    } catch (const DomainError&) {
      return {0.0, 0.0};
    }
    const double fr = g.f_r.to_double();
    const double ft = g.f_theta.to_double() / r;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double gx = fr * c - ft * s;
    const double gy = fr * s + ft * c;
    const double n = std::hypot(gx, gy);
    if (n == 0.0 || !std::isfinite(n)) return {0.0, 0.0};
    return {-gx / n, -gy / n};
  }

  FieldHandle field_;
  FlowConvention convention_;
  double sign_;
};

struct StepResult {
  State y;
  double error_norm = 0.0;  // <= 1 means acceptable
};

inline StepResult rk4_step(const FlowSystem& sys, const State& y, double h) {
  const State k1 = sys.derivative(y);
  const State k2 = sys.derivative(axpy(y, 0.5 * h, k1));
  const State k3 = sys.derivative(axpy(y, 0.5 * h, k2));
  const State k4 = sys.derivative(axpy(y, h, k3));
  State out;
  for (int i = 0; i < 3; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return {out, 0.0};
}

// Dormand-Prince 5(4).
inline StepResult dopri_step(const FlowSystem& sys, const State& y, double h,
                             double rel_tol, double abs_tol) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                   a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                   a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                   a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                   e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                   e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  const State k1 = sys.derivative(y);
  State t;
  for (int i = 0; i < 3; ++i) t[i] = y[i] + h * a21 * k1[i];
  const State k2 = sys.derivative(t);
  for (int i = 0; i < 3; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  const State k3 = sys.derivative(t);
  for (int i = 0; i < 3; ++i)
    t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  const State k4 = sys.derivative(t);
  for (int i = 0; i < 3; ++i)
    t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  const State k5 = sys.derivative(t);
  for (int i = 0; i < 3; ++i)
    t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                       a65 * k5[i]);
  const State k6 = sys.derivative(t);
  State out;
  for (int i = 0; i < 3; ++i)
    out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                         b6 * k6[i]);
  const State k7 = sys.derivative(out);

  double norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out[i]));
    norm = std::max(norm, std::abs(err) / scale);
  }
  return {out, norm};
}

}  // namespace detail

/// Integrates the normalized flow of `field` from x0 until the first
/// satisfied stop condition. Crossings of rho_max, max_arclength and the
/// domain boundary are refined by bisection on the last step so the final
/// sample sits on the threshold.
inline Trajectory integrate(const FieldHandle& field, const PolarPoint& x0,
                            FlowConvention convention,
                            const IntegratorConfig& cfg,
                            const StopCondition& stop) {
  cfg.validate();
  stop.validate();
  if (!(x0.r > 0.0) || x0.r > field.domain_radius) {
    throw DomainError("integrate: start radius " + std::to_string(x0.r) +
                      " outside the field domain");
  }
  if (convention == FlowConvention::cartesian_euclidean && field.is_spiral() &&
      stop.rho_max > std::log(100.0) + 1e-12) {
    throw std::invalid_argument(
        "integrate: cartesian-euclidean on a spiral field needs rho_max <= "
        "log(100); raw gradients underflow closer to the origin");
  }

  const detail::FlowSystem sys(field, convention, cfg.sign);
  const double domain_rho = field.is_spiral()
                                ? std::log(1.0 / field.domain_radius)
                                : -std::numeric_limits<double>::infinity();

  Trajectory traj;
  traj.convention = convention;
  traj.kind = field.kind;

  auto make_sample = [&](const detail::State& y, double reference_theta) {
    TrajectorySample smp;
    smp.s = y[2];
    smp.q = sys.position(y, reference_theta);
    // A refined domain-exit sample may sit a rounding error outside the disk.
    const LogPolarPoint inside{std::max(smp.q.rho, domain_rho), smp.q.theta};
    smp.f_value = eval(field, inside);
    smp.factored_grad_magnitude = sys.magnitude(inside);
    return smp;
  };

  // Signed distance past each threshold; >= 0 means the event has fired.
  auto rho_event = [&](const TrajectorySample& s) { return s.q.rho - stop.rho_max; };
  auto arc_event = [&](const TrajectorySample& s) {
    return s.s - stop.max_arclength;
  };
  auto exit_event = [&](const TrajectorySample& s) {
    return domain_rho - s.q.rho;
  };

  auto fired = [&](const TrajectorySample& s) -> std::optional<StopReason> {
    if (rho_event(s) >= 0.0) return StopReason::rho_max;
    if (arc_event(s) >= 0.0) return StopReason::max_arclength;
    if (stop.domain_exit && exit_event(s) > 0.0) return StopReason::domain_exit;
    if (s.factored_grad_magnitude < stop.grad_floor) {
      return StopReason::critical_point;
    }
    return std::nullopt;
  };

  detail::State y = sys.initial(x0);
  traj.samples.push_back(make_sample(y, x0.theta));
  if (auto reason = fired(traj.samples.back())) {
    traj.stop_reason = *reason;
    return traj;
  }

  auto take_step = [&](const detail::State& from, double step) {
    return cfg.method == Method::rk4_fixed
               ? detail::rk4_step(sys, from, step)
               : detail::dopri_step(sys, from, step, cfg.rel_tol, cfg.abs_tol);
  };

  double h = cfg.h_init;
  long attempts = 0;
  while (true) {
    if (attempts++ >= cfg.max_steps) {
      traj.stop_reason = StopReason::max_steps;
      return traj;
    }
    const detail::StepResult step = take_step(y, h);
    const bool finite = std::isfinite(step.y[0]) && std::isfinite(step.y[1]) &&
                        std::isfinite(step.y[2]);
    if (cfg.method == Method::rk45_adaptive &&
        (!finite || step.error_norm > 1.0)) {
      ++traj.steps_rejected;
      if (h <= cfg.h_min) {
        throw IntegrationError("integrate: step size underflow at s = " +
                                   std::to_string(y[2]),
                               traj);
      }
      const double factor =
          finite ? std::max(0.2, 0.9 * std::pow(step.error_norm, -0.2)) : 0.25;
      h = std::max(cfg.h_min, h * factor);
      continue;
    }
    if (!finite) {
      throw IntegrationError("integrate: non-finite state at s = " +
                                 std::to_string(y[2]),
                             traj);
    }

    const double prev_theta = traj.samples.back().q.theta;
    TrajectorySample next = make_sample(step.y, prev_theta);
    std::optional<StopReason> reason = fired(next);

    if (reason && *reason != StopReason::critical_point) {
      // Bisect the step length so the sample lands on the threshold.
      auto event = [&](const TrajectorySample& s) {
        switch (*reason) {
          case StopReason::rho_max: return rho_event(s);
          case StopReason::max_arclength: return arc_event(s);
          default: return exit_event(s);
        }
      };
      const double threshold = *reason == StopReason::rho_max ? stop.rho_max
                               : *reason == StopReason::max_arclength
                                   ? stop.max_arclength
                                   : domain_rho;
      const double landing_tol = 1e-13 * std::max(1.0, std::abs(threshold));
      double lo = 0.0;
      double hi = h;
      detail::State best = step.y;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const detail::State trial = take_step(y, mid).y;
        const TrajectorySample ts = make_sample(trial, prev_theta);
        if (event(ts) >= 0.0) {
          hi = mid;
          best = trial;
          if (event(ts) <= landing_tol) break;
        } else {
          lo = mid;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
      }
      next = make_sample(best, prev_theta);
    }

    if (next.s < traj.samples.back().s) next.s = traj.samples.back().s;
    traj.samples.push_back(next);
    ++traj.steps_accepted;
    y = {step.y[0], step.y[1], step.y[2]};
    if (reason) {
      traj.stop_reason = *reason;
      return traj;
    }

    if (cfg.method == Method::rk45_adaptive) {
      const double factor =
          step.error_norm == 0.0
              ? 5.0
              : std::clamp(0.9 * std::pow(step.error_norm, -0.2), 0.2, 5.0);
      h = std::clamp(h * factor, cfg.h_min, cfg.h_max);
    }
  }
}

/// Unsigned angle (radians) between the descent direction at gamma(t) and
/// the tangent of gamma there, with log t = rho_t. Both vectors are compared
/// in the log-polar chart, which is conformal, so the angle is the Euclidean
/// one. Throws CriticalPointReached below `grad_floor`.
inline double tangency_residual_log(const FieldHandle& field, Convention c,
                                    double rho_t,
                                    double grad_floor = default_grad_floor) {
  const LogPolarPoint q = gamma_point_log(rho_t);
  const DirectionSample d = direction_field(field, q, c, grad_floor);
  // gamma' in (rho, theta): d/dt (log t, log log t) ~ (1, 1 / log t)
  const double tr = 1.0;
  const double tt = 1.0 / rho_t;
  const double cross = d.d_rho * tt - d.d_theta * tr;
  const double dot = d.d_rho * tr + d.d_theta * tt;
  return std::abs(std::atan2(cross, dot));
}

inline double tangency_residual(const FieldHandle& field, Convention c,
                                GammaParam t,
                                double grad_floor = default_grad_floor) {
  return tangency_residual_log(field, c, std::log(t.t()), grad_floor);
}

}  // namespace thomflow
