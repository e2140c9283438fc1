#pragma once

// Cost fields on the punctured disk and their descent directions.
//
// The spiral field is
//
//   f(r, theta) = exp(-1/r) * g(r, theta),
//   g = 1 - a(r) sin(phi),   phi = theta - log log(1/r),
//   a(r) = L / (1 + r^2 L^2),   L = log(1/r),
//
// defined for 0 < r <= 1/2. f vanishes on the curve phi = 0 only through the
// sine, so f = exp(-1/r) there. All quantities carrying exp(-1/r) are kept as
// SignedLogValue; the direction field cancels that factor before it is ever
// formed, so it stays finite however close to the origin we get.
//
// Three kinds are provided:
//   spiral                  partials of f by dual-number differentiation of g
//   paper_displayed_spiral  the same f, but with the radial partial taken
//                           from the hand-derived two-line display, whose
//                           cos-term carries 1/(r^2 L) instead of the chain
//                           rule's 1/(r L)
//   quadratic_bowl          scale * r^2 / 2, a radial control

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thomflow/curve.hpp"
#include "thomflow/dual.hpp"
#include "thomflow/geom.hpp"
#include "thomflow/signed_log.hpp"

namespace thomflow {

enum class FieldKind { spiral, quadratic_bowl, paper_displayed_spiral };

/// Which polar gradient the flow follows.
///   euclidean: (f_r, f_theta / r) in the orthonormal frame, i.e. the
///              coordinate flow r' = -f_r, theta' = -f_theta / r^2
///   paper:     coordinate flow r' = -f_r, theta' = -f_theta / r
enum class Convention { euclidean, paper };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::spiral: return "spiral";
    case FieldKind::quadratic_bowl: return "bowl";
    case FieldKind::paper_displayed_spiral: return "paper-displayed";
  }
  return "?";
}

inline const char* to_string(Convention c) {
  return c == Convention::euclidean ? "euclidean" : "paper";
}

inline constexpr double spiral_domain_radius = 0.5;

struct FieldHandle {
  FieldKind kind = FieldKind::spiral;
  double domain_radius = spiral_domain_radius;
  double scale = 1.0;  // f is multiplied by this positive constant

  static FieldHandle spiral() { return {FieldKind::spiral, spiral_domain_radius, 1.0}; }
  static FieldHandle paper_displayed() {
    return {FieldKind::paper_displayed_spiral, spiral_domain_radius, 1.0};
  }
  static FieldHandle bowl(double scale = 1.0) {
    return {FieldKind::quadratic_bowl, std::numeric_limits<double>::infinity(),
            scale};
  }

  bool is_spiral() const { return kind != FieldKind::quadratic_bowl; }
};

struct PolarGradient {
  SignedLogValue f_r;
  SignedLogValue f_theta;
};

/// Unit descent direction in the log-polar chart, per unit of the conformal
/// parameter tau with ds = r dtau. (d_rho, d_theta) has unit Euclidean norm,
/// which is unit speed under the chart metric e^{-2 rho}(d rho^2 + d theta^2)
/// after the conformal rescaling.
struct DirectionSample {
  double d_rho = 0.0;
  double d_theta = 0.0;
  double factored_magnitude = 0.0;  // |grad f| / exp(-1/r) (bowl: |grad f|)
};

class CriticalPointReached : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Generic building blocks, valid for double and Dual<double>.
namespace spiral_terms {

using std::cos;
using std::exp;
using std::log;
using std::sin;

/// a(r) with L = log(1/r).
template <typename T>
T amplitude(const T& r) {
  const T L = -log(r);
  return L / (1.0 + r * r * L * L);
}

template <typename T>
T phase(const T& r, const T& theta) {
  return theta - log(-log(r));
}

/// g(r, theta) = 1 - a(r) sin(theta - log log(1/r)).
template <typename T>
T modulation(const T& r, const T& theta) {
  return 1.0 - amplitude(r) * sin(phase(r, theta));
}

/// f itself, for the representable regime (r >~ 1/700).
template <typename T>
T value(const T& r, const T& theta) {
  return exp(-1.0 / r) * modulation(r, theta);
}

/// b(r) = exp(-1/r) L^2 / (r^2 (1 + r^2 L^2)), representable regime.
template <typename T>
T scaling(const T& r) {
  const T L = -log(r);
  return exp(-1.0 / r) * L * L / (r * r * (1.0 + r * r * L * L));
}

// Log-polar forms, rho = log(1/r).
template <typename T>
T amplitude_lp(const T& rho) {
  const T r = exp(-rho);
  return rho / (1.0 + r * r * rho * rho);
}

template <typename T>
T modulation_lp(const T& rho, const T& theta) {
  return 1.0 - amplitude_lp(rho) * sin(theta - log(rho));
}

}  // namespace spiral_terms

namespace detail {

inline void check_domain(const FieldHandle& h, double r) {
  if (!(r > 0.0)) {
    throw DomainError("field: radius must be positive, got " +
                      std::to_string(r));
  }
  if (r > h.domain_radius) {
    throw DomainError("field: radius " + std::to_string(r) +
                      " outside domain radius " +
                      std::to_string(h.domain_radius));
  }
}

inline void check_domain_lp(const FieldHandle& h, double rho) {
  if (std::isnan(rho)) throw DomainError("field: rho is NaN");
  if (h.is_spiral() && rho < std::log(1.0 / h.domain_radius)) {
    throw DomainError("field: rho " + std::to_string(rho) +
                      " outside domain (rho >= log 2)");
  }
}

inline SignedLogValue scaled(const FieldHandle& h, SignedLogValue v) {
  return h.scale == 1.0 ? v : v * h.scale;
}

}  // namespace detail

/// f at a polar point, log f = -1/r + log|g|.
inline SignedLogValue eval(const FieldHandle& h, const PolarPoint& p) {
  detail::check_domain(h, p.r);
  if (h.kind == FieldKind::quadratic_bowl) {
    return SignedLogValue::from_double(h.scale * 0.5 * p.r * p.r);
  }
  const double g = spiral_terms::modulation(p.r, p.theta);
  return detail::scaled(h, SignedLogValue::from_double(g) *
                               SignedLogValue::from_log(-1.0 / p.r));
}

/// f at a log-polar point; valid for arbitrarily large rho.
inline SignedLogValue eval(const FieldHandle& h, const LogPolarPoint& q) {
  detail::check_domain_lp(h, q.rho);
  if (h.kind == FieldKind::quadratic_bowl) {
    return detail::scaled(h, SignedLogValue::from_log(-2.0 * q.rho - std::log(2.0)));
  }
  const double g = spiral_terms::modulation_lp(q.rho, q.theta);
  return detail::scaled(h, SignedLogValue::from_double(g) *
                               SignedLogValue::from_log(-std::exp(q.rho)));
}

/// The closed forms displayed for the spiral field on the curve.
enum class PaperExpr { a, b, fr_on_gamma, ftheta_on_gamma };

inline const char* to_string(PaperExpr e) {
  switch (e) {
    case PaperExpr::a: return "a";
    case PaperExpr::b: return "b";
    case PaperExpr::fr_on_gamma: return "fr_on_gamma";
    case PaperExpr::ftheta_on_gamma: return "ftheta_on_gamma";
  }
  return "?";
}

namespace detail {

// L = log(1/r), r2L2 = r^2 L^2, log_r = log r, neg_inv_r = -1/r.
inline SignedLogValue displayed_expr(PaperExpr e, double L, double r2L2,
                                     double log_r, double neg_inv_r) {
  const double denom = 1.0 + r2L2;
  switch (e) {
    case PaperExpr::a:
      return SignedLogValue::from_double(L / denom);
    case PaperExpr::b:
      // (1/r^2) e^{-1/r} L^2 / (1 + r^2 L^2)
      return {1, -2.0 * log_r + neg_inv_r + 2.0 * std::log(L) - std::log1p(r2L2)};
    case PaperExpr::fr_on_gamma:
      // e^{-1/r} L^2 / (1 + r^2 L^2)
      return {1, neg_inv_r + 2.0 * std::log(L) - std::log1p(r2L2)};
    case PaperExpr::ftheta_on_gamma:
      // -e^{-1/r} L / (1 + r^2 L^2)
      return {-1, neg_inv_r + std::log(L) - std::log1p(r2L2)};
  }
  return {};
}

}  // namespace detail

/// The displayed closed form `e` at radius r in (0, 1/2].
inline SignedLogValue paper_expr(PaperExpr e, double r) {
  if (!(r > 0.0) || r > spiral_domain_radius) {
    throw DomainError("paper_expr: r must lie in (0, 1/2], got " +
                      std::to_string(r));
  }
  const double L = -std::log(r);
  return detail::displayed_expr(e, L, r * r * L * L, std::log(r), -1.0 / r);
}

/// Same closed forms at rho = log(1/r), for radii below double range.
inline SignedLogValue paper_expr_log(PaperExpr e, double rho) {
  if (!(rho >= std::log(2.0))) {
    throw DomainError("paper_expr_log: rho must be >= log 2, got " +
                      std::to_string(rho));
  }
  const double r = std::exp(-rho);
  return detail::displayed_expr(e, rho, r * r * rho * rho, -rho,
                                -std::exp(rho));
}

/// Partial derivatives (f_r, f_theta) at p.
///
/// For the spiral kind both come from dual propagation through g and are
/// assembled as f_r = e^{-1/r}(g / r^2 + g_r), f_theta = e^{-1/r} g_theta.
/// The as-displayed kind uses its own radial expression
///   e^{-1/r}(g / r^2 - a'(r) sin(phi) - a(r) cos(phi) / (r^2 L)),
/// with a'(r) still from dual propagation, and f_theta = -e^{-1/r} a cos(phi).
inline PolarGradient polar_partials(const FieldHandle& h, const PolarPoint& p) {
  detail::check_domain(h, p.r);
  using D = Dual<double>;
  if (h.kind == FieldKind::quadratic_bowl) {
    return {SignedLogValue::from_double(h.scale * p.r), SignedLogValue::zero()};
  }
  const SignedLogValue envelope = SignedLogValue::from_log(-1.0 / p.r);
  const double r2 = p.r * p.r;
  const double log_r2 = 2.0 * std::log(p.r);

  PolarGradient out;
  if (h.kind == FieldKind::spiral) {
    const D g_r = spiral_terms::modulation(D::variable(p.r), D(p.theta));
    const D g_t = spiral_terms::modulation(D(p.r), D::variable(p.theta));
    // r^2 * (g / r^2 + g_r)
    const double inner = g_r.value + r2 * g_r.deriv;
    out.f_r = SignedLogValue::from_double(inner) *
              SignedLogValue::from_log(-log_r2) * envelope;
    out.f_theta = SignedLogValue::from_double(g_t.deriv) * envelope;
  } else {
    const double L = -std::log(p.r);
    const D a = spiral_terms::amplitude(D::variable(p.r));
    const double phi = spiral_terms::phase(p.r, p.theta);
    const double r2L2 = r2 * L * L;
    const double half_sin = std::sin(0.5 * phi);
    // g - a cos(phi) / L, rearranged so it has no cancellation at phi = 0:
    // (r^2 L^2 + 2 sin^2(phi/2)) / (1 + r^2 L^2) - a sin(phi)
    const double g_minus_cos =
        (r2L2 + 2.0 * half_sin * half_sin) / (1.0 + r2L2) -
        a.value * std::sin(phi);
    const double inner = g_minus_cos - r2 * a.deriv * std::sin(phi);
    out.f_r = SignedLogValue::from_double(inner) *
              SignedLogValue::from_log(-log_r2) * envelope;
    out.f_theta =
        SignedLogValue::from_double(-a.value * std::cos(phi)) * envelope;
  }
  out.f_r = detail::scaled(h, out.f_r);
  out.f_theta = detail::scaled(h, out.f_theta);
  return out;
}

namespace detail {

// Orthonormal-frame gradient with every positive common factor removed:
// (W_r, W_theta) = grad / (scale * e^{-1/r} / r^2) for spiral kinds.
// log_factor is the log of the removed factor without the envelope e^{-1/r}.
struct ScaledGradient {
  double w_r = 0.0;
  double w_theta = 0.0;
  double log_factor = 0.0;
};

inline ScaledGradient scaled_gradient(const FieldHandle& h,
                                      const LogPolarPoint& q, Convention c) {
  using D = Dual<double>;
  if (h.kind == FieldKind::quadratic_bowl) {
    // grad = scale * (r, 0)
    return {1.0, 0.0, std::log(h.scale) - q.rho};
  }
  const double r = std::exp(-q.rho);
  const double theta_weight = c == Convention::euclidean ? r : r * r;
  const D g_rho = spiral_terms::modulation_lp(D::variable(q.rho), D(q.theta));
  const D g_t = spiral_terms::modulation_lp(D(q.rho), D::variable(q.theta));

  ScaledGradient w;
  // r^2 f_r / e^{-1/r} = g + r^2 g_r = g - r g_rho
  if (h.kind == FieldKind::spiral) {
    w.w_r = g_rho.value - r * g_rho.deriv;
  } else {
    const D a = spiral_terms::amplitude_lp(D::variable(q.rho));
    const double phi = q.theta - std::log(q.rho);
    const double r2L2 = r * r * q.rho * q.rho;
    const double half_sin = std::sin(0.5 * phi);
    // r^2 a'(r) = -r a_rho
    w.w_r = (r2L2 + 2.0 * half_sin * half_sin) / (1.0 + r2L2) -
            a.value * std::sin(phi) + r * a.deriv * std::sin(phi);
  }
  w.w_theta = theta_weight * g_t.deriv;
  // Both conventions divide out e^{-1/r} / r^2.
  w.log_factor = std::log(h.scale) + 2.0 * q.rho;
  return w;
}

}  // namespace detail

inline constexpr double default_grad_floor = 1e-300;

namespace detail {

// No domain check: the analytic formulas extend past r = 1/2, which lets
// integrator stages step slightly outside the disk.
inline DirectionSample direction(const FieldHandle& h, const LogPolarPoint& q,
                                 Convention c) {
  const ScaledGradient w = scaled_gradient(h, q, c);
  const double norm = std::hypot(w.w_r, w.w_theta);
  DirectionSample out;
  if (norm == 0.0 || !std::isfinite(norm)) return out;
  out.d_rho = w.w_r / norm;
  out.d_theta = -w.w_theta / norm;
  out.factored_magnitude = std::exp(std::log(norm) + w.log_factor);
  return out;
}

}  // namespace detail

/// Descent direction without the critical-point check. A vanishing gradient
/// yields a zero direction and zero magnitude.
inline DirectionSample direction_field_unchecked(const FieldHandle& h,
                                                 const LogPolarPoint& q,
                                                 Convention c) {
  detail::check_domain_lp(h, q.rho);
  return detail::direction(h, q, c);
}

/// Unit descent direction at q under convention c. Throws
/// CriticalPointReached when the factored gradient magnitude is below
/// `grad_floor`.
inline DirectionSample direction_field(const FieldHandle& h,
                                       const LogPolarPoint& q, Convention c,
                                       double grad_floor = default_grad_floor) {
  const DirectionSample d = direction_field_unchecked(h, q, c);
  if (!(d.factored_magnitude >= grad_floor)) {
    throw CriticalPointReached(
        "direction_field: factored gradient magnitude " +
        std::to_string(d.factored_magnitude) + " below floor at rho = " +
        std::to_string(q.rho));
  }
  return d;
}

}  // namespace thomflow
