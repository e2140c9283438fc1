#pragma once

// Executable ledger of the counterexample's statements.
//
// Each claim evaluates one displayed identity, bound or limit against an
// independent route (closed form vs quadrature, displayed formula vs dual
// numbers, closed-form samples vs the analysis pipeline). Claims of kind
// `check` carry a pass/fail verdict; claims of kind `report` only record the
// residual, because the statement they probe is either internally
// inconsistent as displayed or not expected to hold for the oracle field.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "thomflow/analysis.hpp"
#include "thomflow/curve.hpp"
#include "thomflow/diffcheck.hpp"
#include "thomflow/field.hpp"
#include "thomflow/flow.hpp"
#include "thomflow/signed_log.hpp"

namespace thomflow {

enum class ClaimKind { check, report };
enum class Verdict { pass, fail, info };

inline const char* to_string(ClaimKind k) {
  return k == ClaimKind::check ? "assert" : "report";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::info: return "info";
  }
  return "?";
}

using ClaimValue =
    std::variant<std::monostate, double, std::vector<double>, std::string, bool>;

struct ClaimRecord {
  std::string id;
  ClaimKind kind = ClaimKind::check;
  std::string paper_ref;  // formula anchor of the statement
  std::string inputs;
  ClaimValue paper_value;
  ClaimValue oracle_value;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::fail;
  std::string diagnostic;
  std::vector<std::pair<std::string, ClaimValue>> details;
};

/// Parameter grids shared by the claims. Defaults: 100 log-spaced radii in
/// [1e-3, 1/2] for formula claims, 50 log-spaced parameters in [2, 1e6] for
/// curve claims.
struct ClaimGrid {
  int r_count = 100;
  double r_min = 1e-3;
  double r_max = 0.5;
  double r_min_representable = 0.05;  // raw-value comparisons (C7)
  int t_count = 50;
  double t_min = 2.0;
  double t_max = 1e6;
  int speed_count = 1000;
  double speed_t_max = 1e9;
  double flow_rho_max = 20.0;
};

inline const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids = {
      "C1", "C2", "C3", "C4", "C5", "C6", "C7",
      "C8", "C9", "C10", "C11", "C12", "C13", "C14"};
  return ids;
}

namespace claims_detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (n <= 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline ClaimValue series_or_scalar(std::vector<double> v) {
  if (v.size() == 1) return v.front();
  return v;
}

inline void settle(ClaimRecord& rec, bool ok) {
  if (rec.kind == ClaimKind::report) {
    rec.verdict = Verdict::info;
  } else {
    rec.verdict = ok ? Verdict::pass : Verdict::fail;
  }
}

// Point on gamma at radius r: theta = log log(1/r).
inline PolarPoint on_gamma(double r) { return {r, std::log(-std::log(r))}; }

inline ClaimRecord make_record(std::string id, ClaimKind kind, std::string ref) {
  ClaimRecord rec;
  rec.id = std::move(id);
  rec.kind = kind;
  rec.paper_ref = std::move(ref);
  return rec;
}

inline ClaimRecord c1(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C1", ClaimKind::check, "r(t)=\\frac{1}{t} \\rightarrow 0");
  rec.inputs = "t log-spaced grid plus log-chart rho in [log 2, 800]";
  rec.tolerance = 1e-15;
  std::vector<double> radii;
  double residual = 0.0;
  bool decreasing = true;
  for (double t : log_grid(g.t_min, g.t_max, g.t_count)) {
    const double r = gamma_point(GammaParam(t)).r;
    if (!radii.empty() && !(r < radii.back())) decreasing = false;
    residual = std::max(residual, std::abs(r * t - 1.0));
    radii.push_back(r);
  }
  // Beyond double range of t the radius keeps shrinking to exactly 0.
  double prev = std::numeric_limits<double>::infinity();
  for (double rho : log_grid(std::log(2.0), 800.0, 40)) {
    const double r = std::exp(-gamma_point_log(rho).rho);
    if (!(r < prev) && !(r == 0.0 && prev == 0.0)) decreasing = false;
    prev = r;
  }
  rec.oracle_value = series_or_scalar(radii);
  rec.residual = residual;
  rec.details.emplace_back("strictly_decreasing", decreasing);
  rec.details.emplace_back("radius_at_rho_800", prev);
  settle(rec, decreasing && residual <= rec.tolerance && prev == 0.0);
  return rec;
}

inline ClaimRecord c2(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C2", ClaimKind::check, "\\sqrt{r'(t)^2 + r(t)^2 \\theta'(t)^2}");
  rec.inputs = std::to_string(g.speed_count) + " log-spaced t in [" +
               std::to_string(g.t_min) + ", " + std::to_string(g.speed_t_max) +
               "]; oracle: dual-number derivative of (cos(theta)/t, sin(theta)/t)";
  rec.tolerance = 1e-13;
  double identity = 0.0;
  double cross = 0.0;
  for (double t : log_grid(g.t_min, g.speed_t_max, g.speed_count)) {
    const double v = gamma_speed(GammaParam(t));
    const double lt = std::log(t);
    identity = std::max(identity,
                        std::abs(v * v * t * t * t * t / (1.0 + 1.0 / (lt * lt)) - 1.0));
    using D = Dual<double>;
    const D tt = D::variable(t);
    const D theta = log(log(tt));
    const D x = cos(theta) / tt;
    const D y = sin(theta) / tt;
    const double oracle = std::hypot(x.deriv, y.deriv);
    cross = std::max(cross, std::abs(v / oracle - 1.0));
  }
  rec.residual = std::max(identity, cross);
  rec.details.emplace_back("identity_residual", identity);
  rec.details.emplace_back("dual_oracle_residual", cross);
  settle(rec, rec.residual <= rec.tolerance);
  return rec;
}

inline ClaimRecord c3(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C3", ClaimKind::check, "\\frac{1}{s} + \\frac{1}{s}\\frac{1}{\\log^2(s)}");
  rec.inputs = "s log-spaced grid; quadrature tolerance 1e-12/s";
  rec.tolerance = 0.0;
  std::vector<double> bounds;
  std::vector<double> lengths;
  double violation = 0.0;
  for (double s : log_grid(g.t_min, g.t_max, g.t_count)) {
    const TailLengthResult tl = tail_length(s, 1e-12 / s);
    const double upper = tail_length_upper_bound(s);
    violation = std::max(violation, std::max(0.0, 1.0 / s - tl.length) * s);
    violation = std::max(violation, std::max(0.0, tl.length - upper) * s);
    bounds.push_back(upper);
    lengths.push_back(tl.length);
  }
  rec.paper_value = series_or_scalar(bounds);
  rec.oracle_value = series_or_scalar(lengths);
  rec.residual = violation;
  const bool finite = std::isfinite(tail_length(2.0).length);
  rec.details.emplace_back("total_length_from_t_2", tail_length(2.0).length);
  settle(rec, finite && violation <= rec.tolerance);
  return rec;
}

inline ClaimRecord c4(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C4", ClaimKind::check, "1 + \\frac{1}{\\log^2(s)} \\rightarrow 1");
  rec.inputs =
      "quadrature ratio s*sigma(s) on the s grid; chord-sum ratio on 4000 "
      "closed-form samples of gamma (discretization slack 1e-4)";
  rec.tolerance = 1e-4;
  std::vector<double> ratios;
  std::vector<double> caps;
  double violation = 0.0;
  bool monotone = true;
  for (double s : log_grid(g.t_min, g.t_max, g.t_count)) {
    const double ratio = tail_length(s, 1e-12 / s).length * s;
    const double ls = std::log(s);
    const double cap = 1.0 + 1.0 / (ls * ls);
    violation = std::max({violation, 1.0 - ratio, ratio - cap});
    if (!ratios.empty() && ratio > ratios.back() * (1.0 + 1e-12)) monotone = false;
    ratios.push_back(ratio);
    caps.push_back(cap);
  }
  const double final_cap = caps.back();
  const bool ends_below = ratios.back() < final_cap;

  // Same statement through the analysis pipeline on sampled gamma.
  constexpr int n = 4000;
  std::vector<PolarPoint> pts;
  for (double t : log_grid(g.t_min, g.t_max, n)) pts.push_back(gamma_point(GammaParam(t)));
  const auto series = length_distance_series(SampledPath::from_polar(pts), {0.0, 0.0});
  double sampled_violation = 0.0;
  for (std::size_t i = 0; i < series.entries.size(); ++i) {
    const double t = 1.0 / pts[i].r;
    const double lt = std::log(t);
    const double ratio = series.entries[i].ratio;
    sampled_violation =
        std::max({sampled_violation, 1.0 - 1e-9 - ratio, ratio - (1.0 + 1.0 / (lt * lt))});
  }

  rec.paper_value = series_or_scalar(caps);
  rec.oracle_value = series_or_scalar(ratios);
  rec.residual = std::max(violation, sampled_violation);
  rec.details.emplace_back("nonincreasing", monotone);
  rec.details.emplace_back("final_ratio", ratios.back());
  rec.details.emplace_back("final_cap", final_cap);
  rec.details.emplace_back("sampled_bracket_violation", sampled_violation);
  settle(rec, violation <= 0.0 && sampled_violation <= rec.tolerance && monotone &&
                  ends_below);
  return rec;
}

inline ClaimRecord c5(const ClaimGrid&) {
  ClaimRecord rec = make_record("C5", ClaimKind::check, "(1,\\log(\\log(t)))");
  rec.inputs = "log t = e^{2 pi k}, k = 1..3; winding of 4000 closed-form samples";
  rec.tolerance = 1e-12;
  std::vector<double> expected;
  std::vector<double> angles;
  double residual = 0.0;
  bool increasing = true;
  for (int k = 1; k <= 3; ++k) {
    const double angle = secant_angle_closed_form(std::exp(two_pi * k));
    if (!angles.empty() && !(angle > angles.back())) increasing = false;
    expected.push_back(two_pi * k);
    angles.push_back(angle);
    residual = std::max(residual, std::abs(angle - two_pi * k));
  }
  const auto rep = geometry_report(sample_gamma(1.0, std::exp(two_pi * 3), 4000),
                                   {0.0, 0.0});
  const double winding_error = std::abs(rep.winding_count - 3.0);
  rec.paper_value = expected;
  rec.oracle_value = angles;
  rec.residual = residual;
  rec.details.emplace_back("winding_count", rep.winding_count);
  rec.details.emplace_back("tangent_exists", rep.tangent_exists);
  settle(rec, residual <= rec.tolerance && increasing && winding_error <= 1e-3 &&
                  !rep.tangent_exists);
  return rec;
}

inline ClaimRecord c6(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C6", ClaimKind::check, "f|_\\gamma = e^\\frac{-1}{r}");
  rec.inputs = "gamma(t) on the t grid (polar chart) and log t up to 700 (log chart)";
  rec.tolerance = 1e-13;
  const FieldHandle field = FieldHandle::spiral();
  double residual = 0.0;
  bool positive = true;
  for (double t : log_grid(g.t_min, g.t_max, g.t_count)) {
    const PolarPoint p = gamma_point(GammaParam(t));
    const SignedLogValue v = eval(field, p);
    const double expected = -1.0 / p.r;
    positive = positive && v.sign == 1;
    residual = std::max(residual, std::abs(v.log_magnitude - expected) / std::abs(expected));
  }
  for (double rho = std::log(2.0); rho <= 700.0; rho *= 1.5) {
    const SignedLogValue v = eval(field, gamma_point_log(rho));
    const double expected = -std::exp(rho);
    positive = positive && v.sign == 1;
    residual = std::max(residual, std::abs(v.log_magnitude - expected) / std::abs(expected));
  }
  rec.residual = residual;
  settle(rec, positive && residual <= rec.tolerance);
  return rec;
}

// Displayed closed form vs dual-number partial on gamma over an r grid.
inline ClaimRecord partial_on_gamma(ClaimRecord rec, PaperExpr expr,
                                    const std::vector<double>& radii) {
  const FieldHandle field = FieldHandle::spiral();
  std::vector<double> paper, oracle, paper_log, oracle_log, rel;
  for (double r : radii) {
    const SignedLogValue displayed = paper_expr(expr, r);
    const PolarGradient grad = polar_partials(field, on_gamma(r));
    const SignedLogValue computed =
        expr == PaperExpr::fr_on_gamma ? grad.f_r : grad.f_theta;
    paper.push_back(displayed.to_double());
    oracle.push_back(computed.to_double());
    paper_log.push_back(displayed.log_magnitude);
    oracle_log.push_back(computed.log_magnitude);
    rel.push_back(relative_difference(displayed, computed));
  }
  rec.paper_value = series_or_scalar(paper);
  rec.oracle_value = series_or_scalar(oracle);
  rec.residual = max_of(rel);
  rec.details.emplace_back("radii", series_or_scalar(radii));
  rec.details.emplace_back("paper_log_magnitude", series_or_scalar(paper_log));
  rec.details.emplace_back("oracle_log_magnitude", series_or_scalar(oracle_log));
  rec.details.emplace_back("relative_difference", series_or_scalar(rel));
  return rec;
}

inline ClaimRecord c7(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C7", ClaimKind::check, "-e^{\\frac{-1}{r}} \\frac{\\log(1/r)}{1+ r^2 \\log^2(1/r)}");
  rec.inputs = "r log-spaced in [" + std::to_string(std::max(g.r_min, g.r_min_representable)) +
               ", " + std::to_string(g.r_max) + "], theta = log log(1/r)";
  rec.tolerance = 1e-10;
  rec = partial_on_gamma(
      std::move(rec), PaperExpr::ftheta_on_gamma,
      log_grid(std::max(g.r_min, g.r_min_representable), g.r_max, g.r_count));
  settle(rec, rec.residual <= rec.tolerance);
  return rec;
}

inline ClaimRecord c8(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C8", ClaimKind::report, "\\frac{\\log^2(1/r)}{1+r^2\\log^2(1/r)} e^{-1/r}");
  rec.inputs = "r log-spaced in [" + std::to_string(g.r_min) + ", " +
               std::to_string(g.r_max) +
               "], theta = log log(1/r); oracle: dual-number chain rule through g";
  rec = partial_on_gamma(std::move(rec), PaperExpr::fr_on_gamma,
                         log_grid(g.r_min, g.r_max, g.r_count));
  settle(rec, true);
  return rec;
}

inline ClaimRecord c9(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C9", ClaimKind::check, "b(r) r^2 = \\frac{\\partial f}{\\partial r}, "
                  "b(r) \\frac{-r}{\\log(1/r)} = \\frac{\\partial f}{\\partial \\theta} \\frac{1}{r}");
  rec.inputs = "r log-spaced in [" + std::to_string(g.r_min) + ", " +
               std::to_string(g.r_max) + "]; all terms from the displayed closed forms";
  rec.tolerance = 1e-12;
  std::vector<double> lhs, rhs;
  double residual = 0.0;
  for (double r : log_grid(g.r_min, g.r_max, g.r_count)) {
    const double L = -std::log(r);
    const SignedLogValue b = paper_expr(PaperExpr::b, r);
    const SignedLogValue fr = paper_expr(PaperExpr::fr_on_gamma, r);
    const SignedLogValue ft = paper_expr(PaperExpr::ftheta_on_gamma, r);
    const SignedLogValue radial = b * (r * r);
    residual = std::max(residual, relative_difference(radial, fr));
    residual = std::max(residual, relative_difference(b * (-r / L), ft * (1.0 / r)));
    // -grad f|gamma = b (-r^2, r / L), the dimensionally consistent reading
    residual = std::max(residual, relative_difference(-fr, b * (-r * r)));
    residual = std::max(residual, relative_difference(-(ft * (1.0 / r)), b * (r / L)));
    lhs.push_back(radial.to_double());
    rhs.push_back(fr.to_double());
  }
  rec.paper_value = series_or_scalar(lhs);
  rec.oracle_value = series_or_scalar(rhs);
  rec.residual = residual;
  settle(rec, residual <= rec.tolerance);
  return rec;
}

inline ClaimRecord c10(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C10", ClaimKind::check, "b(r)>0 for all $0<r\\leq \\frac{1}{2}$");
  rec.inputs = "r grid plus log-chart rho in [log 2, 800]";
  rec.tolerance = 0.0;
  double bad = 0.0;
  for (double r : log_grid(g.r_min, g.r_max, g.r_count)) {
    if (paper_expr(PaperExpr::b, r).sign != 1) bad += 1.0;
  }
  for (double rho = std::log(2.0); rho <= 800.0; rho *= 1.2) {
    if (paper_expr_log(PaperExpr::b, rho).sign != 1) bad += 1.0;
  }
  rec.residual = bad;
  settle(rec, bad == 0.0);
  return rec;
}

inline ClaimRecord c11(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C11", ClaimKind::check, "\\frac{\\partial f}{\\partial r}, \\frac{\\partial f}{\\partial \\theta} \\rightarrow 0");
  rec.inputs =
      "displayed on-curve partials for rho in [log 100, 800] (log chart); dual "
      "partials for r in [r_min, 0.01]; flatness tested against r^10";
  rec.tolerance = 0.0;
  double violations = 0.0;
  std::vector<double> fr_log;
  double prev_fr = std::numeric_limits<double>::infinity();
  double prev_ft = prev_fr;
  double prev_flat = prev_fr;
  for (double rho = std::log(100.0); rho <= 800.0; rho *= 1.1) {
    const double fr = paper_expr_log(PaperExpr::fr_on_gamma, rho).log_magnitude;
    const double ft = paper_expr_log(PaperExpr::ftheta_on_gamma, rho).log_magnitude;
    const double flat = fr + 10.0 * rho;  // log(|f_r| / r^10)
    if (!(fr < prev_fr) && !(fr == prev_fr && std::isinf(fr))) violations += 1.0;
    if (!(ft < prev_ft) && !(ft == prev_ft && std::isinf(ft))) violations += 1.0;
    if (!(flat < prev_flat) && !(flat == prev_flat && std::isinf(flat))) violations += 1.0;
    prev_fr = fr;
    prev_ft = ft;
    prev_flat = flat;
    fr_log.push_back(fr);
  }
  const bool reaches_zero = std::isinf(prev_fr) && prev_fr < 0.0 && std::isinf(prev_ft);

  // The dual-number partials of the definition also vanish toward the origin.
  const FieldHandle field = FieldHandle::spiral();
  double prev_r = std::numeric_limits<double>::infinity();
  double prev_t = prev_r;
  for (double r : log_grid(0.01, std::min(g.r_min, 0.01), g.r_count)) {
    const PolarGradient grad = polar_partials(field, on_gamma(r));
    if (!(grad.f_r.log_magnitude < prev_r) && r != 0.01) violations += 1.0;
    if (!(grad.f_theta.log_magnitude < prev_t) && r != 0.01) violations += 1.0;
    prev_r = grad.f_r.log_magnitude;
    prev_t = grad.f_theta.log_magnitude;
  }
  rec.oracle_value = fr_log;
  rec.residual = violations;
  rec.details.emplace_back("log_magnitude_reaches_minus_infinity", reaches_zero);
  settle(rec, violations == 0.0 && reaches_zero);
  return rec;
}

inline ClaimRecord tangency_claim(ClaimRecord rec, const FieldHandle& field,
                                  const ClaimGrid& g) {
  std::vector<double> euclid, paper;
  for (double t : log_grid(g.t_min, g.t_max, g.t_count)) {
    euclid.push_back(tangency_residual(field, Convention::euclidean, GammaParam(t)));
    paper.push_back(tangency_residual(field, Convention::paper, GammaParam(t)));
  }
  rec.details.emplace_back("t", series_or_scalar(log_grid(g.t_min, g.t_max, g.t_count)));
  rec.details.emplace_back("residual_euclidean", series_or_scalar(euclid));
  rec.details.emplace_back("residual_paper", series_or_scalar(paper));
  rec.oracle_value = series_or_scalar(rec.id == "C12" ? paper : euclid);
  rec.residual = max_of(rec.id == "C12" ? paper : euclid);
  return rec;
}

inline ClaimRecord c12(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C12", ClaimKind::check, "-\\nabla_{r,\\theta} f |_{\\gamma} \\parallel \\gamma'");
  rec.inputs = "displayed partials, paper convention, gamma(t) on the t grid, factored arithmetic";
  rec.tolerance = 1e-9;
  rec = tangency_claim(std::move(rec), FieldHandle::paper_displayed(), g);
  settle(rec, rec.residual < rec.tolerance);
  return rec;
}

inline ClaimRecord c13(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C13", ClaimKind::report, "x'(t) = -\\nabla f (x(t)) along \\gamma");
  rec.inputs = "dual-number partials of f, both conventions, gamma(t) on the t grid";
  rec = tangency_claim(std::move(rec), FieldHandle::spiral(), g);
  settle(rec, true);
  return rec;
}

struct FlowSummary {
  Trajectory trajectory;
  GeometryReport geometry;
  double max_on_curve_residual = 0.0;
  bool f_nonincreasing = true;
};

inline FlowSummary summarize_flow(const FieldHandle& field, FlowConvention conv,
                                  double rho_max) {
  const IntegratorConfig cfg;
  StopCondition stop;
  stop.rho_max = rho_max;
  FlowSummary out;
  out.trajectory = integrate(field, gamma_point(GammaParam(2.0)), conv, cfg, stop);
  out.geometry = geometry_report(SampledPath::from_trajectory(out.trajectory), {0.0, 0.0});
  const auto slack = SignedLogValue::from_double(1.0 + 10.0 * cfg.rel_tol);
  const auto& smp = out.trajectory.samples;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    out.max_on_curve_residual = std::max(
        out.max_on_curve_residual, std::abs(smp[i].q.theta - std::log(smp[i].q.rho)));
    if (i > 0) {
      const auto& prev = smp[i - 1].f_value;
      const auto bound = prev.sign >= 0 ? prev * slack : prev / slack;
      if (bound < smp[i].f_value) out.f_nonincreasing = false;
    }
  }
  return out;
}

inline ClaimRecord c14(const ClaimGrid& g) {
  ClaimRecord rec = make_record("C14", ClaimKind::report, "\\frac{\\sigma(s)}{|x(s)|} \\rightarrow 1");
  rec.inputs = "flow from gamma(2) to rho_max = " + std::to_string(g.flow_rho_max) +
               ": oracle field (polar-euclidean) and displayed field (polar-paper)";
  const FlowSummary oracle =
      summarize_flow(FieldHandle::spiral(), FlowConvention::polar_euclidean, g.flow_rho_max);
  const FlowSummary displayed = summarize_flow(
      FieldHandle::paper_displayed(), FlowConvention::polar_paper, g.flow_rho_max);

  auto ratios = [](const GeometryReport& rep) {
    std::vector<double> v;
    for (const auto& e : rep.ratio_series) v.push_back(e.ratio);
    return v;
  };
  auto arc = [](const GeometryReport& rep) {
    std::vector<double> v;
    for (const auto& e : rep.ratio_series) v.push_back(e.s);
    return v;
  };
  auto add = [&](const std::string& prefix, const FlowSummary& fs) {
    rec.details.emplace_back(prefix + "stop_reason",
                             std::string(to_string(fs.trajectory.stop_reason)));
    rec.details.emplace_back(prefix + "samples",
                             static_cast<double>(fs.trajectory.samples.size()));
    rec.details.emplace_back(prefix + "final_rho", fs.trajectory.samples.back().q.rho);
    rec.details.emplace_back(prefix + "winding_count", fs.geometry.winding_count);
    rec.details.emplace_back(prefix + "oscillation", fs.geometry.oscillation);
    rec.details.emplace_back(prefix + "tangent_exists", fs.geometry.tangent_exists);
    rec.details.emplace_back(prefix + "terminal_gap", fs.geometry.terminal_gap);
    rec.details.emplace_back(prefix + "max_on_curve_residual", fs.max_on_curve_residual);
    rec.details.emplace_back(prefix + "f_nonincreasing", fs.f_nonincreasing);
    rec.details.emplace_back(prefix + "ratio_s", arc(fs.geometry));
    rec.details.emplace_back(prefix + "ratio", ratios(fs.geometry));
  };
  add("oracle_", oracle);
  add("displayed_", displayed);
  rec.paper_value = 1.0;
  rec.oracle_value = oracle.geometry.ratio_series.front().ratio;
  rec.residual = displayed.max_on_curve_residual;
  settle(rec, true);
  return rec;
}

}  // namespace claims_detail

/// Runs one claim. Exceptions inside the claim become a failed record.
inline ClaimRecord run_claim(const std::string& id, const ClaimGrid& grid = {}) {
  using Fn = ClaimRecord (*)(const ClaimGrid&);
  static const std::map<std::string, Fn> table = {
      {"C1", claims_detail::c1},   {"C2", claims_detail::c2},
      {"C3", claims_detail::c3},   {"C4", claims_detail::c4},
      {"C5", claims_detail::c5},   {"C6", claims_detail::c6},
      {"C7", claims_detail::c7},   {"C8", claims_detail::c8},
      {"C9", claims_detail::c9},   {"C10", claims_detail::c10},
      {"C11", claims_detail::c11}, {"C12", claims_detail::c12},
      {"C13", claims_detail::c13}, {"C14", claims_detail::c14},
  };
  const auto it = table.find(id);
  if (it == table.end()) throw std::invalid_argument("unknown claim id: " + id);
  try {
    return it->second(grid);
  } catch (const std::exception& e) {
    ClaimRecord rec;
    rec.id = id;
    rec.kind = id == "C8" || id == "C13" || id == "C14" ? ClaimKind::report : ClaimKind::check;
    rec.verdict = Verdict::fail;
    rec.diagnostic = e.what();
    return rec;
  }
}

/// All claims in id order.
inline std::vector<ClaimRecord> run_all(const ClaimGrid& grid = {}) {
  std::vector<ClaimRecord> out;
  for (const auto& id : claim_ids()) out.push_back(run_claim(id, grid));
  return out;
}

inline bool all_checks_pass(const std::vector<ClaimRecord>& records) {
  return std::none_of(records.begin(), records.end(), [](const ClaimRecord& r) {
    return r.verdict == Verdict::fail;
  });
}

}  // namespace thomflow
