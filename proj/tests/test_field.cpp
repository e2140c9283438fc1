#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "thomflow/curve.hpp"
#include "thomflow/diffcheck.hpp"
#include "thomflow/field.hpp"

using namespace thomflow;

namespace {

constexpr double loglog2 = -0.36651292058166433;
constexpr double half_pi = std::numbers::pi / 2;

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  }
  out.back() = hi;
  return out;
}


}  // namespace

TEST(Field, EvalExamples) {
  const auto spiral = FieldHandle::spiral();
  const auto on = eval(spiral, PolarPoint{0.5, loglog2});
  EXPECT_EQ(on.sign, 1);
  EXPECT_NEAR(on.log_magnitude, -2.0, 1e-15);
  EXPECT_NEAR(on.to_double(), 0.1353352832366127, 1e-16);

  // e^{-2}(1 -+ a(1/2)), 40-digit references
  EXPECT_NEAR(eval(spiral, PolarPoint{0.5, loglog2 + half_pi}).to_double(),
              0.051587260691272517, 1e-15);
  EXPECT_NEAR(eval(spiral, PolarPoint{0.5, loglog2 - half_pi}).to_double(),
              0.21908330578195287, 1e-15);

  EXPECT_DOUBLE_EQ(eval(FieldHandle::bowl(), PolarPoint{1.0, 2.5}).to_double(), 0.5);
}

TEST(Field, EvalDomainErrors) {
  const auto spiral = FieldHandle::spiral();
  EXPECT_THROW(eval(spiral, PolarPoint{0.51, 0.0}), DomainError);
  EXPECT_THROW(eval(spiral, PolarPoint{0.0, 0.0}), DomainError);
  EXPECT_THROW(eval(spiral, PolarPoint{-0.1, 0.0}), DomainError);
  EXPECT_THROW(eval(spiral, LogPolarPoint{0.5, 0.0}), DomainError);
  EXPECT_NO_THROW(eval(FieldHandle::bowl(), PolarPoint{50.0, 0.0}));
}

TEST(Field, PolarAndLogPolarEvalAgree) {
  const auto spiral = FieldHandle::spiral();
  for (double r : {0.5, 0.3, 0.05, 0.002}) {
    for (double th : {-4.0, 0.1, 2.0}) {
      const auto a = eval(spiral, PolarPoint{r, th});
      const auto b = eval(spiral, to_log_polar(PolarPoint{r, th}));
      EXPECT_EQ(a.sign, b.sign);
      EXPECT_NEAR(a.log_magnitude, b.log_magnitude,
                  1e-12 * std::abs(a.log_magnitude));
    }
  }
}

TEST(Field, PaperExprExamples) {
  EXPECT_NEAR(paper_expr(PaperExpr::a, 0.5).to_double(), 0.61881883676202742, 1e-15);
  EXPECT_NEAR(paper_expr(PaperExpr::b, 0.5).to_double(), 0.23219882281909311, 1e-15);
  EXPECT_NEAR(paper_expr(PaperExpr::fr_on_gamma, 0.5).to_double(),
              0.058049705704773277, 1e-16);
  EXPECT_NEAR(paper_expr(PaperExpr::ftheta_on_gamma, 0.5).to_double(),
              -0.083748022545340175, 1e-16);
  EXPECT_THROW(paper_expr(PaperExpr::a, 0.6), DomainError);
  EXPECT_THROW(paper_expr(PaperExpr::b, 0.0), DomainError);
}

TEST(Field, PolarPartialsAtGammaStart) {
  const PolarPoint p{0.5, loglog2};
  const auto g = polar_partials(FieldHandle::spiral(), p);
  EXPECT_NEAR(g.f_theta.to_double(), -0.083748022545340175, 1e-15);
  // Chain rule through the definition, 40-digit numerical differentiation.
  EXPECT_NEAR(g.f_r.to_double(), 0.29969541932561202, 1e-14);

  // The displayed radial partial reproduces its own closed form on the curve.
  const auto d = polar_partials(FieldHandle::paper_displayed(), p);
  EXPECT_NEAR(d.f_r.to_double(), 0.058049705704773277, 1e-15);
  EXPECT_NEAR(d.f_theta.to_double(), -0.083748022545340175, 1e-15);
}

TEST(Field, BowlPartials) {
  const auto g = polar_partials(FieldHandle::bowl(), {0.3, 0.9273});
  EXPECT_DOUBLE_EQ(g.f_r.to_double(), 0.3);
  EXPECT_TRUE(g.f_theta.is_zero());
}

TEST(Field, OnCurveValueIsEnvelope) {
  const auto spiral = FieldHandle::spiral();
  for (double t : log_spaced(2.0, 1e6, 50)) {
    const auto v = eval(spiral, gamma_point(GammaParam(t)));
    EXPECT_EQ(v.sign, 1);
    const double expected = -t;  // log e^{-1/r} with r = 1/t
    EXPECT_NEAR(v.log_magnitude, expected, 1e-13 * std::abs(expected));
  }
}

TEST(Field, FactoredPartialsMatchFiniteDifferences) {
  auto f = [](auto r, auto th) { return spiral_terms::value(r, th); };
  const auto spiral = FieldHandle::spiral();
  for (double r = 0.05; r <= 0.5; r += 0.025) {
    for (double th : {-2.0, 0.4, 3.3}) {
      const PolarPoint p{r, th};
      const auto g = polar_partials(spiral, p);
      const double fd_r = fd_partial(f, p, Variable::r, 1e-3 * r * r).estimate;
      const double fd_t = fd_partial(f, p, Variable::theta, 1e-3).estimate;
      EXPECT_NEAR(g.f_r.to_double(), fd_r, 1e-6 * std::abs(fd_r) + 1e-300);
      EXPECT_NEAR(g.f_theta.to_double(), fd_t, 1e-6 * std::abs(fd_t) + 1e-300);
    }
  }
}

TEST(Field, DirectionIsRadialForBowl) {
  for (double rho : {0.1, 3.0, 40.0}) {
    const auto d = direction_field(FieldHandle::bowl(), {rho, 1.1}, Convention::euclidean);
    EXPECT_DOUBLE_EQ(d.d_rho, 1.0);
    EXPECT_DOUBLE_EQ(d.d_theta, 0.0);
    EXPECT_NEAR(d.factored_magnitude, std::exp(-rho), 1e-15 * std::exp(-rho));
  }
}

TEST(Field, DirectionIgnoresPositiveScaling) {
  const LogPolarPoint q{2.0, 0.7};
  for (auto c : {Convention::euclidean, Convention::paper}) {
    const auto a = direction_field(FieldHandle::bowl(1.0), q, c);
    const auto b = direction_field(FieldHandle::bowl(2.0), q, c);
    EXPECT_EQ(a.d_rho, b.d_rho);
    EXPECT_EQ(a.d_theta, b.d_theta);
    EXPECT_NEAR(b.factored_magnitude, 2.0 * a.factored_magnitude, 1e-15);

    FieldHandle s2 = FieldHandle::spiral();
    s2.scale = 2.0;
    const auto c1 = direction_field(FieldHandle::spiral(), q, c);
    const auto c2 = direction_field(s2, q, c);
    EXPECT_EQ(c1.d_rho, c2.d_rho);
    EXPECT_EQ(c1.d_theta, c2.d_theta);
  }
}

TEST(Field, DirectionIsUnitAndMatchesRawPartials) {
  // Where raw partials are representable the factored direction must equal
  // the normalized raw gradient.
  const auto spiral = FieldHandle::spiral();
  for (double r : {0.45, 0.2, 0.04}) {
    for (double th : {-1.0, 0.5, 2.5}) {
      const auto g = polar_partials(spiral, {r, th});
      const double fr = g.f_r.to_double();
      const double ft = g.f_theta.to_double();
      const auto d = direction_field(spiral, to_log_polar(PolarPoint{r, th}),
                                     Convention::euclidean);
      EXPECT_NEAR(std::hypot(d.d_rho, d.d_theta), 1.0, 1e-15);
      const double n = std::hypot(fr, ft / r);
      EXPECT_NEAR(d.d_rho, fr / n, 1e-12);
      EXPECT_NEAR(d.d_theta, -(ft / r) / n, 1e-12);
      EXPECT_NEAR(d.factored_magnitude, n / std::exp(-1.0 / r), 1e-10 * d.factored_magnitude);

      const auto dp = direction_field(spiral, to_log_polar(PolarPoint{r, th}),
                                      Convention::paper);
      const double np = std::hypot(fr, ft);
      EXPECT_NEAR(dp.d_rho, fr / np, 1e-12);
      EXPECT_NEAR(dp.d_theta, -ft / np, 1e-12);
    }
  }
}

TEST(Field, DirectionFiniteDeepInside) {
  for (auto kind : {FieldHandle::spiral(), FieldHandle::paper_displayed()}) {
    for (double rho : {50.0, 300.0, 700.0}) {
      const auto d = direction_field_unchecked(kind, {rho, std::log(rho) + 0.3},
                                               Convention::euclidean);
      EXPECT_TRUE(std::isfinite(d.d_rho));
      EXPECT_TRUE(std::isfinite(d.d_theta));
      EXPECT_NEAR(std::hypot(d.d_rho, d.d_theta), 1.0, 1e-15);
    }
  }
}

TEST(Field, CriticalPointSignal) {
  EXPECT_THROW(direction_field(FieldHandle::bowl(), {800.0, 0.0},
                               Convention::euclidean, 1e-300),
               CriticalPointReached);
  EXPECT_THROW(direction_field(FieldHandle::spiral(), {3.0, 0.0},
                               Convention::euclidean, 1e300),
               CriticalPointReached);
}

TEST(Field, DisplayedFieldDirectionParallelToCurve) {
  const auto q = gamma_point_log(std::log(2.0));
  const auto d = direction_field(FieldHandle::paper_displayed(), q, Convention::paper);
  // gamma' in log-polar ~ (1, 1/log t)
  const double tr = 1.0;
  const double tt = 1.0 / std::log(2.0);
  const double angle = std::abs(std::atan2(d.d_rho * tt - d.d_theta * tr,
                                           d.d_rho * tr + d.d_theta * tt));
  EXPECT_LT(angle, 1e-10);
}

TEST(Field, DisplayedScalingChain) {
  for (double r : log_spaced(1e-3, 0.5, 100)) {
    const auto b = paper_expr(PaperExpr::b, r);
    const auto fr = paper_expr(PaperExpr::fr_on_gamma, r);
    const auto ft = paper_expr(PaperExpr::ftheta_on_gamma, r);
    const double L = -std::log(r);
    const auto lhs1 = b * (r * r);
    const auto lhs2 = b * (-r / L);
    const auto rhs2 = ft * (1.0 / r);
    EXPECT_LT(relative_difference(lhs1, fr), 1e-12) << r;
    EXPECT_LT(relative_difference(lhs2, rhs2), 1e-12) << r;
    EXPECT_EQ(b.sign, 1) << r;
  }
}

TEST(Field, DisplayedPartialsVanishTowardOrigin) {
  double prev_fr = 0.0;
  double prev_ft = 0.0;
  bool first = true;
  for (double rho = std::log(100.0); rho < 800.0; rho *= 1.15) {
    const auto fr = paper_expr_log(PaperExpr::fr_on_gamma, rho);
    const auto ft = paper_expr_log(PaperExpr::ftheta_on_gamma, rho);
    if (!first) {
      EXPECT_LT(fr.log_magnitude, prev_fr);
      EXPECT_LT(ft.log_magnitude, prev_ft);
    }
    first = false;
    prev_fr = fr.log_magnitude;
    prev_ft = ft.log_magnitude;
  }
  EXPECT_LT(prev_fr, -1e300);
  // Past exp(709) the log magnitude itself is -inf: the value is exactly 0.
  EXPECT_EQ(paper_expr_log(PaperExpr::fr_on_gamma, 720.0).log_magnitude,
            -std::numeric_limits<double>::infinity());
}

TEST(Field, PolarAndLogPolarPaperExprAgree) {
  for (double r : log_spaced(1e-3, 0.5, 20)) {
    for (auto e : {PaperExpr::a, PaperExpr::b, PaperExpr::fr_on_gamma,
                   PaperExpr::ftheta_on_gamma}) {
      const auto x = paper_expr(e, r);
      const auto y = paper_expr_log(e, -std::log(r));
      EXPECT_LT(relative_difference(x, y), 1e-9) << to_string(e) << " r=" << r;
    }
  }
}
