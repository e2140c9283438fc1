#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "thomflow/analysis.hpp"
#include "thomflow/curve.hpp"

using namespace thomflow;

namespace {

constexpr double ray_angle = 0.9272952180016122;
const CartesianPoint origin{0.0, 0.0};

SampledPath straight_ray(double r0, double r1, int n) {
  std::vector<PolarPoint> pts;
  for (int i = 0; i < n; ++i) {
    pts.push_back({r0 + (r1 - r0) * i / (n - 1), ray_angle});
  }
  return SampledPath::from_polar(pts);
}

SampledPath gamma_log_spaced_t(double t0, double t1, int n) {
  std::vector<PolarPoint> pts;
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(std::log(t0) + (std::log(t1) - std::log(t0)) * i / (n - 1));
    pts.push_back(gamma_point(GammaParam(i + 1 == n ? t1 : t)));
  }
  return SampledPath::from_polar(pts);
}

}  // namespace

TEST(Analysis, ArcLengthOfStraightRay) {
  const auto arc = arclength_series(straight_ray(0.6, 0.1, 101));
  EXPECT_NEAR(arc.back().cumulative, 0.5, 1e-12);
  EXPECT_EQ(arc.front().cumulative, 0.0);
}

TEST(Analysis, ArcLengthTwoSamplesIsOneChord) {
  const auto path = SampledPath::from_polar({{0.5, 0.0}, {0.5, std::numbers::pi / 2}});
  const auto arc = arclength_series(path);
  ASSERT_EQ(arc.size(), 2u);
  EXPECT_NEAR(arc.back().cumulative, 0.5 * std::sqrt(2.0), 1e-15);
  EXPECT_THROW(arclength_series(SampledPath::from_polar({{0.5, 0.0}})),
               std::invalid_argument);
}

TEST(Analysis, ChordSumOfGammaMatchesQuadrature) {
  const auto arc = arclength_series(gamma_log_spaced_t(2.0, 1e6, 10000));
  const double quad = tail_length(2.0, 1e-13).length - tail_length(1e6, 1e-18).length;
  EXPECT_NEAR(arc.back().cumulative, quad, 1e-4);
  EXPECT_LE(arc.back().cumulative, quad + 1e-12);  // chords undercut the arc
}

TEST(Analysis, StraightRayRatiosAreOne) {
  const auto series = length_distance_series(straight_ray(0.5, 1e-6, 200), origin);
  ASSERT_EQ(series.entries.size(), 200u);
  for (const auto& e : series.entries) EXPECT_NEAR(e.ratio, 1.0, 1e-9);
  EXPECT_NEAR(series.terminal_gap, 1e-6, 1e-16);
}

TEST(Analysis, GammaRatioWithinTailBracket) {
  const int n = 4000;
  const auto path = gamma_log_spaced_t(2.0, 1e6, n);
  const auto series = length_distance_series(path, origin);
  ASSERT_EQ(series.entries.size(), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = 1.0 / std::exp(-path.points[i].rho);
    const double lt = std::log(t);
    const double ratio = series.entries[i].ratio;
    EXPECT_GE(ratio, 1.0 - 1e-9);
    EXPECT_LE(ratio, 1.0 + 1.0 / (lt * lt) + 1e-4) << "t = " << t;
  }
}

TEST(Analysis, LogarithmicSpiralRatioIsSqrtTwo) {
  // r = e^{-theta}: remaining length is sqrt(2) r.
  std::vector<LogPolarPoint> pts;
  const int n = 6001;
  for (int i = 0; i < n; ++i) {
    const double th = 30.0 * i / (n - 1);
    pts.push_back({th, th});
  }
  const auto path = SampledPath::from_points(pts);
  const auto series = length_distance_series(path, origin);
  for (int i = 0; i < n; ++i) {
    if (pts[i].theta > 15.0) break;  // truncation error e^{-15} stays invisible
    EXPECT_NEAR(series.entries[i].ratio, std::sqrt(2.0), 1e-3);
  }
}

TEST(Analysis, SampleOnLimitIsSkipped) {
  const auto path = SampledPath::from_polar({{0.5, 0.0}, {0.25, 0.0}, {0.1, 0.0}});
  const CartesianPoint limit{0.25, 0.0};
  const auto series = length_distance_series(path, limit);
  ASSERT_EQ(series.skipped.size(), 1u);
  EXPECT_EQ(series.skipped.front(), 1u);
  EXPECT_EQ(series.entries.size(), 2u);
}

TEST(Analysis, StraightRayHasTangent) {
  const auto rep = geometry_report(straight_ray(0.5, 1e-6, 200), origin);
  EXPECT_EQ(rep.oscillation, 0.0);
  EXPECT_EQ(rep.winding_count, 0.0);
  EXPECT_TRUE(rep.tangent_exists);
  for (const auto& e : secant_series(straight_ray(0.5, 1e-6, 20), origin)) {
    EXPECT_DOUBLE_EQ(e.secant_angle_unwrapped, ray_angle);
  }
}

TEST(Analysis, GammaWindsOncePerExpTwoPi) {
  for (int k : {1, 3}) {
    const auto path = sample_gamma(std::log(2.0), std::exp(two_pi * k), 4000);
    const auto rep = geometry_report(path, origin);
    const double expected =
        (two_pi * k - std::log(std::log(2.0))) / two_pi;  // from theta(2)
    EXPECT_NEAR(rep.winding_count, expected, 1e-3);
    EXPECT_FALSE(rep.tangent_exists);
  }
}

TEST(Analysis, GammaWindingFromThetaZero) {
  // Starting at t = e (theta = 0) the count is exactly k windings.
  for (int k : {1, 3}) {
    const auto path = sample_gamma(1.0, std::exp(two_pi * k), 4000);
    EXPECT_NEAR(geometry_report(path, origin).winding_count, k, 1e-3);
  }
}

TEST(Analysis, GammaSecantIsItsAngle) {
  const auto path = sample_gamma(std::log(2.0), 1e4, 3000);
  const auto sec = secant_series(path, origin);
  for (std::size_t i = 0; i < sec.size(); ++i) {
    EXPECT_NEAR(sec[i].secant_angle_unwrapped, std::log(path.points[i].rho), 1e-12);
    if (i > 0) {
      EXPECT_GT(sec[i].secant_angle_unwrapped, sec[i - 1].secant_angle_unwrapped);
      EXPECT_LT(sec[i].secant_angle_unwrapped - sec[i - 1].secant_angle_unwrapped,
                std::numbers::pi);
    }
  }
}

TEST(Analysis, OffOriginLimitLiftsSecants) {
  // A circle of radius 0.1 around (0.2, 0.1), walked twice.
  const CartesianPoint limit{0.2, 0.1};
  std::vector<LogPolarPoint> pts;
  for (int i = 0; i <= 400; ++i) {
    const double a = 2.0 * two_pi * i / 400;
    const CartesianPoint c{limit.x + 0.1 * std::cos(a), limit.y + 0.1 * std::sin(a)};
    pts.push_back(to_log_polar(to_polar(c)));
  }
  const auto path = SampledPath::from_points(pts);
  const auto sec = secant_series(path, limit);
  for (std::size_t i = 1; i < sec.size(); ++i) {
    EXPECT_LT(std::abs(sec[i].secant_angle_unwrapped - sec[i - 1].secant_angle_unwrapped),
              std::numbers::pi);
  }
  EXPECT_NEAR(geometry_report(path, limit).winding_count, 2.0, 1e-9);
}

TEST(Analysis, RatioLowerBoundOnFlow) {
  const auto tr = integrate(FieldHandle::spiral(), gamma_point(GammaParam(2.0)),
                            FlowConvention::polar_euclidean, {}, StopCondition{});
  const auto rep = geometry_report(SampledPath::from_trajectory(tr), origin);
  for (const auto& e : rep.ratio_series) EXPECT_GE(e.ratio, 1.0 - 1e-9);
  EXPECT_GT(rep.total_length, 0.5 - 1e-9);
}
