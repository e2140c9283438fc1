#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "thomflow/geom.hpp"

using namespace thomflow;

TEST(Geom, ToCartesianIdentityAndAxis) {
  const auto a = to_cartesian(PolarPoint{1.0, 0.0});
  EXPECT_DOUBLE_EQ(a.x, 1.0);
  EXPECT_DOUBLE_EQ(a.y, 0.0);
  const auto b = to_cartesian(PolarPoint{0.5, std::numbers::pi / 2});
  EXPECT_NEAR(b.x, 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(b.y, 0.5);
}

TEST(Geom, ToCartesianAtGammaStart) {
  // theta = log log 2; reference values from 40-digit evaluation
  const auto c = to_cartesian(PolarPoint{0.5, -0.3665129205816643});
  EXPECT_NEAR(c.x, 0.46679132818266639, 1e-15);
  EXPECT_NEAR(c.y, -0.17918107024309861, 1e-15);
}

TEST(Geom, LiftAngleExamples) {
  EXPECT_DOUBLE_EQ(lift_angle(0.1, 0.2), 0.2);
  EXPECT_NEAR(lift_angle(3.0, -3.0), 3.2831853071795865, 1e-15);
  EXPECT_NEAR(lift_angle(6.2, 0.0), 6.2831853071795865, 1e-15);
}

TEST(Geom, LiftAngleStaysWithinPi) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> prev(-100.0, 100.0);
  std::uniform_real_distribution<double> principal(-std::numbers::pi,
                                                   std::numbers::pi);
  for (int i = 0; i < 10000; ++i) {
    const double p = prev(rng);
    const double n = principal(rng);
    const double lifted = lift_angle(p, n);
    EXPECT_LE(std::abs(lifted - p), std::numbers::pi + 1e-12);
    const double k = (lifted - n) / two_pi;
    EXPECT_NEAR(k, std::round(k), 1e-9);
  }
}

TEST(Geom, PolarRoundTripWithLift) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> log_r(std::log(1e-8), 0.0);
  std::uniform_real_distribution<double> theta(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const PolarPoint p{std::exp(log_r(rng)), theta(rng)};
    const PolarPoint back = to_polar(to_cartesian(p), p.theta);
    EXPECT_NEAR(back.r, p.r, 1e-12 * p.r);
    EXPECT_NEAR(back.theta, p.theta, 1e-12 * std::max(1.0, std::abs(p.theta)));
  }
}

TEST(Geom, LogPolarRoundTrip) {
  // rho survives the round trip to 1e-15 relative; r itself inherits the
  // absolute rounding of rho, i.e. |log r| ulps.
  for (double e = -300.0; e <= 0.0; e += 0.37) {
    const PolarPoint p{std::pow(10.0, e), 0.25};
    const LogPolarPoint q = to_log_polar(p);
    const LogPolarPoint q2 = to_log_polar(to_polar(q));
    EXPECT_NEAR(q2.rho, q.rho, 1e-15 * std::max(1.0, q.rho)) << "r = " << p.r;
    const PolarPoint back = to_polar(q);
    EXPECT_NEAR(back.r, p.r, 4e-16 * p.r * std::max(1.0, q.rho)) << "r = " << p.r;
  }
}

TEST(Geom, ChordLengthMatchesCartesian) {
  const LogPolarPoint a{0.7, 0.3};
  const LogPolarPoint b{1.9, -2.1};
  const double direct = distance(to_cartesian(a), to_cartesian(b));
  EXPECT_NEAR(chord_length(a, b), direct, 1e-15);
  // Tiny radii stay representable relative to their own scale.
  const LogPolarPoint c{600.0, 0.0};
  const LogPolarPoint d{600.0 + 1e-9, 0.0};
  const double drho = d.rho - c.rho;
  const double expected = -std::expm1(-drho);
  EXPECT_NEAR(chord_length(c, d) / std::exp(-600.0), expected, 1e-14 * expected);
}
