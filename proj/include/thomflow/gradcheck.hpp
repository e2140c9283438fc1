#pragma once

// Dual-number partials against Richardson central differences on a seeded
// sample of the annulus 0.05 <= r <= 0.5.
//
// Samples come from mt19937_64 with the 53-bit mantissa mapping below, so a
// seed gives the same points on every standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "thomflow/diffcheck.hpp"
#include "thomflow/field.hpp"

namespace thomflow {

struct GradcheckOptions {
  std::uint64_t seed = 20240601;
  int samples = 200;
  double r_min = 0.05;
  double r_max = 0.5;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
};

struct GradcheckEntry {
  std::string function;  // f, g, a or b
  Variable variable = Variable::r;
  PolarPoint point;
  double dual = 0.0;
  double finite_difference = 0.0;
  double fd_error_estimate = 0.0;
  double discrepancy = 0.0;
  bool ok = false;
};

struct GradcheckReport {
  GradcheckOptions options;
  std::vector<GradcheckEntry> entries;
  double worst_relative = 0.0;
  std::size_t failures = 0;
};

inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline GradcheckReport gradcheck(const GradcheckOptions& opts = {}) {
  GradcheckReport rep;
  rep.options = opts;
  std::mt19937_64 rng(opts.seed);
  auto value = [](auto r, auto th) { return spiral_terms::value(r, th); };
  auto modulation = [](auto r, auto th) { return spiral_terms::modulation(r, th); };
  auto amp = [](auto r, auto) { return spiral_terms::amplitude(r); };
  auto scl = [](auto r, auto) { return spiral_terms::scaling(r); };

  for (int i = 0; i < opts.samples; ++i) {
    const double r = opts.r_min + (opts.r_max - opts.r_min) * unit_interval(rng);
    const double theta = two_pi * (2.0 * unit_interval(rng) - 1.0);
    const PolarPoint p{r, theta};
    auto check = [&](const auto& expr, Variable v, const char* name) {
      // f is flat in r at the rate e^{-1/r}; the radial step follows r^2.
      const double h0 = v == Variable::r ? 1e-3 * r * r : 1e-3;
      GradcheckEntry e;
      e.function = name;
      e.variable = v;
      e.point = p;
      e.dual = dual_partial(expr, p, v);
      const FiniteDifference fd = fd_partial(expr, p, v, h0);
      e.finite_difference = fd.estimate;
      e.fd_error_estimate = fd.error_estimate;
      e.discrepancy = std::abs(e.dual - e.finite_difference);
      e.ok = e.discrepancy <= std::max(opts.rel_tol * std::abs(e.dual), opts.abs_tol);
      if (e.dual != 0.0) {
        rep.worst_relative = std::max(rep.worst_relative, e.discrepancy / std::abs(e.dual));
      }
      if (!e.ok) ++rep.failures;
      rep.entries.push_back(e);
    };
    check(value, Variable::r, "f");
    check(value, Variable::theta, "f");
    check(modulation, Variable::r, "g");
    check(modulation, Variable::theta, "g");
    check(amp, Variable::r, "a");
    check(scl, Variable::r, "b");
  }
  return rep;
}

}  // namespace thomflow
