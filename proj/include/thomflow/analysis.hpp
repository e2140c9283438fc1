#pragma once

// Geometry of sampled paths: chord arc length, remaining-length over
// distance ratio, lifted secant angles, winding and tail oscillation.
//
// Integrated trajectories and closed-form samples of a curve go through the
// same SampledPath type, so the metrics can be validated on exactly known
// inputs before they are applied to numerical flows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "thomflow/flow.hpp"
#include "thomflow/geom.hpp"

namespace thomflow {

struct SampledPath {
  std::vector<double> s;  // arc-length coordinate of each point
  std::vector<LogPolarPoint> points;

  /// Points only; s is the cumulative chord length.
  static SampledPath from_points(std::vector<LogPolarPoint> pts) {
    SampledPath p;
    p.points = std::move(pts);
    p.s.resize(p.points.size(), 0.0);
    for (std::size_t i = 1; i < p.points.size(); ++i) {
      p.s[i] = p.s[i - 1] + chord_length(p.points[i - 1], p.points[i]);
    }
    return p;
  }

  static SampledPath from_polar(const std::vector<PolarPoint>& pts) {
    std::vector<LogPolarPoint> q;
    q.reserve(pts.size());
    for (const auto& p : pts) q.push_back(to_log_polar(p));
    return from_points(std::move(q));
  }

  /// Uses the integrator's arc length.
  static SampledPath from_trajectory(const Trajectory& traj) {
    SampledPath p;
    p.s.reserve(traj.samples.size());
    p.points.reserve(traj.samples.size());
    for (const auto& smp : traj.samples) {
      p.s.push_back(smp.s);
      p.points.push_back(smp.q);
    }
    return p;
  }

  std::size_t size() const { return points.size(); }
};

struct ArcLengthEntry {
  double s = 0.0;
  double cumulative = 0.0;  // chord sum up to this point
};

/// Cumulative Euclidean chord sums; the last entry is the total length.
inline std::vector<ArcLengthEntry> arclength_series(const SampledPath& path) {
  if (path.size() < 2) {
    throw std::invalid_argument("arclength_series: need at least 2 samples");
  }
  std::vector<ArcLengthEntry> out(path.size());
  out[0] = {path.s[0], 0.0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    out[i] = {path.s[i], out[i - 1].cumulative +
                             chord_length(path.points[i - 1], path.points[i])};
  }
  return out;
}

namespace detail {

inline bool is_origin(const CartesianPoint& c) { return c.x == 0.0 && c.y == 0.0; }

inline double distance_to(const LogPolarPoint& q, const CartesianPoint& limit) {
  if (is_origin(limit)) return std::exp(-q.rho);
  return distance(to_cartesian(q), limit);
}

}  // namespace detail

struct RatioEntry {
  double s = 0.0;
  double ratio = 0.0;  // remaining length / distance to the limit
};

struct LengthDistanceSeries {
  std::vector<RatioEntry> entries;
  double terminal_gap = 0.0;  // straight-line tail added after the last sample
  std::vector<std::size_t> skipped;  // samples sitting on the limit
};

/// sigma_k / |x_k - limit| where sigma_k is the chord length from sample k to
/// the end plus the straight segment from the last sample to the limit.
/// Remaining lengths are summed from the tail so they keep full relative
/// precision near the limit.
inline LengthDistanceSeries length_distance_series(const SampledPath& path,
                                                   const CartesianPoint& limit) {
  if (path.size() < 2) {
    throw std::invalid_argument(
        "length_distance_series: need at least 2 samples");
  }
  const std::size_t n = path.size();
  LengthDistanceSeries out;
  out.terminal_gap = detail::distance_to(path.points[n - 1], limit);

  std::vector<double> remaining(n);
  remaining[n - 1] = out.terminal_gap;
  for (std::size_t i = n - 1; i-- > 0;) {
    remaining[i] = remaining[i + 1] + chord_length(path.points[i], path.points[i + 1]);
  }
  out.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = detail::distance_to(path.points[i], limit);
    if (!(d > 0.0)) {
      out.skipped.push_back(i);
      continue;
    }
    out.entries.push_back({path.s[i], remaining[i] / d});
  }
  return out;
}

struct SecantEntry {
  double s = 0.0;
  double secant_angle_unwrapped = 0.0;
  double distance_to_limit = 0.0;
};

using SecantSeries = std::vector<SecantEntry>;

/// Lifted angle of (x - limit). For the origin this is the point's own
/// unwrapped theta; otherwise the principal angle is lifted sample by sample.
inline SecantSeries secant_series(const SampledPath& path,
                                  const CartesianPoint& limit) {
  SecantSeries out;
  out.reserve(path.size());
  const bool origin = detail::is_origin(limit);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const LogPolarPoint& q = path.points[i];
    double angle = q.theta;
    if (!origin) {
      const CartesianPoint c = to_cartesian(q);
      const double principal = std::atan2(c.y - limit.y, c.x - limit.x);
      angle = out.empty() ? principal
                          : lift_angle(out.back().secant_angle_unwrapped, principal);
    }
    out.push_back({path.s[i], angle, detail::distance_to(q, limit)});
  }
  return out;
}

struct GeometryOptions {
  double trailing_fraction = 0.1;   // of total arc length
  double tangent_threshold = 1e-2;  // radians
};

struct GeometryReport {
  double total_length = 0.0;
  std::vector<RatioEntry> ratio_series;
  double winding_count = 0.0;
  double oscillation = 0.0;
  bool tangent_exists = false;
  double terminal_gap = 0.0;
  double trailing_fraction = 0.1;
  double tangent_threshold = 1e-2;
  std::size_t skipped_samples = 0;
};

inline GeometryReport geometry_report(const SampledPath& path,
                                      const CartesianPoint& limit,
                                      const GeometryOptions& opts = {}) {
  const auto arc = arclength_series(path);
  const LengthDistanceSeries ratios = length_distance_series(path, limit);
  const SecantSeries secants = secant_series(path, limit);

  GeometryReport rep;
  rep.total_length = arc.back().cumulative;
  rep.ratio_series = ratios.entries;
  rep.terminal_gap = ratios.terminal_gap;
  rep.skipped_samples = ratios.skipped.size();
  rep.trailing_fraction = opts.trailing_fraction;
  rep.tangent_threshold = opts.tangent_threshold;
  rep.winding_count = (secants.back().secant_angle_unwrapped -
                       secants.front().secant_angle_unwrapped) /
                      two_pi;

  // Window by cumulative chord length, which is defined for any path.
  const double cutoff = rep.total_length * (1.0 - opts.trailing_fraction);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < secants.size(); ++i) {
    if (arc[i].cumulative < cutoff) continue;
    lo = std::min(lo, secants[i].secant_angle_unwrapped);
    hi = std::max(hi, secants[i].secant_angle_unwrapped);
  }
  rep.oscillation = hi - lo;
  rep.tangent_exists = rep.oscillation < opts.tangent_threshold;
  return rep;
}

/// Closed-form samples of gamma, uniformly spaced in its angle log log t,
/// for log t in [rho_start, rho_end].
inline SampledPath sample_gamma(double rho_start, double rho_end,
                                std::size_t count) {
  if (count < 2) throw std::invalid_argument("sample_gamma: count < 2");
  const double a = std::log(rho_start);
  const double b = std::log(rho_end);
  std::vector<LogPolarPoint> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta =
        i + 1 == count ? b : a + (b - a) * static_cast<double>(i) / (count - 1);
    const double rho = i == 0 ? rho_start : (i + 1 == count ? rho_end : std::exp(theta));
    pts[i] = {rho, std::log(rho)};
  }
  return SampledPath::from_points(std::move(pts));
}

}  // namespace thomflow
