#pragma once

// Serialization: trajectory CSV (write and read back), geometry and claim
// reports as JSON, curve tables and the field grid used for figures.
//
// Numbers are written with 17 significant digits so every double round-trips.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "thomflow/analysis.hpp"
#include "thomflow/claims.hpp"
#include "thomflow/curve.hpp"
#include "thomflow/field.hpp"
#include "thomflow/flow.hpp"

namespace thomflow {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

// ---- trajectory CSV

inline const char* trajectory_csv_header() {
  return "s,rho,theta_unwrapped,r,x,y,f_sign,f_log,grad_factored";
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << trajectory_csv_header() << '\n';
  for (const auto& smp : traj.samples) {
    const double r = std::exp(-smp.q.rho);
    const CartesianPoint c = to_cartesian(smp.q);
    os << format_double(smp.s) << ',' << format_double(smp.q.rho) << ','
       << format_double(smp.q.theta) << ',' << format_double(r) << ','
       << format_double(c.x) << ',' << format_double(c.y) << ','
       << smp.f_value.sign << ',' << format_double(smp.f_value.log_magnitude) << ','
       << format_double(smp.factored_grad_magnitude) << '\n';
  }
}

/// Rebuilds the sampled path (s, rho, theta) from a trajectory CSV.
inline SampledPath read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != trajectory_csv_header()) {
    throw ParseError("trajectory csv: unexpected header");
  }
  SampledPath path;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols.size() != 9) {
      throw ParseError("trajectory csv: line " + std::to_string(lineno) +
                       " has " + std::to_string(cols.size()) + " columns");
    }
    path.s.push_back(parse_double(cols[0]));
    path.points.push_back({parse_double(cols[1]), parse_double(cols[2])});
  }
  return path;
}

// ---- JSON

inline Json to_json(const ClaimValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

inline Json to_json(const ClaimRecord& rec) {
  Json j;
  j["id"] = rec.id;
  j["kind"] = to_string(rec.kind);
  j["paper_ref"] = rec.paper_ref;
  j["inputs"] = rec.inputs;
  j["paper_value"] = to_json(rec.paper_value);
  j["oracle_value"] = to_json(rec.oracle_value);
  j["residual"] = rec.residual;
  j["tolerance"] = rec.tolerance;
  j["verdict"] = to_string(rec.verdict);
  j["diagnostic"] = rec.diagnostic;
  Json details = Json::object();
  for (const auto& [k, v] : rec.details) details[k] = to_json(v);
  j["details"] = details;
  return j;
}

inline Json to_json(const ClaimGrid& g) {
  return Json{{"r_count", g.r_count},
              {"r_min", g.r_min},
              {"r_max", g.r_max},
              {"r_min_representable", g.r_min_representable},
              {"t_count", g.t_count},
              {"t_min", g.t_min},
              {"t_max", g.t_max},
              {"speed_count", g.speed_count},
              {"speed_t_max", g.speed_t_max},
              {"flow_rho_max", g.flow_rho_max}};
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Claims report; run_id and config_digest depend only on the configuration.
inline Json claims_report(const std::vector<ClaimRecord>& records,
                          const ClaimGrid& grid) {
  const IntegratorConfig cfg;
  Json config;
  config["grid"] = to_json(grid);
  config["integrator"] = {{"method", to_string(cfg.method)},
                          {"rel_tol", cfg.rel_tol},
                          {"abs_tol", cfg.abs_tol},
                          {"h_init", cfg.h_init},
                          {"h_min", cfg.h_min},
                          {"h_max", cfg.h_max},
                          {"max_steps", cfg.max_steps}};
  const std::string digest = hex64(fnv1a(config.dump()));
  Json out;
  out["run_id"] = "claims-" + digest.substr(0, 12);
  out["config_digest"] = digest;
  out["config"] = config;
  Json arr = Json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  out["claims"] = arr;
  return out;
}

inline Json to_json(const GeometryReport& rep) {
  Json j;
  j["total_length"] = rep.total_length;
  j["winding_count"] = rep.winding_count;
  j["oscillation"] = rep.oscillation;
  j["tangent_exists"] = rep.tangent_exists;
  j["terminal_gap"] = rep.terminal_gap;
  j["trailing_fraction"] = rep.trailing_fraction;
  j["tangent_threshold"] = rep.tangent_threshold;
  j["skipped_samples"] = rep.skipped_samples;
  Json s = Json::array();
  Json ratio = Json::array();
  for (const auto& e : rep.ratio_series) {
    s.push_back(e.s);
    ratio.push_back(e.ratio);
  }
  j["ratio_series"] = {{"s", s}, {"ratio", ratio}};
  return j;
}

inline Json to_json(const Trajectory& traj, const GeometryReport& rep) {
  Json j;
  j["field"] = to_string(traj.kind);
  j["convention"] = to_string(traj.convention);
  j["stop_reason"] = to_string(traj.stop_reason);
  j["steps_accepted"] = traj.steps_accepted;
  j["steps_rejected"] = traj.steps_rejected;
  j["samples"] = traj.samples.size();
  const auto& last = traj.samples.back();
  j["final"] = {{"s", last.s}, {"rho", last.q.rho}, {"theta", last.q.theta}};
  j["geometry"] = to_json(rep);
  return j;
}

// ---- curve table

struct CurveRow {
  double t = 2.0;
  double r = 0.0;
  double theta = 0.0;
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
  double tail_length = 0.0;
  double tail_upper_bound = 0.0;
  double length_over_distance = 0.0;
};

inline CurveRow curve_row(double t) {
  const GammaParam p(t);
  const PolarPoint q = gamma_point(p);
  const CartesianPoint c = to_cartesian(q);
  CurveRow row;
  row.t = t;
  row.r = q.r;
  row.theta = q.theta;
  row.x = c.x;
  row.y = c.y;
  row.speed = gamma_speed(p);
  row.tail_length = tail_length(t, 1e-12 / t).length;
  row.tail_upper_bound = tail_length_upper_bound(t);
  row.length_over_distance = row.tail_length * t;
  return row;
}

inline const char* curve_csv_header() {
  return "t,r,theta,x,y,speed,tail_length,tail_upper_bound,length_over_distance";
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << curve_csv_header() << '\n';
  for (const auto& w : rows) {
    os << format_double(w.t) << ',' << format_double(w.r) << ','
       << format_double(w.theta) << ',' << format_double(w.x) << ','
       << format_double(w.y) << ',' << format_double(w.speed) << ','
       << format_double(w.tail_length) << ',' << format_double(w.tail_upper_bound)
       << ',' << format_double(w.length_over_distance) << '\n';
  }
}

inline Json to_json(const std::vector<CurveRow>& rows) {
  Json arr = Json::array();
  for (const auto& w : rows) {
    arr.push_back({{"t", w.t},
                   {"r", w.r},
                   {"theta", w.theta},
                   {"x", w.x},
                   {"y", w.y},
                   {"speed", w.speed},
                   {"tail_length", w.tail_length},
                   {"tail_upper_bound", w.tail_upper_bound},
                   {"length_over_distance", w.length_over_distance}});
  }
  return arr;
}

// ---- figure data

struct FigureGrid {
  int r_count = 200;
  int theta_count = 400;
  double r_min = 1e-3;
  double r_max = 0.5;
};

/// Field values on r (log-spaced) x theta (uniform in [0, 2 pi)).
inline void write_field_grid_csv(std::ostream& os, const FieldHandle& field,
                                 const FigureGrid& grid) {
  if (grid.r_count < 2 || grid.theta_count < 1) {
    throw std::invalid_argument("figure grid: need r_count >= 2, theta_count >= 1");
  }
  os << "r,theta,f_sign,f_log\n";
  const double a = std::log(grid.r_min);
  const double b = std::log(grid.r_max);
  for (int i = 0; i < grid.r_count; ++i) {
    const double r = i + 1 == grid.r_count
                         ? grid.r_max
                         : std::exp(a + (b - a) * i / (grid.r_count - 1));
    for (int j = 0; j < grid.theta_count; ++j) {
      const double theta = two_pi * j / grid.theta_count;
      const SignedLogValue v = eval(field, PolarPoint{r, theta});
      os << format_double(r) << ',' << format_double(theta) << ',' << v.sign << ','
         << format_double(v.log_magnitude) << '\n';
    }
  }
}

/// Closed-form gamma samples for log t in [log 2, rho_end].
inline void write_gamma_csv(std::ostream& os, double rho_end, std::size_t count) {
  const SampledPath path = sample_gamma(std::log(2.0), rho_end, count);
  os << "log_t,r,theta,x,y\n";
  for (const auto& q : path.points) {
    const CartesianPoint c = to_cartesian(q);
    os << format_double(q.rho) << ',' << format_double(std::exp(-q.rho)) << ','
       << format_double(q.theta) << ',' << format_double(c.x) << ','
       << format_double(c.y) << '\n';
  }
}

}  // namespace thomflow
