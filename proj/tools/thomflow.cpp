#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thomflow/analysis.hpp"
#include "thomflow/claims.hpp"
#include "thomflow/curve.hpp"
#include "thomflow/field.hpp"
#include "thomflow/flow.hpp"
#include "thomflow/gradcheck.hpp"
#include "thomflow/io.hpp"

namespace {

using namespace thomflow;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to the file at `path`, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

FieldHandle make_field(const std::string& name, double scale) {
  if (name == "spiral") return FieldHandle::spiral();
  if (name == "paper-displayed") return FieldHandle::paper_displayed();
  return FieldHandle::bowl(scale);
}

PolarPoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--x0 expects r,theta");
  try {
    return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
  } catch (const ParseError& e) {
    throw UsageError(std::string("--x0: ") + e.what());
  }
}

struct SimulateArgs {
  std::string field = "spiral";
  std::string convention = "polar-euclidean";
  std::string x0;
  std::string method = "rk45";
  std::string format = "csv";
  std::string output;
  double scale = 1.0;
  double rho_max = 20.0;
  double max_arclength = std::numeric_limits<double>::infinity();
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-2;
  double h_max = 0.25;
  long max_steps = 1'000'000;
  bool ascent = false;
};

int run_simulate(const SimulateArgs& a) {
  const FieldHandle field = make_field(a.field, a.scale);
  const std::map<std::string, FlowConvention> conventions = {
      {"cartesian-euclidean", FlowConvention::cartesian_euclidean},
      {"polar-euclidean", FlowConvention::polar_euclidean},
      {"polar-paper", FlowConvention::polar_paper}};
  const PolarPoint x0 = a.x0.empty() ? gamma_point(GammaParam(2.0)) : parse_point(a.x0);

  IntegratorConfig cfg;
  cfg.method = a.method == "rk4" ? Method::rk4_fixed : Method::rk45_adaptive;
  cfg.rel_tol = a.rel_tol;
  cfg.abs_tol = a.abs_tol;
  cfg.h_init = a.h_init;
  cfg.h_max = std::max(a.h_max, a.h_init);
  cfg.max_steps = a.max_steps;
  cfg.sign = a.ascent ? FlowSign::ascent : FlowSign::descent;
  StopCondition stop;
  stop.rho_max = a.rho_max;
  stop.max_arclength = a.max_arclength;

  Trajectory traj;
  int code = exit_ok;
  try {
    traj = integrate(field, x0, conventions.at(a.convention), cfg, stop);
  } catch (const IntegrationError& e) {
    std::cerr << "thomflow: " << e.what() << " (writing partial trajectory)\n";
    traj = e.partial();
    code = exit_failure;
  }
  Output out(a.output);
  if (a.format == "json") {
    if (traj.samples.size() < 2) throw std::runtime_error("trajectory has fewer than 2 samples");
    const auto rep = geometry_report(SampledPath::from_trajectory(traj), {0.0, 0.0});
    out.stream() << to_json(traj, rep).dump(2) << '\n';
  } else {
    write_trajectory_csv(out.stream(), traj);
  }
  return code;
}

int run_claims(const std::vector<std::string>& ids, const std::string& output) {
  const ClaimGrid grid;
  std::vector<ClaimRecord> records;
  if (ids.empty()) {
    records = run_all(grid);
  } else {
    for (const auto& id : ids) {
      const auto& known = claim_ids();
      if (std::find(known.begin(), known.end(), id) == known.end()) {
        throw UsageError("unknown claim id " + id);
      }
      records.push_back(run_claim(id, grid));
    }
  }
  Output out(output);
  out.stream() << claims_report(records, grid).dump(2) << '\n';
  for (const auto& r : records) {
    std::cerr << r.id << ' ' << to_string(r.kind) << ' ' << to_string(r.verdict)
              << " residual=" << format_double(r.residual);
    if (!r.diagnostic.empty()) std::cerr << " (" << r.diagnostic << ')';
    std::cerr << '\n';
  }
  return all_checks_pass(records) ? exit_ok : exit_failure;
}

int run_curve(const std::vector<double>& ts, const std::string& format,
              const std::string& output) {
  std::vector<CurveRow> rows;
  for (double t : ts) {
    if (!(t >= 2.0)) throw UsageError("--t values must be >= 2");
    rows.push_back(curve_row(t));
  }
  Output out(output);
  if (format == "json") {
    out.stream() << to_json(rows).dump(2) << '\n';
  } else {
    write_curve_csv(out.stream(), rows);
  }
  return exit_ok;
}

int run_gradcheck(const GradcheckOptions& opts, const std::string& output) {
  const GradcheckReport rep = gradcheck(opts);
  Json j;
  j["seed"] = opts.seed;
  j["samples"] = opts.samples;
  j["r_range"] = {opts.r_min, opts.r_max};
  j["rel_tol"] = opts.rel_tol;
  j["abs_tol"] = opts.abs_tol;
  j["checks"] = rep.entries.size();
  j["failures"] = rep.failures;
  j["worst_relative"] = rep.worst_relative;
  Json bad = Json::array();
  for (const auto& e : rep.entries) {
    if (e.ok) continue;
    bad.push_back({{"function", e.function},
                   {"variable", to_string(e.variable)},
                   {"r", e.point.r},
                   {"theta", e.point.theta},
                   {"dual", e.dual},
                   {"finite_difference", e.finite_difference}});
  }
  j["failed_checks"] = bad;
  Output out(output);
  out.stream() << j.dump(2) << '\n';
  return rep.failures == 0 ? exit_ok : exit_failure;
}

int run_export(const std::string& field_name, double scale, const FigureGrid& grid,
               double gamma_rho_end, std::size_t gamma_samples,
               const std::string& prefix) {
  const FieldHandle field = make_field(field_name, scale);
  FigureGrid g = grid;
  if (!field.is_spiral()) g.r_max = std::max(g.r_max, g.r_min * 2.0);
  else if (g.r_max > field.domain_radius) throw UsageError("--r-max exceeds the domain radius 0.5");
  std::ofstream f(prefix + "_field.csv");
  std::ofstream c(prefix + "_gamma.csv");
  if (!f || !c) throw UsageError("cannot write to prefix " + prefix);
  write_field_grid_csv(f, field, g);
  write_gamma_csv(c, gamma_rho_end, gamma_samples);
  std::cerr << "wrote " << prefix << "_field.csv and " << prefix << "_gamma.csv\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-flow counterexample toolkit: spiral curve, cost field, flows, claims"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  const std::vector<std::string> field_names = {"spiral", "bowl", "paper-displayed"};
  const std::vector<std::string> formats = {"csv", "json"};

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate the normalized descent flow");
  simulate->add_option("--field", sim.field, "Cost field")
      ->check(CLI::IsMember(field_names));
  simulate->add_option("--convention", sim.convention, "Chart and gradient convention")
      ->check(CLI::IsMember({"cartesian-euclidean", "polar-euclidean", "polar-paper"}));
  simulate->add_option("--x0", sim.x0, "Start point r,theta (default gamma(2))");
  simulate->add_option("--scale", sim.scale, "Bowl curvature")->check(CLI::PositiveNumber);
  simulate->add_option("--rho-max", sim.rho_max, "Stop when log(1/r) reaches this");
  simulate->add_option("--max-arclength", sim.max_arclength, "Stop after this arc length");
  simulate->add_option("--method", sim.method, "rk45 (adaptive) or rk4 (fixed step)")
      ->check(CLI::IsMember({"rk45", "rk4"}));
  simulate->add_option("--rel-tol", sim.rel_tol)->check(CLI::PositiveNumber);
  simulate->add_option("--abs-tol", sim.abs_tol)->check(CLI::PositiveNumber);
  simulate->add_option("--step", sim.h_init, "Initial (rk45) or fixed (rk4) step in tau")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--max-step", sim.h_max)->check(CLI::PositiveNumber);
  simulate->add_option("--max-steps", sim.max_steps)->check(CLI::PositiveNumber);
  simulate->add_flag("--ascent", sim.ascent, "Follow +grad instead of -grad");
  simulate->add_option("-o,--output", sim.output, "Output file (default stdout)");
  simulate->add_option("--format", sim.format, "csv trajectory or json summary")
      ->check(CLI::IsMember(formats));

  std::vector<std::string> claim_list;
  bool all_claims = false;
  std::string claims_out;
  auto* claims = app.add_subcommand("claims", "Evaluate the claim ledger");
  auto* all_opt = claims->add_flag("--all", all_claims, "Run every claim");
  claims->add_option("--id", claim_list, "Claim id (repeatable)")->excludes(all_opt);
  claims->add_option("-o,--output", claims_out, "Output JSON (default stdout)");

  std::vector<double> ts = {2.0, std::exp(1.0), 10.0, 1e3, 1e6};
  std::string curve_format = "csv";
  std::string curve_out;
  auto* curve = app.add_subcommand("curve", "Tabulate gamma, its speed and tail length");
  curve->add_option("--t", ts, "Parameter values (>= 2)");
  curve->add_option("--format", curve_format)->check(CLI::IsMember(formats));
  curve->add_option("-o,--output", curve_out);

  GradcheckOptions gc;
  std::string gc_out;
  auto* grad = app.add_subcommand("gradcheck", "Dual numbers vs finite differences");
  grad->add_option("--seed", gc.seed);
  grad->add_option("--samples", gc.samples)->check(CLI::PositiveNumber);
  grad->add_option("-o,--output", gc_out);

  FigureGrid fig;
  std::string fig_field = "spiral";
  double fig_scale = 1.0;
  double gamma_rho_end = std::log(1e6);
  std::size_t gamma_samples = 2000;
  std::string prefix = "figure";
  auto* exportf = app.add_subcommand("export-figure", "Field grid and gamma samples as CSV");
  exportf->add_option("--field", fig_field)->check(CLI::IsMember(field_names));
  exportf->add_option("--scale", fig_scale)->check(CLI::PositiveNumber);
  exportf->add_option("--r-count", fig.r_count)->check(CLI::Range(2, 100000));
  exportf->add_option("--theta-count", fig.theta_count)->check(CLI::Range(1, 100000));
  exportf->add_option("--r-min", fig.r_min)->check(CLI::PositiveNumber);
  exportf->add_option("--r-max", fig.r_max)->check(CLI::PositiveNumber);
  exportf->add_option("--gamma-log-t-max", gamma_rho_end)->check(CLI::Range(1.0, 1e300));
  exportf->add_option("--gamma-samples", gamma_samples)->check(CLI::Range(2, 10000000));
  exportf->add_option("-o,--output", prefix, "Output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*claims) {
      if (!all_claims && claim_list.empty()) throw UsageError("claims: pass --all or --id");
      return run_claims(all_claims ? std::vector<std::string>{} : claim_list, claims_out);
    }
    if (*curve) return run_curve(ts, curve_format, curve_out);
    if (*grad) return run_gradcheck(gc, gc_out);
    if (*exportf) return run_export(fig_field, fig_scale, fig, gamma_rho_end, gamma_samples, prefix);
  } catch (const UsageError& e) {
    std::cerr << "thomflow: " << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    std::cerr << "thomflow: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "thomflow: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "thomflow: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
