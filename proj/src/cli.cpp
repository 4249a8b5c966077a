#include "cda/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "cda/config.hpp"
#include "cda/error.hpp"
#include "cda/interpolants.hpp"
#include "cda/operators.hpp"
#include "cda/parallel.hpp"
#include "cda/report_io.hpp"

namespace cda {

namespace {

struct Common {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "configuration file (section.key = value)");
  sub->add_option("--output-dir", c.output_dir, "directory for run artifacts");
  sub->add_option("--seed", c.seed, "seed for the initial perturbations");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (!c.output_dir.empty()) cfg.output_dir = c.output_dir;
  if (c.seed) cfg.seed = *c.seed;
  // Re-parse the canonical form so overrides go through the same validation.
  return parse_config(serialize(cfg));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const TwinExperimentConfig tc = twin_config_from(cfg);
  std::vector<std::array<double, 4>> rows;
  const TargetState final_state = run_observed(tc, &rows);
  const std::filesystem::path dir(cfg.output_dir);
  write_observed_series(rows, dir / "observed.csv");
  write_manifest(cfg, dir, {{"run.kind", "simulate"}, {"run.final_time", fmt(final_state.t)}});
  out << "simulate: " << rows.size() << " rows written to " << (dir / "observed.csv").string() << "\n";
  return 0;
}

void print_report(const TrackingReport& r, std::ostream& out) {
  const EnvelopeCheck env = gronwall_envelope_check(r, r.lambda);
  const std::size_t k = row_at(r, r.t_sync);
  out << "lambda            " << fmt(r.lambda) << "\n";
  if (k < r.rows() && !r.times.empty()) {
    out << "err at t=0 (u,T,R)  " << fmt(r.err_u[0]) << " " << fmt(r.err_T[0]) << " " << fmt(r.err_R[0]) << "\n";
    out << "err at t=T (u,T,R)  " << fmt(r.err_u[k]) << " " << fmt(r.err_T[k]) << " " << fmt(r.err_R[k]) << "\n";
  }
  out << "decay rate        " << fmt(r.decay_rate) << " (window end " << fmt(r.decay_window_end) << ", floor "
      << fmt(r.floor) << ", lambda/2 = " << fmt(0.5 * r.lambda) << ")\n";
  out << "growth rate       " << fmt(r.growth_rate) << "\n";
  out << "decay envelope    " << (env.decay_passed ? "pass" : "fail") << "\n";
  out << "growth envelope   " << (env.growth_passed ? "pass" : "fail") << " (margin " << fmt(env.growth_margin)
      << ")\n";
  out << "jensen sandwich   " << (r.jensen_passed ? "pass" : "fail") << "\n";
}

int cmd_twin(const RunConfig& cfg, std::ostream& out) {
  const TrackingReport r = run_twin(twin_config_from(cfg));
  const Manifest m = write_report(r, cfg, cfg.output_dir);
  print_report(r, out);
  out << "manifest          " << m.path.string() << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto rows = sweep(twin_config_from(cfg), cfg.sweep_lambdas, cfg.sweep_deltas, cfg.sweep_seeds,
                          cfg.sweep_workers);
  const std::filesystem::path dir(cfg.output_dir);
  write_sweep_table(rows, dir / "sweep.csv");
  write_manifest(cfg, dir, {{"run.kind", "sweep"}, {"run.rows", std::to_string(rows.size())}});
  out << "sweep: " << rows.size() << " runs written to " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

int cmd_check_eos(RunConfig cfg, const std::string& model, std::ostream& out) {
  if (!model.empty()) {
    if (model != "ideal" && model != "degenerate") {
      throw ValidationError("--model must be ideal or degenerate", errc::kUsage);
    }
    cfg.gas_model = model;
  }
  const auto gas = gas_model_from(cfg);
  const auto rep = thermo::check_hypotheses(gas, cfg.check_z_max, cfg.check_samples, {cfg.rho_bar, cfg.theta_bar});
  out << "model " << gas.structural().name() << "\n" << rep.to_text();
  if (rep.required_passed()) {
    const auto d = thermo::derived_coefficients(gas, {cfg.rho_bar, cfg.theta_bar});
    out << "p_rho " << fmt(d.p_rho) << "  p_theta " << fmt(d.p_theta) << "  c_v " << fmt(d.c_v) << "  c_p "
        << fmt(d.c_p) << "  alpha " << fmt(d.alpha) << "\n";
    return 0;
  }
  throw ValidationError("required constitutive hypotheses fail for model " + gas.structural().name(),
                        errc::kThermoStability);
}

int cmd_check_interpolant(const RunConfig& cfg, std::ostream& out) {
  const Grid g = cfg.grid.horizontal();
  const Interpolant interp(cfg.interpolant_kind, g, cfg.delta);
  std::vector<ScalarField> samples;
  for (int m = 1; m <= 3; ++m) {
    samples.push_back(ScalarField::sample(g, [&](double x, double y, double) {
      return std::sin(std::numbers::pi * m * x / g.lx) * std::cos(std::numbers::pi * (m + 1) * y / g.ly) + 0.3 * m;
    }));
  }
  const DiagnosticsReport d = projection_diagnostics(interp, samples);
  out << "interpolant " << to_string(interp.kind()) << " delta " << fmt(interp.delta()) << " rank " << interp.rank()
      << (interp.is_identity() ? " (identity: delta below 2 cells)" : "") << "\n";
  out << "idempotence defect     " << fmt(d.idempotence_defect) << "\n";
  out << "self-adjointness defect " << fmt(d.self_adjoint_defect) << "\n";
  out << "nonexpansiveness defect " << fmt(d.nonexpansive_defect) << "\n";
  out << "approximation constant  " << fmt(d.approximation_constant) << "\n";
  return 0;
}

int cmd_report(const std::string& input, std::ostream& out) {
  TrackingReport r = read_report(input);
  refit(r);
  print_report(r, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cda: continuous data assimilation twin experiments for a rotating Boussinesq system", "cda"};
  app.require_subcommand(1);
  Common common;
  std::string model;
  std::string input;
  auto* simulate = app.add_subcommand("simulate", "run the observed system alone");
  auto* twin = app.add_subcommand("twin", "run an observed/synchronized twin experiment");
  auto* sweep_cmd = app.add_subcommand("sweep", "run a lambda x delta x seed grid of twin experiments");
  auto* eos = app.add_subcommand("check-eos", "check the constitutive hypotheses of a gas model");
  auto* interp = app.add_subcommand("check-interpolant", "projection diagnostics of the configured interpolant");
  auto* report = app.add_subcommand("report", "re-derive fitted rates from a stored run");
  for (auto* s : {simulate, twin, sweep_cmd, eos, interp, report}) add_common(s, common);
  eos->add_option("--model", model, "ideal | degenerate");
  report->add_option("--input", input, "run directory (defaults to --output-dir)");

  if (!args.empty() && args[0].rfind('-', 0) != 0 && !app.get_subcommand_no_throw(args[0])) {
    err << "CDA-E" << errc::kUsage << ": unknown subcommand '" << args[0] << "'\n" << app.help();
    return 1;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "CDA-E" << errc::kUsage << ": " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    par::configure_threads_from_env();
    const RunConfig cfg = resolve(common);
    if (*simulate) return cmd_simulate(cfg, out);
    if (*twin) return cmd_twin(cfg, out);
    if (*sweep_cmd) return cmd_sweep(cfg, out);
    if (*eos) return cmd_check_eos(cfg, model, out);
    if (*interp) return cmd_check_interpolant(cfg, out);
    if (*report) return cmd_report(input.empty() ? cfg.output_dir : input, out);
  } catch (const Error& e) {
    err << "CDA-E" << e.code() << ": " << e.what() << "\n";
    return e.code() >= 200 ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "CDA-E" << errc::kIo << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "CDA-E" << errc::kNonFinite << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace cda
