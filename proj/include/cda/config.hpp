#pragma once
/**
 * Line-oriented run configuration:
 *
 *     # comment
 *     section.key = value
 *
 * Unknown keys, duplicates, malformed values and constraint violations are
 * rejected with the offending line number. serialize() emits every key in
 * alphabetical order with full precision, so parse/serialize is a fixpoint.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "cda/experiments.hpp"
#include "cda/grid.hpp"
#include "cda/interpolants.hpp"
#include "cda/thermo.hpp"

namespace cda {

struct RunConfig {
  std::string experiment = "twin";
  std::uint64_t seed = 1;
  std::string output_dir = "output";
  std::string gas_model = "ideal";

  double radiation_a = 0.0;
  double kappa_deg = 5.0 / 3.0;
  double z_c = 1.0;
  double mu0 = 0.005;
  double eta0 = 0.0;
  double kappa0 = 0.0125;
  double beta_cond = 6.5;
  double c_bound = 10.0;

  Grid grid{64, 64, 16, 1.0, 1.0, HorizontalBC::Walls};
  double rho_bar = 1.0;
  double theta_bar = 1.0;
  double dT_vertical = 1.0;
  double dT_radial = 1.0;
  double centrifugal = 0.5;

  double dt = 0.005;
  double t_minus = -0.5;
  double t_zero = 0.0;
  double t_sync = 2.0;
  double t_plus = 4.0;
  int output_every = 20;
  int snapshot_every = 0;

  double lambda = 50.0;
  InterpolantKind interpolant_kind = InterpolantKind::CellAverage;
  double delta = 0.0625;
  double delta_temperature = 0.0625;
  VerticalLayout vertical;

  double u_amplitude = 0.05;
  double T_amplitude = 0.05;
  double d_sync = 0.05;
  SyncInit sync_init = SyncInit::Perturbed;

  std::vector<double> sweep_lambdas{1.0, 5.0, 25.0, 125.0};
  std::vector<double> sweep_deltas{0.0625};
  std::vector<std::uint64_t> sweep_seeds{1};
  int sweep_workers = 1;

  double solver_tolerance = 1e-10;
  int solver_max_iter = 20000;

  double beta = 0.5;
  bool energy_diagnostics = true;

  double check_z_max = 10.0;
  int check_samples = 200;
};

/// Throws ValidationError with codes kConfigSyntax, kUnknownKey or kConstraint;
/// messages start with "line <n>:".
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize(const RunConfig& config);
/// Documented keys in canonical order.
std::vector<std::string> config_keys();
/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& config);

thermo::GasModel gas_model_from(const RunConfig& config);
ProblemSetup setup_from(const RunConfig& config);
TwinExperimentConfig twin_config_from(const RunConfig& config);

}  // namespace cda
