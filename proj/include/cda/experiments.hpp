#pragma once
/**
 * Twin experiments: an observed run started at T⁻ < 0 feeds interpolated
 * observations to a synchronized run started at 0, nudging is switched off at
 * T_sync, and both runs continue to T⁺.
 */

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cda/solver.hpp"

namespace cda {

enum class SyncInit { Perturbed, Observed };

struct TwinExperimentConfig {
  ProblemSetup setup;
  NudgingConfig nudging;
  double t_minus = -0.5;
  double t_zero = 0.0;
  double t_plus = 4.0;  // nudging window end is nudging.window_end
  double dt = 0.005;
  int output_every = 1;    // steps between report rows
  int snapshot_every = 0;  // steps between field snapshots, 0 = none
  std::optional<std::filesystem::path> snapshot_dir;

  // Observed data at T⁻: boundary profile plus seeded perturbations of the
  // given L¹ sizes.
  double u_amplitude = 0.05;
  double T_amplitude = 0.05;
  // Synchronized data at 0: boundary profile plus a perturbation of size d_sync
  // (seed + 1), or an exact copy of the observed state.
  double d_sync = 0.02;
  SyncInit sync_init = SyncInit::Perturbed;
  std::uint64_t seed = 1;

  double beta_fit = 0.5;           // β of the combined functional used for fitting
  bool energy_diagnostics = true;  // per-step energy identity residuals

  [[nodiscard]] double t_sync() const { return nudging.window_end; }
  /// Ordering T⁻ < 0 < T < T⁺, step counts commensurate with dt, Λ ≥ 0.
  void validate() const;
};

struct TrackingReport {
  std::vector<double> times;
  std::vector<double> err_u, err_T, err_R;           // L² norms
  std::vector<double> err_u_L1, err_T_L1, err_R_L1;  // L¹ norms
  std::vector<int> nudging_active;
  std::vector<double> combined;  // ‖e‖² + ‖θ‖² - β_fit(∫θ)²/|Ω|

  double lambda = 0.0;
  double t_sync = 0.0;
  double t_plus = 0.0;
  double beta_fit = 0.5;

  double decay_rate = 0.0;        // least-squares rate on the decay window
  double decay_window_end = 0.0;
  double floor = 0.0;             // min of `combined` on [0, T]
  double growth_rate = 0.0;       // least-squares growth rate on [T, T⁺]

  double jensen_worst_defect = 0.0;  // worst relative violation, ≤ 0 when all bounds hold
  bool jensen_passed = true;
  double boussinesq_worst_residual = 0.0;
  double boussinesq_worst_mean = 0.0;
  double divergence_worst = 0.0;  // ‖div_h u‖/‖∇u‖ worst over output times
  double energy_residual_u_max = 0.0;
  double energy_residual_T_max = 0.0;
  double energy_residual_u_mean = 0.0;
  double energy_residual_T_mean = 0.0;

  [[nodiscard]] std::size_t rows() const { return times.size(); }
  friend bool operator==(const TrackingReport&, const TrackingReport&) = default;
};

/// Runs the observed and the synchronized system and measures their distance.
TrackingReport run_twin(const TwinExperimentConfig& config);

/// Advances the observed system alone from T⁻ to T⁺; returns the final state.
/// Rows of `series` hold t, ‖u‖, ‖𝒯‖, ‖ℛ‖.
TargetState run_observed(const TwinExperimentConfig& config, std::vector<std::array<double, 4>>* series = nullptr);

/// Least-squares slope of -log(err) against t on [t_a, t_b] (positive = decay).
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& errs, double t_a, double t_b);

/// Recomputes the fitted quantities of a report from its series.
void refit(TrackingReport& report);

struct EnvelopeCheck {
  bool decay_passed = false;
  bool growth_passed = false;
  double decay_rate = 0.0;      // fitted r
  double envelope_rate = 0.0;   // largest r with E(t) ≤ E(0)e^{-rt} on the window
  double theoretical_rate = 0.0;  // Λ/2
  double floor = 0.0;
  double window_end = 0.0;
  double growth_rate = 0.0;     // K used
  double growth_margin = 0.0;   // max E(t)/(E(T)e^{K(t-T)})
  double max_local_slope = 0.0; // largest d log E/dt on [T, T⁺]
  std::string detail;
};

/// Decay: Λ > 0, fitted r ≥ Λ/4 and an exponential envelope exists on the
/// decay window. Growth: E(t) ≤ 1.2 E(T) e^{K(t-T)} on [T, T⁺] with K supplied
/// or fitted.
EnvelopeCheck gronwall_envelope_check(const TrackingReport& report, double lambda,
                                      std::optional<double> k_growth = std::nullopt);

struct JensenCheck {
  bool passed = false;
  double lower = 0.0;   // (1-β)‖θ‖²
  double middle = 0.0;  // ‖θ‖² - β(∫θ)²/|Ω|
  double upper = 0.0;   // ‖θ‖²
  double defect = 0.0;  // max(lower - middle, middle - upper)/upper, ≤ 0 when both bounds hold
};

JensenCheck jensen_sandwich_check(const ScalarField& T_obs, const ScalarField& T_sync, double beta);

struct ThresholdResult {
  bool found = false;
  double lambda_star = 0.0;
  double best_error = 0.0;      // max of the three norms at T for the best run
  double floor_estimate = 0.0;  // error at hi when omega is not reached
  bool bracket_certified = false;  // run at Λ*/2 misses omega
  bool monotonicity_violated = false;
  int runs = 0;
  std::vector<std::pair<double, double>> trials;  // (Λ, max error at T)
};

ThresholdResult lambda_threshold_search(const TwinExperimentConfig& config, double omega, double lo, double hi,
                                        int max_runs = 12);

struct SweepRow {
  double lambda = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double err_u = 0.0, err_T = 0.0, err_R = 0.0;  // at t = T
  double decay_rate = 0.0;
  double growth_rate = 0.0;
};

/// Runs every (Λ, δ, seed) combination; δ replaces the horizontal size of both
/// interpolants. Rows are returned in nested loop order regardless of workers.
std::vector<SweepRow> sweep(const TwinExperimentConfig& base, const std::vector<double>& lambdas,
                            const std::vector<double>& deltas, const std::vector<std::uint64_t>& seeds,
                            int workers = 1);

/// Index of the row at time t (within half a step), or rows() if absent.
std::size_t row_at(const TrackingReport& report, double t);

}  // namespace cda
