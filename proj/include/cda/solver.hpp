#pragma once
/**
 * Semi-implicit time stepping of the rotating Boussinesq target system and of
 * its nudged twin.
 *
 *   ρ̄(∂_t u + div_h(u⊗u)) + ∇_hΠ = μ̄Δ_h u + ⟨ℛ⟩∇_hΦ  [- Λ I_δ[ũ - u]]
 *   ρ̄c_p(∂_t𝒯 + u·∇_h𝒯) - ρ̄ϑ̄α u·∇_hΦ = κ̄Δ𝒯 + ϑ̄αp_ϑ ∂_t⨍𝒯  [- ϑ̄Λ I_δ[𝒯̃ - 𝒯]]
 *   p_ρℛ + p_ϑ𝒯 = ρ̄Φ + const,  ∫ℛ = 0
 *
 * with Φ = -x₃ + c_f|x_h|² (x_h measured from the domain centre). Diffusion is
 * implicit, everything else explicit, followed by a discrete projection. The
 * part of ⟨ℛ⟩∇_hΦ that is a function of Φ alone is a gradient and is carried by
 * Π, so that zero temperature data keep the fluid exactly at rest.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cda/grid.hpp"
#include "cda/interpolants.hpp"
#include "cda/linear_solvers.hpp"
#include "cda/thermo.hpp"

namespace cda {

/// Temperature boundary profile ϑ_B(x) = dT_v (1/2 - x₃) + dT_r (|x_h|²/r_max² - 1/2),
/// evaluated at cell faces for data and at cell centres for initial states.
struct BoundaryProfile {
  double dT_vertical = 0.0;
  double dT_radial = 0.0;
};

struct ProblemSetup {
  Grid grid;  // 3D grid for temperature; velocity lives on grid.horizontal()
  thermo::GasModel model = thermo::GasModel::ideal();
  thermo::ReferenceState ref;
  thermo::DerivedCoefficients coeffs;
  double mu_bar = 0.0;
  double kappa_bar = 0.0;
  double centrifugal = 0.5;
  BoundaryProfile profile;
  std::shared_ptr<const BoundaryValues> theta_boundary;
  ScalarField phi;            // Φ on the 3D grid
  ScalarField phi_h;          // c_f|x_h|² on the horizontal grid
  VectorField2D grad_phi_h;   // 2c_f x_h, analytic
  SolverOptions linear;

  /// Validates the thermodynamic coefficients and the closure denominator.
  static ProblemSetup make(const Grid& grid, const thermo::GasModel& model, const thermo::ReferenceState& ref,
                           double centrifugal, BoundaryProfile profile, SolverOptions linear = {});

  [[nodiscard]] double nu() const { return mu_bar / ref.rho_bar; }
  /// κ̄/(ρ̄c_p), the temperature diffusivity.
  [[nodiscard]] double diffusivity() const { return kappa_bar / (ref.rho_bar * coeffs.c_p); }
  /// ρ̄c_p - ϑ̄αp_ϑ, denominator of the mean-temperature closure.
  [[nodiscard]] double closure_denominator() const;
  /// β = ϑ̄αp_ϑ/(ρ̄c_p) ∈ (0,1), weight of the mean term.
  [[nodiscard]] double closure_beta() const;
  [[nodiscard]] ScalarBC temperature_bc() const { return ScalarBC::dirichlet(theta_boundary); }
  [[nodiscard]] double boundary_value(double x, double y, double z) const;
};

struct TargetState {
  VectorField2D u;
  ScalarField T;
  ScalarField Pi;
  double t = 0.0;
};

struct NudgingConfig {
  double lambda = 0.0;
  double window_end = 0.0;  // nudging active on [0, window_end)
  Interpolant velocity;
  Interpolant temperature;

  [[nodiscard]] bool active_at(double t, double dt) const;
};

/// ℛ = (ρ̄Φ - p_ϑ𝒯)/p_ρ shifted to zero mean.
ScalarField boussinesq_density(const ScalarField& T, const ProblemSetup& setup);
/// max |p_ρ∂ℛ + p_ϑ∂𝒯 - ρ̄∂Φ| over all cell faces (one-sided differences),
/// relative to the largest of the three terms.
double boussinesq_residual(const ScalarField& R, const ScalarField& T, const ProblemSetup& setup);

/// Seeded smooth perturbations with prescribed L¹ norm.
ScalarField smooth_temperature_perturbation(const Grid& g, double l1, std::uint64_t seed);
VectorField2D smooth_velocity_perturbation(const Grid& g, double l1, std::uint64_t seed,
                                           const SolverOptions& opts = {});
/// ϑ_B sampled at cell centres; matches the boundary data.
ScalarField boundary_profile_field(const ProblemSetup& setup);

/// Projects u0 and adds perturbations of L¹ size d (temperature perturbation
/// vanishes on ∂Ω, velocity perturbation is divergence-free).
TargetState well_prepared_state(const ProblemSetup& setup, const ScalarField& T0, const VectorField2D& u0, double d,
                                std::uint64_t seed, double t0 = 0.0);

struct StepInfo {
  double mean_rate = 0.0;           // the closed ∂_t⨍𝒯
  double divergence_after = 0.0;    // ‖div_h u‖ after projection
  bool nudging_active = false;
  int projection_iterations = 0;
};

TargetState step_target(const TargetState& state, const ProblemSetup& setup, double dt, StepInfo* info = nullptr);
TargetState step_synchronized(const TargetState& state, const TargetState& observed, const NudgingConfig& nudging,
                              const ProblemSetup& setup, double dt, StepInfo* info = nullptr);

/// Individual terms of the difference-energy identities between a synchronized
/// state (ũ, 𝒯̃) and an observed one (u, 𝒯), e = ũ - u, θ = 𝒯̃ - 𝒯:
///   (1/2) d/dt ‖e‖²            = viscous + advection + buoyancy + nudging
///   (1/2) d/dt (‖θ‖² - β(∫θ)²/|Ω|) = diffusion + advection + adiabatic + nudging
struct EnergyTerms {
  double velocity_energy = 0.0;     // (1/2)‖e‖²
  double temperature_energy = 0.0;  // (1/2)(‖θ‖² - β(∫θ)²/|Ω|)
  double u_viscous = 0.0, u_advection = 0.0, u_buoyancy = 0.0, u_nudging = 0.0;
  double t_diffusion = 0.0, t_advection = 0.0, t_adiabatic = 0.0, t_nudging = 0.0;
  [[nodiscard]] double velocity_rhs() const { return u_viscous + u_advection + u_buoyancy + u_nudging; }
  [[nodiscard]] double temperature_rhs() const { return t_diffusion + t_advection + t_adiabatic + t_nudging; }
};

EnergyTerms energy_terms(const TargetState& observed, const TargetState& sync, const NudgingConfig& nudging,
                         const ProblemSetup& setup, bool nudging_active);

struct EnergyResidual {
  double t = 0.0;
  double velocity = 0.0;     // imbalance / largest term
  double temperature = 0.0;
  EnergyTerms terms;         // at the start of the step
};

/// Per-step imbalance between the finite-difference rate of the energies and
/// the trapezoidal average of the right-hand sides. Trajectories hold states at
/// consecutive steps of size dt.
std::vector<EnergyResidual> energy_identity_residual(const std::vector<TargetState>& observed,
                                                     const std::vector<TargetState>& sync,
                                                     const NudgingConfig& nudging, const ProblemSetup& setup,
                                                     double dt);

}  // namespace cda
