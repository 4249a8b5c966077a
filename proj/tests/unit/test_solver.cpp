#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cda/error.hpp"
#include "cda/operators.hpp"
#include "cda/solver.hpp"

using namespace cda;
using std::numbers::pi;

namespace {

Grid box(int n, int nz) { return Grid{n, n, nz, 1.0, 1.0, HorizontalBC::Walls}; }

ProblemSetup ideal_setup(const Grid& g, double centrifugal, BoundaryProfile prof, double kappa0 = 0.0125) {
  thermo::TransportLaws tl;
  tl.kappa0 = kappa0;
  return ProblemSetup::make(g, thermo::GasModel::ideal(0.0, tl), {1.0, 1.0}, centrifugal, prof);
}

TargetState rest_state(const ProblemSetup& s) {
  return TargetState{VectorField2D(s.grid.horizontal()), ScalarField(s.grid), ScalarField(s.grid.horizontal()), 0.0};
}

TargetState generic_state(const ProblemSetup& s, std::uint64_t seed) {
  return well_prepared_state(s, boundary_profile_field(s), VectorField2D(s.grid.horizontal()), 0.05, seed);
}

double max_diff(const TargetState& a, const TargetState& b) {
  return std::max(norm(a.u - b.u, NormKind::Max), norm(a.T - b.T, NormKind::Max));
}

NudgingConfig nudging(const ProblemSetup& s, double lambda, double window_end) {
  return NudgingConfig{lambda, window_end, Interpolant::cell_average(s.grid.horizontal(), 0.25),
                       Interpolant::cell_average(s.grid, 0.25, VerticalLayout{2})};
}

}  // namespace

TEST(BoussinesqDensity, ZeroTemperatureGivesCenteredPotential) {
  const auto s = ideal_setup(box(8, 4), 0.5, {});
  const auto R = boussinesq_density(ScalarField(s.grid), s);
  const double m = domain_mean(s.phi);
  for (std::size_t i = 0; i < R.size(); ++i) EXPECT_NEAR(R.v[i], s.phi.v[i] - m, 1e-14);
}

TEST(BoussinesqDensity, CancellingTemperature) {
  const auto s = ideal_setup(box(8, 4), 0.5, {});
  const auto T = (s.ref.rho_bar / s.coeffs.p_theta) * s.phi;
  EXPECT_LT(norm(boussinesq_density(T, s), NormKind::Max), 1e-14);
}

TEST(BoussinesqDensity, RandomTemperatureResidualAtRoundOff) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  const auto T = smooth_temperature_perturbation(s.grid, 0.3, 5) + boundary_profile_field(s);
  const auto R = boussinesq_density(T, s);
  EXPECT_LT(boussinesq_residual(R, T, s), 1e-13);
  EXPECT_LT(std::abs(domain_mean(R)), 1e-12);
}

TEST(WellPrepared, TrivialEquilibrium) {
  const auto s = ideal_setup(box(8, 4), 0.5, {});
  const auto st = well_prepared_state(s, ScalarField(s.grid), VectorField2D(s.grid.horizontal()), 0.0, 1);
  EXPECT_EQ(norm(st.u, NormKind::Max), 0.0);
  EXPECT_EQ(norm(st.T, NormKind::Max), 0.0);
}

TEST(WellPrepared, ProjectsRotationalVelocity) {
  const auto s = ideal_setup(box(32, 4), 0.5, {});
  const Grid gh = s.grid.horizontal();
  // Rotation damped to vanish on the walls.
  const auto u0 = VectorField2D::sample(gh, [](double x, double y) {
    const double w = std::sin(pi * x) * std::sin(pi * y);
    return std::array<double, 2>{w * (y - 0.5), -w * (x - 0.5)};
  });
  const auto st = well_prepared_state(s, ScalarField(s.grid), u0, 0.0, 1);
  EXPECT_LE(norm(div_h(st.u), NormKind::L2), 1e-8 * norm(st.u, NormKind::L2));
}

TEST(WellPrepared, PerturbationSizeBound) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 0.5});
  const auto T0 = boundary_profile_field(s);
  const VectorField2D u0(s.grid.horizontal());
  const auto st = well_prepared_state(s, T0, u0, 0.1, 3);
  EXPECT_LE(norm(st.T - T0, NormKind::L1), 0.1 * (1 + 1e-12));
  EXPECT_LE(norm(st.u - u0, NormKind::L1), 0.1 * (1 + 1e-12));
  EXPECT_GT(norm(st.T - T0, NormKind::L1), 0.0);
}

TEST(WellPrepared, RejectsBoundaryMismatch) {
  const auto s = ideal_setup(box(8, 4), 0.5, {1.0, 0.0});
  EXPECT_THROW((void)well_prepared_state(s, ScalarField(s.grid, 3.0), VectorField2D(s.grid.horizontal()), 0.0, 1),
               ValidationError);
}

TEST(StepTarget, TrivialEquilibriumIsPreserved) {
  const auto s = ideal_setup(box(16, 8), 0.5, {});
  auto st = rest_state(s);
  for (int n = 0; n < 20; ++n) {
    const auto next = step_target(st, s, 0.01);
    EXPECT_LT(max_diff(next, st), 1e-10);
    st = next;
  }
}

TEST(StepTarget, MeanFreeDiffusionModeDecaysAtTheDiscreteRate) {
  // Without a potential gradient the velocity stays at rest; a mean-free Dirichlet
  // mode has no closure contribution and decays at κ/(ρ̄c_p)·λ.
  const int n = 16;
  const auto s = ideal_setup(box(n, n), 0.0, {}, 0.5);
  const double h = 1.0 / n;
  const double lam = 4 / (h * h) * (2 * std::pow(std::sin(pi * h / 2), 2) + std::pow(std::sin(pi * h), 2));
  auto st = rest_state(s);
  st.T = ScalarField::sample(s.grid, [](double x, double y, double z) {
    return std::sin(pi * x) * std::sin(2 * pi * y) * std::sin(pi * z);
  });
  const double dt = 1e-3;
  const int steps = 200;
  const double a0 = norm(st.T, NormKind::L2);
  for (int k = 0; k < steps; ++k) st = step_target(st, s, dt);
  EXPECT_LT(norm(st.u, NormKind::Max), 1e-12);
  const double rate = -std::log(norm(st.T, NormKind::L2) / a0) / (steps * dt);
  const double expected = s.diffusivity() * lam;
  EXPECT_NEAR(rate, expected, 0.05 * expected);
  // Implicit Euler gives the factor 1/(1 + κ'λdt) per step.
  EXPECT_NEAR(rate, std::log1p(expected * dt) / dt, 1e-6 * expected);
}

TEST(StepTarget, LowestModeDecayReflectsTheMeanClosure) {
  // The closure adds a uniform heating β/(1-β)·κ'⨍ΔT, so the lowest mode decays
  // at an effective rate between κ'λ₁ and κ'λ₁/(1-β).
  const int n = 16;
  const auto s = ideal_setup(box(n, n), 0.0, {}, 0.5);
  const double h = 1.0 / n;
  const double lam = 3 * 4 / (h * h) * std::pow(std::sin(pi * h / 2), 2);
  auto st = rest_state(s);
  st.T = ScalarField::sample(s.grid, [](double x, double y, double z) {
    return std::sin(pi * x) * std::sin(pi * y) * std::sin(pi * z);
  });
  const double dt = 1e-3;
  std::vector<double> means;
  StepInfo info;
  for (int k = 0; k < 300; ++k) {
    const double before = domain_mean(st.T);
    st = step_target(st, s, dt, &info);
    means.push_back(domain_mean(st.T));
    if (k == 0) EXPECT_LT(info.mean_rate, 0.0);
    (void)before;
  }
  const double rate = std::log(means[100] / means[299]) / (199 * dt);
  const double base = s.diffusivity() * lam;
  const double beta = s.closure_beta();
  EXPECT_GT(rate, base * 0.95);
  EXPECT_LT(rate, base / (1 - beta) * 1.05);
}

TEST(StepTarget, FirstOrderInTime) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  const auto st0 = generic_state(s, 7);
  const double tau = 0.005;
  std::vector<TargetState> out;
  for (int m : {1, 2, 4, 8}) {
    auto st = st0;
    for (int k = 0; k < m; ++k) st = step_target(st, s, tau / m);
    out.push_back(st);
  }
  const double d1 = max_diff(out[0], out[1]);
  const double d2 = max_diff(out[1], out[2]);
  const double d3 = max_diff(out[2], out[3]);
  EXPECT_GE(std::log2(d1 / d2), 0.9);
  EXPECT_GE(std::log2(d2 / d3), 0.9);
}

TEST(StepTarget, KeepsVelocityDivergenceFree) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  auto st = generic_state(s, 9);
  StepInfo info;
  for (int k = 0; k < 10; ++k) {
    st = step_target(st, s, 0.01, &info);
    const double gn = std::hypot(h1_seminorm(st.u.component(0), FaceCondition::Dirichlet),
                                 h1_seminorm(st.u.component(1), FaceCondition::Dirichlet));
    EXPECT_LE(norm(div_h(st.u), NormKind::L2), 1e-8 * gn);
  }
  EXPECT_NEAR(domain_mean(st.Pi), 0.0, 1e-10);
}

TEST(StepTarget, Errors) {
  const auto s = ideal_setup(box(8, 4), 0.5, {});
  auto st = rest_state(s);
  std::fill(st.u.x.begin(), st.u.x.end(), 10.0);
  try {
    (void)step_target(st, s, 0.1);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), errc::kCfl);
  }
  EXPECT_THROW((void)step_target(rest_state(s), s, 0.0), ValidationError);
  auto wrong = rest_state(ideal_setup(box(12, 4), 0.5, {}));
  EXPECT_THROW((void)step_target(wrong, s, 0.01), ValidationError);
}

TEST(StepSynchronized, FixedPointAndZeroLambdaMatchTarget) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  const auto obs = generic_state(s, 1);
  const auto other = generic_state(s, 2);
  const auto target = step_target(obs, s, 0.01);
  EXPECT_EQ(max_diff(step_synchronized(obs, obs, nudging(s, 50, 1.0), s, 0.01), target), 0.0);
  EXPECT_EQ(max_diff(step_synchronized(other, obs, nudging(s, 0, 1.0), s, 0.01), step_target(other, s, 0.01)), 0.0);
}

TEST(StepSynchronized, WindowIndicator) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  auto obs = generic_state(s, 1);
  auto other = generic_state(s, 2);
  obs.t = other.t = 1.5;
  StepInfo info;
  const auto out = step_synchronized(other, obs, nudging(s, 50, 1.0), s, 0.01, &info);
  EXPECT_FALSE(info.nudging_active);
  EXPECT_EQ(max_diff(out, step_target(other, s, 0.01)), 0.0);
  obs.t = other.t = 0.5;
  (void)step_synchronized(other, obs, nudging(s, 50, 1.0), s, 0.01, &info);
  EXPECT_TRUE(info.nudging_active);
}

TEST(StepSynchronized, Errors) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  auto obs = generic_state(s, 1);
  auto other = generic_state(s, 2);
  try {
    (void)step_synchronized(other, obs, nudging(s, 500, 1.0), s, 0.01);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), errc::kStability);
  }
  other.t = 0.01;
  EXPECT_THROW((void)step_synchronized(other, obs, nudging(s, 5, 1.0), s, 0.01), ValidationError);
  other.t = 0.0;
  EXPECT_THROW((void)step_synchronized(other, obs, nudging(s, -1, 1.0), s, 0.01), ValidationError);
  auto small = rest_state(ideal_setup(box(8, 8), 0.5, {1.0, 1.0}));
  EXPECT_THROW((void)step_synchronized(small, obs, nudging(s, 5, 1.0), s, 0.01), ValidationError);
}

TEST(EnergyIdentity, IdenticalTrajectoriesHaveZeroTerms) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  std::vector<TargetState> traj{generic_state(s, 4)};
  for (int k = 0; k < 3; ++k) traj.push_back(step_target(traj.back(), s, 0.01));
  const auto res = energy_identity_residual(traj, traj, nudging(s, 10, 1.0), s, 0.01);
  ASSERT_EQ(res.size(), 3u);
  for (const auto& r : res) {
    const auto& e = r.terms;
    for (double v : {e.velocity_energy, e.temperature_energy, e.u_viscous, e.u_advection, e.u_buoyancy, e.u_nudging,
                     e.t_diffusion, e.t_advection, e.t_adiabatic, e.t_nudging}) {
      EXPECT_EQ(v, 0.0);
    }
    EXPECT_EQ(r.velocity, 0.0);
    EXPECT_EQ(r.temperature, 0.0);
  }
}

TEST(EnergyIdentity, ZeroLambdaDropsTheNudgingTerms) {
  const auto s = ideal_setup(box(16, 8), 0.5, {1.0, 1.0});
  const auto obs = generic_state(s, 1);
  const auto syn = generic_state(s, 2);
  const auto off = energy_terms(obs, syn, nudging(s, 0.0, 1.0), s, false);
  const auto on = energy_terms(obs, syn, nudging(s, 10.0, 1.0), s, true);
  EXPECT_EQ(off.u_nudging, 0.0);
  EXPECT_EQ(off.t_nudging, 0.0);
  EXPECT_LT(on.u_nudging, 0.0);
  EXPECT_LT(on.t_nudging, 0.0);
  EXPECT_EQ(off.u_viscous, on.u_viscous);
  EXPECT_EQ(off.t_diffusion, on.t_diffusion);
  EXPECT_NEAR(off.velocity_rhs(), off.u_viscous + off.u_advection + off.u_buoyancy, 1e-15 * std::abs(off.u_viscous));
}

TEST(EnergyIdentity, RejectsMisalignedInput) {
  const auto s = ideal_setup(box(8, 4), 0.5, {});
  std::vector<TargetState> a{rest_state(s), rest_state(s)};
  std::vector<TargetState> b{rest_state(s)};
  EXPECT_THROW((void)energy_identity_residual(a, b, nudging(s, 1, 1), s, 0.01), ValidationError);
}
