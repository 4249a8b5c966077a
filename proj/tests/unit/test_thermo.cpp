#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cda/error.hpp"
#include "cda/thermo.hpp"

using namespace cda::thermo;

namespace {

GasModel power_model(std::vector<PowerTerm> terms, double a = 0.0) {
  return GasModel(StructuralFunction::power_sum(std::move(terms)), a, TransportLaws{});
}

}  // namespace

TEST(Pressure, IdealGasReducesToRhoTheta) {
  EXPECT_DOUBLE_EQ(pressure(GasModel::ideal(), 2.0, 3.0), 6.0);
}

TEST(Pressure, RadiationOnlyAtZeroDensity) {
  EXPECT_DOUBLE_EQ(pressure(GasModel::ideal(3.0), 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(pressure(GasModel::degenerate(5.0 / 3.0, 1.0, 3.0), 0.0, 1.0), 1.0);
}

TEST(Pressure, QuadraticStructuralFunction) {
  // 1 + 1 + 0.3/3
  EXPECT_NEAR(pressure(power_model({{1.0, 1.0}, {1.0, 2.0}}, 0.3), 1.0, 1.0), 2.1, 1e-14);
}

TEST(Pressure, RejectsInvalidState) {
  EXPECT_THROW((void)pressure(GasModel::ideal(), 1.0, 0.0), cda::ValidationError);
  EXPECT_THROW((void)pressure(GasModel::ideal(), -1.0, 1.0), cda::ValidationError);
}

TEST(InternalEnergy, Examples) {
  EXPECT_DOUBLE_EQ(internal_energy(GasModel::ideal(), 5.0, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(internal_energy(GasModel::ideal(1.0), 1.0, 1.0), 2.5);
  EXPECT_THROW((void)internal_energy(GasModel::ideal(), 0.0, 1.0), cda::ValidationError);
}

TEST(InternalEnergy, MonoatomicIdentity) {
  const std::vector<GasModel> models{GasModel::ideal(), GasModel::degenerate(), power_model({{1.0, 1.0}, {0.5, 1.4}})};
  for (const auto& m : models) {
    for (double rho : {0.1, 0.7, 2.0, 9.0}) {
      for (double theta : {0.3, 1.0, 4.0}) {
        const double pm = pressure(m, rho, theta);
        const double em = internal_energy(m, rho, theta);
        EXPECT_NEAR(pm, 2.0 / 3.0 * rho * em, 1e-13 * std::abs(pm));
      }
    }
  }
}

TEST(Entropy, RadiationPart) {
  // P ≡ 0 keeps only the radiation contribution (4a/3)ϑ³/ρ.
  const auto m = power_model({}, 0.75);
  EXPECT_NEAR(entropy(m, 1.0, 1.0), 1.0, 1e-14);
}

TEST(Entropy, IdealGasIsMinusLogZ) {
  const auto m = GasModel::ideal();
  const double c = entropy(m, 1.0, 1.0);
  for (double rho : {0.2, 1.0, 3.0}) {
    for (double theta : {0.5, 1.0, 2.5}) {
      EXPECT_NEAR(entropy(m, rho, theta) - c, -std::log(rho / std::pow(theta, 1.5)), 1e-13);
    }
  }
  EXPECT_FALSE(m.entropy_normalized_at_infinity());
  EXPECT_DOUBLE_EQ(m.entropy_profile(1.0), 0.0);
}

TEST(Entropy, DegenerateProfileMatchesClosedForm) {
  // κ_deg = 5/3, Z_c = 1: with u = Z^{2/3}, 𝒮(Z) = (3/2)[ln((1+u)/u) + 1/(1+u)].
  const auto m = GasModel::degenerate();
  ASSERT_TRUE(m.entropy_normalized_at_infinity());
  for (double z : {0.01, 0.5, 1.0, 10.0, 1e4}) {
    const double u = std::pow(z, 2.0 / 3.0);
    const double exact = 1.5 * (std::log((1.0 + u) / u) + 1.0 / (1.0 + u));
    EXPECT_NEAR(m.entropy_profile(z), exact, 1e-10 * (1.0 + std::abs(exact))) << "Z=" << z;
  }
}

TEST(Entropy, DecreasingInZ) {
  for (const auto& m : {GasModel::ideal(), GasModel::degenerate()}) {
    double prev = m.entropy_profile(1e-3);
    for (double z = 2e-3; z < 50.0; z *= 1.7) {
      const double s = m.entropy_profile(z);
      EXPECT_LT(s, prev);
      prev = s;
    }
  }
}

TEST(Transport, LawExamples) {
  const GasModel m = GasModel::ideal(0.0, TransportLaws{0.5, 0.0, 1.0, 6.5});
  EXPECT_DOUBLE_EQ(transport_coefficients(m, 1.0).mu, 1.0);
  EXPECT_DOUBLE_EQ(m.transport().kappa(0.0), 1.0);
  EXPECT_DOUBLE_EQ(transport_coefficients(m, 2.0).eta, 0.0);
  EXPECT_THROW((void)transport_coefficients(m, 0.0), cda::ValidationError);
}

TEST(DerivedCoefficients, IdealGasClosedForms) {
  const auto d = derived_coefficients(GasModel::ideal(), {1.0, 1.0});
  EXPECT_DOUBLE_EQ(d.p_rho, 1.0);
  EXPECT_DOUBLE_EQ(d.p_theta, 1.0);
  EXPECT_DOUBLE_EQ(d.alpha, 1.0);
  EXPECT_DOUBLE_EQ(d.c_v, 1.5);
  EXPECT_DOUBLE_EQ(d.c_p, 2.5);
}

TEST(DerivedCoefficients, AgreeWithCentralDifferences) {
  const std::vector<GasModel> models{GasModel::ideal(0.2), GasModel::degenerate(), GasModel::degenerate(1.0, 2.0, 0.1)};
  const std::vector<ReferenceState> refs{{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.7}};
  for (const auto& m : models) {
    for (const auto& r : refs) {
      const auto d = derived_coefficients(m, r);
      const double h = 1e-5;
      const double p_rho = (pressure(m, r.rho_bar + h, r.theta_bar) - pressure(m, r.rho_bar - h, r.theta_bar)) / (2 * h);
      const double p_theta =
          (pressure(m, r.rho_bar, r.theta_bar + h) - pressure(m, r.rho_bar, r.theta_bar - h)) / (2 * h);
      const double c_v =
          (internal_energy(m, r.rho_bar, r.theta_bar + h) - internal_energy(m, r.rho_bar, r.theta_bar - h)) / (2 * h);
      const double s_rho = (entropy(m, r.rho_bar + h, r.theta_bar) - entropy(m, r.rho_bar - h, r.theta_bar)) / (2 * h);
      const double s_theta =
          (entropy(m, r.rho_bar, r.theta_bar + h) - entropy(m, r.rho_bar, r.theta_bar - h)) / (2 * h);
      EXPECT_NEAR(d.p_rho, p_rho, 1e-6 * std::abs(p_rho));
      EXPECT_NEAR(d.p_theta, p_theta, 1e-6 * std::abs(p_theta));
      EXPECT_NEAR(d.c_v, c_v, 1e-6 * std::abs(c_v));
      EXPECT_NEAR(d.s_rho, s_rho, 1e-6 * std::abs(s_rho));
      EXPECT_NEAR(d.s_theta, s_theta, 1e-6 * std::abs(s_theta));
      EXPECT_DOUBLE_EQ(d.alpha * r.rho_bar * d.p_rho, d.p_theta);
    }
  }
}

TEST(DerivedCoefficients, RejectsUnstableModel) {
  EXPECT_THROW((void)derived_coefficients(power_model({{-1.0, 1.0}}), {1.0, 1.0}), cda::ValidationError);
}

TEST(RelativeEnergy, ZeroAtEquality) {
  for (const auto& m : {GasModel::ideal(), GasModel::degenerate(5.0 / 3.0, 1.0, 0.3)}) {
    const FluidPointState s{1.3, 0.8, {0.1, -0.2, 0.0}};
    EXPECT_EQ(relative_energy(m, 1.0, s, s), 0.0);
    EXPECT_EQ(relative_energy(m, 0.01, s, s), 0.0);
  }
}

TEST(RelativeEnergy, QuadraticScaling) {
  const auto m = GasModel::ideal();
  const FluidPointState c{1.0, 1.0, {0.0, 0.0, 0.0}};
  std::vector<double> lx, ly;
  for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const FluidPointState s{1.0 + 0.3 * h, 1.0 + 0.2 * h, {0.1 * h, 0.0, 0.0}};
    lx.push_back(std::log(h));
    ly.push_back(std::log(relative_energy(m, 1.0, s, c)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / 4, my += ly[i] / 4;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  EXPECT_NEAR(sxy / sxx, 2.0, 0.05);
}

TEST(RelativeEnergy, NonnegativeFuzz) {
  const auto m = GasModel::ideal();
  const FluidPointState c{1.0, 1.0, {0.0, 0.0, 0.0}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.5, 2.0), du(-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0));
  double lo = 1.0;
  for (int n = 0; n < 10000; ++n) {
    const FluidPointState s{d(rng), d(rng), {du(rng), du(rng), du(rng)}};
    lo = std::min(lo, relative_energy(m, 1.0, s, c));
  }
  EXPECT_GE(lo, -1e-12);
}

TEST(RelativeEnergy, EpsilonScaling) {
  const auto m = GasModel::degenerate();
  const FluidPointState c{1.1, 0.9, {0.2, 0.0, 0.0}};
  const FluidPointState s{0.8, 1.3, {-0.1, 0.3, 0.0}};
  const auto parts = relative_energy_parts(m, s, c);
  for (double eps : {1.0, 0.5, 0.1}) {
    const double lhs = relative_energy(m, eps, s, c);
    const double rhs = relative_energy(m, 1.0, s, c) / (eps * eps) + (1.0 - 1.0 / (eps * eps)) * parts.kinetic;
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
  }
  EXPECT_THROW((void)relative_energy(m, 1.0, s, {0.0, 1.0, {}}), cda::ValidationError);
}

TEST(Gibbs, IdealGasResidualSmall) {
  const auto r = gibbs_residual(GasModel::ideal(), 1.0, 1.0, 1e-5);
  EXPECT_LT(std::abs(r.res_theta), 1e-6);
  EXPECT_LT(std::abs(r.res_rho), 1e-6);
}

TEST(Gibbs, RadiationOnly) {
  const auto r = gibbs_residual(power_model({}, 0.5), 2.0, 1.0, 1e-5);
  EXPECT_LT(std::abs(r.res_theta), 1e-6);
  EXPECT_LT(std::abs(r.res_rho), 1e-6);
}

TEST(Gibbs, SecondOrderInStep) {
  for (const auto& m : {GasModel::ideal(), GasModel::degenerate()}) {
    const auto coarse = gibbs_residual(m, 0.7, 1.3, 1e-2);
    const auto fine = gibbs_residual(m, 0.7, 1.3, 1e-4);
    const double ratio = std::abs(coarse.res_theta) / std::abs(fine.res_theta);
    EXPECT_GT(ratio, 5e3);
    EXPECT_LT(ratio, 2e4);
  }
  EXPECT_THROW((void)gibbs_residual(GasModel::ideal(), 1.0, 1.0, 0.5), cda::ValidationError);
}

TEST(Hypotheses, IdealGasFlagsEntropyLimit) {
  const auto rep = check_hypotheses(GasModel::ideal(), 10.0, 200);
  EXPECT_TRUE(rep.find("w10.P0").passed);
  EXPECT_TRUE(rep.find("w10.monotone").passed);
  EXPECT_TRUE(rep.find("w10.cv_bounds").passed);
  EXPECT_TRUE(rep.find("w14a.liminf").passed);
  EXPECT_FALSE(rep.find("w14.entropy_limit").passed);
  EXPECT_TRUE(rep.find("w14.entropy_limit").flag_only);
  EXPECT_TRUE(rep.required_passed());
}

TEST(Hypotheses, DegeneratePresetPassesAll) {
  const auto rep = check_hypotheses(GasModel::degenerate(), 10.0, 200);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.id;
}

TEST(Hypotheses, CounterExamples) {
  const auto neg = check_hypotheses(power_model({{-1.0, 1.0}}), 10.0, 50);
  EXPECT_FALSE(neg.find("w10.monotone").passed);
  EXPECT_FALSE(neg.required_passed());
  const auto sq = check_hypotheses(power_model({{1.0, 2.0}}), 10.0, 50);
  EXPECT_FALSE(sq.find("w10.cv_bounds").passed);
  EXPECT_GT(sq.find("w10.cv_bounds").witness, 0.0);
}
