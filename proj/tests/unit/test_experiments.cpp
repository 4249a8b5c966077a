#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cda/error.hpp"
#include "cda/experiments.hpp"
#include "cda/operators.hpp"

using namespace cda;

namespace {

TwinExperimentConfig small_config(double lambda) {
  thermo::TransportLaws tl;
  tl.kappa0 = 0.0125;
  const Grid g{16, 16, 4, 1.0, 1.0, HorizontalBC::Walls};
  TwinExperimentConfig c;
  c.setup = ProblemSetup::make(g, thermo::GasModel::ideal(0.0, tl), {1.0, 1.0}, 0.5, {1.0, 1.0});
  c.nudging = NudgingConfig{lambda, 0.5, Interpolant::cell_average(g.horizontal(), 0.25),
                            Interpolant::cell_average(g, 0.25, VerticalLayout{2})};
  c.t_minus = -0.1;
  c.t_plus = 1.0;
  c.dt = 0.01;
  c.output_every = 5;
  c.d_sync = 0.05;
  return c;
}

TrackingReport synthetic(double lambda, double k, double t_sync, double t_plus, double dt) {
  TrackingReport r;
  r.lambda = lambda;
  r.t_sync = t_sync;
  r.t_plus = t_plus;
  const int n = static_cast<int>(std::lround(t_plus / dt));
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    r.times.push_back(t);
    const double e = t <= t_sync ? std::exp(-0.5 * lambda * t) : std::exp(-0.5 * lambda * t_sync + k * (t - t_sync));
    r.combined.push_back(e);
  }
  return r;
}

}  // namespace

TEST(FitDecayRate, Examples) {
  std::vector<double> t, e, c;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(0.02 * i);
    e.push_back(std::exp(-3.0 * t.back()));
    c.push_back(2.0);
  }
  EXPECT_NEAR(fit_decay_rate(t, e, 0.0, 1.0), 3.0, 1e-6);
  EXPECT_NEAR(fit_decay_rate(t, c, 0.0, 1.0), 0.0, 1e-12);
}

TEST(FitDecayRate, NoisyExponential) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  std::vector<double> t, e;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.02 * i);
    e.push_back(std::exp(-2.0 * t.back()) * (1.0 + noise(rng)));
  }
  EXPECT_NEAR(fit_decay_rate(t, e, 0.0, 2.0), 2.0, 0.2);
}

TEST(FitDecayRate, Errors) {
  const std::vector<double> t{0.0, 0.1, 0.2, 0.3};
  EXPECT_THROW((void)fit_decay_rate(t, {1.0, 0.5, 0.0, 0.1}, 0.0, 0.3), ValidationError);
  EXPECT_THROW((void)fit_decay_rate(t, {1.0, 0.5, 0.2, 0.1}, 0.0, 0.1), ValidationError);
}

TEST(Envelope, ExactSyntheticReportPassesWithZeroMargin) {
  const auto r = synthetic(10.0, 0.7, 1.0, 2.0, 0.01);
  const auto c = gronwall_envelope_check(r, 10.0, 0.7);
  EXPECT_TRUE(c.decay_passed);
  EXPECT_TRUE(c.growth_passed);
  EXPECT_NEAR(c.decay_rate, 5.0, 1e-9);
  EXPECT_NEAR(c.envelope_rate, 5.0, 1e-9);
  EXPECT_NEAR(c.growth_margin, 1.0, 1e-12);
  const auto fitted = gronwall_envelope_check(r, 10.0);
  EXPECT_NEAR(fitted.growth_rate, 0.7, 1e-9);
  EXPECT_TRUE(fitted.growth_passed);
}

TEST(Envelope, ZeroLambdaFailsDecayKeepsGrowth) {
  const auto r = synthetic(0.0, 0.3, 1.0, 2.0, 0.01);
  const auto c = gronwall_envelope_check(r, 0.0);
  EXPECT_FALSE(c.decay_passed);
  EXPECT_TRUE(c.growth_passed);
  EXPECT_TRUE(std::isfinite(c.growth_rate));
}

TEST(Envelope, GrowthBeyondEnvelopeFails) {
  auto r = synthetic(10.0, 0.5, 1.0, 2.0, 0.01);
  r.combined[150] *= 1.5;
  EXPECT_FALSE(gronwall_envelope_check(r, 10.0, 0.5).growth_passed);
}

TEST(Envelope, DecayWindowStopsAtTheFloor) {
  // Decay by 1e12 and then a flat floor: the window ends within 1e3 of the floor.
  TrackingReport r;
  r.lambda = 60;
  r.t_sync = 1.0;
  r.t_plus = 1.5;
  for (int i = 0; i <= 150; ++i) {
    const double t = 0.01 * i;
    r.times.push_back(t);
    r.combined.push_back(std::max(std::exp(-30.0 * t), 1e-12));
  }
  refit(r);
  EXPECT_NEAR(r.floor, 1e-12, 1e-20);
  // exp(-30t) reaches 1e3 × floor at t = ln(1e9)/30 ≈ 0.6908, first sample 0.70.
  EXPECT_NEAR(r.decay_window_end, 0.70, 1e-12);
  EXPECT_NEAR(r.decay_rate, 30.0, 1e-6);
}

TEST(Jensen, Examples) {
  const Grid g{8, 8, 4, 2.0, 1.0, HorizontalBC::Walls};
  const ScalarField a = ScalarField::sample(g, [](double x, double y, double z) { return x * y + z; });
  const auto same = jensen_sandwich_check(a, a, 0.5);
  EXPECT_EQ(same.lower, 0.0);
  EXPECT_EQ(same.middle, 0.0);
  EXPECT_EQ(same.upper, 0.0);
  EXPECT_TRUE(same.passed);

  const double c = 0.3;
  for (double beta : {0.1, 0.5, 0.9}) {
    const auto j = jensen_sandwich_check(a, a + ScalarField(g, c), beta);
    EXPECT_NEAR(j.middle, (1 - beta) * c * c * g.volume(), 1e-14);
    EXPECT_NEAR(j.middle, j.lower, 1e-14);
    EXPECT_TRUE(j.passed);
  }
  ScalarField mf = ScalarField::sample(g, [](double x, double, double) { return x - 1.0; });
  const auto free = jensen_sandwich_check(a, a + mf, 0.5);
  EXPECT_NEAR(free.middle, free.upper, 1e-14);
  EXPECT_THROW((void)jensen_sandwich_check(a, a, 1.0), ValidationError);
}

TEST(TwinRun, ObservedInitialStateGivesZeroError) {
  auto c = small_config(10.0);
  c.sync_init = SyncInit::Observed;
  const auto r = run_twin(c);
  ASSERT_GT(r.rows(), 3u);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    EXPECT_LT(r.err_u[i], 1e-14);
    EXPECT_LT(r.err_T[i], 1e-14);
    EXPECT_LT(r.err_R[i], 1e-14);
  }
}

TEST(TwinRun, RowsCoverWindowAndInvariantsHold) {
  const auto r = run_twin(small_config(20.0));
  EXPECT_EQ(r.times.front(), 0.0);
  EXPECT_NEAR(r.times.back(), 1.0, 1e-12);
  EXPECT_LT(row_at(r, 0.5), r.rows());
  EXPECT_EQ(r.nudging_active[row_at(r, 0.5)], 0);
  EXPECT_EQ(r.nudging_active[0], 1);
  EXPECT_LT(r.boussinesq_worst_residual, 1e-12);
  EXPECT_LT(r.boussinesq_worst_mean, 1e-12);
  EXPECT_LT(r.divergence_worst, 1e-8);
  EXPECT_TRUE(r.jensen_passed);
  EXPECT_LT(r.err_T[row_at(r, 0.5)], r.err_T[0]);
}

TEST(TwinRun, Deterministic) {
  const auto c = small_config(20.0);
  EXPECT_TRUE(run_twin(c) == run_twin(c));
}

TEST(TwinRun, ConfigValidation) {
  auto c = small_config(20.0);
  c.t_minus = 0.1;
  EXPECT_THROW((void)run_twin(c), ValidationError);
  c = small_config(300.0);
  EXPECT_THROW((void)run_twin(c), ValidationError);
  c = small_config(1.0);
  c.dt = 0.03;  // 0.5 is not a multiple
  EXPECT_THROW((void)run_twin(c), ValidationError);
}

TEST(ThresholdSearch, HugeOmegaReturnsLo) {
  const auto res = lambda_threshold_search(small_config(0.0), 1e6, 1.0, 100.0, 4);
  EXPECT_TRUE(res.found);
  EXPECT_EQ(res.lambda_star, 1.0);
  EXPECT_EQ(res.runs, 1);
}

TEST(ThresholdSearch, UnreachableOmegaReportsFloor) {
  const auto res = lambda_threshold_search(small_config(0.0), 1e-300, 1.0, 100.0, 4);
  EXPECT_FALSE(res.found);
  EXPECT_GT(res.floor_estimate, 0.0);
  EXPECT_EQ(res.runs, 2);
}

TEST(ThresholdSearch, NominalOmegaIsBracketed) {
  const auto base = small_config(0.0);
  // omega between the errors at Λ = 2 and Λ = 100.
  const auto lo_err = lambda_threshold_search(base, 1e-300, 2.0, 100.0, 4);
  ASSERT_EQ(lo_err.trials.size(), 2u);
  const double omega = std::sqrt(lo_err.trials[0].second * lo_err.trials[1].second);
  const auto res = lambda_threshold_search(base, omega, 2.0, 100.0, 10);
  ASSERT_TRUE(res.found);
  EXPECT_FALSE(res.monotonicity_violated);
  EXPECT_TRUE(res.bracket_certified);
  EXPECT_LE(res.best_error, omega);
}

TEST(Sweep, RowOrderIndependentOfWorkers) {
  auto base = small_config(0.0);
  base.t_plus = 0.6;
  base.energy_diagnostics = false;
  const std::vector<double> lambdas{5.0, 20.0};
  const std::vector<double> deltas{0.25, 0.125};
  const std::vector<std::uint64_t> seeds{1};
  const auto serial = sweep(base, lambdas, deltas, seeds, 1);
  const auto threaded = sweep(base, lambdas, deltas, seeds, 3);
  ASSERT_EQ(serial.size(), 4u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].lambda, threaded[i].lambda);
    EXPECT_EQ(serial[i].delta, threaded[i].delta);
    EXPECT_EQ(serial[i].err_u, threaded[i].err_u);
    EXPECT_EQ(serial[i].err_T, threaded[i].err_T);
  }
  EXPECT_EQ(serial[0].lambda, 5.0);
  EXPECT_EQ(serial[1].delta, 0.125);
}
