#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cda/error.hpp"
#include "cda/linear_solvers.hpp"
#include "cda/operators.hpp"

using namespace cda;
using std::numbers::pi;

namespace {

ScalarField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (auto& x : f.v) x = d(rng);
  return f;
}

}  // namespace

TEST(Poisson, ZeroRhsGivesZero) {
  const Grid g{16, 16, 1, 1.0, 1.0, HorizontalBC::Periodic};
  const auto r = poisson_solve(ScalarField(g), PoissonBC::Periodic);
  EXPECT_EQ(norm(r.solution, NormKind::Max), 0.0);
  EXPECT_EQ(r.removed_mean, 0.0);
}

TEST(Poisson, PeriodicEigenfunctionConverges) {
  std::vector<double> err;
  for (int n : {16, 32, 64}) {
    const Grid g{n, n, 1, 1.0, 1.0, HorizontalBC::Periodic};
    auto mode = [](double x, double y, double) { return std::sin(2 * pi * x) * std::sin(2 * pi * y); };
    const auto rhs = -8 * pi * pi * ScalarField::sample(g, mode);
    const auto r = poisson_solve(rhs, PoissonBC::Periodic);
    err.push_back(norm(r.solution - ScalarField::sample(g, mode), NormKind::Max));
    EXPECT_NEAR(domain_mean(r.solution), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.1);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 2.0, 0.1);
}

TEST(Poisson, NeumannRemovesAndReportsMean) {
  const Grid g{20, 14, 1, 1.0, 0.7, HorizontalBC::Walls};
  auto rhs = random_field(g, 1);
  const double m = domain_mean(rhs);
  const auto r = poisson_solve(rhs, PoissonBC::Neumann);
  EXPECT_NEAR(r.removed_mean, m, 1e-14);
  EXPECT_NEAR(domain_mean(r.solution), 0.0, 1e-12);
  const auto back = laplacian(r.solution, ScalarBC::neumann());
  ScalarField shifted = rhs;
  for (auto& v : shifted.v) v -= m;
  EXPECT_LT(norm(back - shifted, NormKind::L2), 1e-9 * norm(shifted, NormKind::L2));
}

TEST(Poisson, DirichletWithDataRecoversRhs) {
  const Grid g{12, 10, 6, 1.0, 1.0, HorizontalBC::Walls};
  const auto bc = ScalarBC::dirichlet(BoundaryValues::sample(g, [](double x, double y, double z) { return x - y + z; }));
  const auto rhs = random_field(g, 2);
  const auto r = poisson_solve(rhs, PoissonBC::Dirichlet, {}, &bc);
  // The solver tolerance is relative to the system it solves, rhs minus the boundary source.
  ScalarField system_rhs = rhs;
  const auto src = ops::boundary_source(g, bc);
  for (std::size_t i = 0; i < src.size(); ++i) system_rhs.v[i] -= src[i];
  EXPECT_LT(norm(laplacian(r.solution, bc) - rhs, NormKind::L2), 1e-9 * norm(system_rhs, NormKind::L2));
  EXPECT_EQ(r.removed_mean, 0.0);
}

TEST(Poisson, IterationCapRaisesNonConvergence) {
  const Grid g{32, 32, 1, 1.0, 1.0, HorizontalBC::Walls};
  try {
    (void)poisson_solve(random_field(g, 3), PoissonBC::Neumann, SolverOptions{1e-14, 3});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), errc::kNonConvergence);
  }
}

TEST(Helmholtz, ResidualAndIdentityLimit) {
  const Grid g{16, 12, 8, 1.0, 1.0, HorizontalBC::Walls};
  auto data = [](double x, double, double z) { return 0.5 - z + x * x; };
  const auto bc = ScalarBC::dirichlet(BoundaryValues::sample(g, data));
  const auto b = random_field(g, 4);
  const double c = 0.01;
  SolveStats st;
  const auto x = helmholtz_solve(b, c, bc, {}, &st);
  const auto residual = x - c * laplacian(x, bc) - b;
  EXPECT_LT(norm(residual, NormKind::L2), 1e-9 * norm(b, NormKind::L2));
  EXPECT_GT(st.iterations, 0);
  EXPECT_EQ(helmholtz_solve(b, 0.0, bc).v, b.v);
  EXPECT_THROW((void)helmholtz_solve(b, -1.0, bc), ValidationError);
}

TEST(Projection, RemovesDivergenceAndIsIdempotent) {
  for (const Grid& g : {Grid{32, 24, 1, 1.0, 0.75, HorizontalBC::Walls}, Grid{32, 32, 1, 1.0, 1.0, HorizontalBC::Periodic}}) {
    const VectorField2D u(random_field(g, 5), random_field(g, 6));
    const auto p = project(u);
    const double grad_norm = std::sqrt(std::pow(h1_seminorm(p.velocity.component(0), FaceCondition::Neumann), 2) +
                                       std::pow(h1_seminorm(p.velocity.component(1), FaceCondition::Neumann), 2));
    EXPECT_LE(norm(div_h(p.velocity), NormKind::L2), 1e-8 * grad_norm);
    EXPECT_LT(p.divergence_after, 1e-8 * p.divergence_before);
    const auto again = project(p.velocity);
    EXPECT_LT(norm(again.velocity - p.velocity, NormKind::L2), 1e-8 * norm(p.velocity, NormKind::L2));
    // The removed part is a discrete gradient and orthogonal to the result.
    EXPECT_NEAR(inner(p.velocity, grad_h(p.potential)), 0.0, 1e-8 * norm(u, NormKind::L2) * norm(u, NormKind::L2));
  }
}

TEST(Projection, PeriodicKernelIncludesSawtoothModes) {
  const Grid g{8, 6, 1, 1.0, 1.0, HorizontalBC::Periodic};
  const auto basis = wide_laplacian_kernel(g);
  ASSERT_EQ(basis.size(), 4u);
  for (const auto& q : basis) {
    const auto gq = grad_h(ScalarField(g, q));
    EXPECT_LT(norm(gq, NormKind::Max), 1e-14);
  }
  EXPECT_EQ(wide_laplacian_kernel(Grid{8, 6, 1, 1.0, 1.0, HorizontalBC::Walls}).size(), 1u);
  EXPECT_EQ(wide_laplacian_kernel(Grid{7, 6, 1, 1.0, 1.0, HorizontalBC::Periodic}).size(), 2u);
}

TEST(Projection, RotationalFieldDefectBelowTolerance) {
  const Grid g{32, 32, 1, 1.0, 1.0, HorizontalBC::Walls};
  const auto u = VectorField2D::sample(g, [&](double x, double y) { return std::array<double, 2>{y - 0.5, -(x - 0.5)}; });
  const auto p = project(u);
  EXPECT_LE(norm(div_h(p.velocity), NormKind::L2), 1e-8 * norm(p.velocity, NormKind::L2));
}
