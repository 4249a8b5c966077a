#pragma once
/**
 * Krylov solves for the implicit diffusion steps and the pressure projection.
 * All inner products go through par::blocked_sum, so iterates are independent
 * of the thread count.
 */

#include <functional>
#include <span>
#include <vector>

#include "cda/grid.hpp"

namespace cda {

struct SolverOptions {
  double tolerance = 1e-10;  // relative to the right-hand side norm
  int max_iterations = 20000;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients for A x = b with A symmetric positive semidefinite.
/// With remove_mean the iterates are kept mean-free (singular Neumann/periodic
/// operators). Throws NumericalError(kNonConvergence) past the iteration cap.
SolveStats conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply_a,
                              std::span<const double> b, std::span<double> x, const SolverOptions& opts,
                              bool remove_mean);

/// Same, with the iterates kept orthogonal to an orthonormal basis of ker A.
SolveStats conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply_a,
                              std::span<const double> b, std::span<double> x, const SolverOptions& opts,
                              const std::vector<std::vector<double>>& nullspace);

/// Orthonormal basis of the kernel of div_h∘grad_h on g.
std::vector<std::vector<double>> wide_laplacian_kernel(const Grid& g);

enum class PoissonBC { Periodic, Neumann, Dirichlet };

struct PoissonResult {
  ScalarField solution;
  double removed_mean = 0.0;  // mean subtracted from a singular problem's rhs
  SolveStats stats;
};

/// Solves Δ f = rhs with the compact Laplacian. Periodic refers to the
/// horizontal directions; with nz > 1 the vertical faces take the Dirichlet
/// (or Neumann) ghost. Dirichlet data, if given, enter through the ghosts.
/// Singular problems return the zero-mean solution and report the offset.
PoissonResult poisson_solve(const ScalarField& rhs, PoissonBC bc, const SolverOptions& opts = {},
                            const ScalarBC* dirichlet_data = nullptr);

/// Solves (I - c Δ) x = b with c ≥ 0 and the given scalar condition (data
/// included through the boundary source).
ScalarField helmholtz_solve(const ScalarField& b, double c, const ScalarBC& bc, const SolverOptions& opts = {},
                            SolveStats* stats = nullptr);

struct ProjectionResult {
  VectorField2D velocity;
  ScalarField potential;  // φ with u_out = u_in - grad_h φ, zero mean
  double divergence_before = 0.0;
  double divergence_after = 0.0;
  SolveStats stats;
};

/// Discrete Leray projection: div_h(grad_h φ) = div_h u, then u - grad_h φ.
/// div_h of the result vanishes to solver tolerance.
ProjectionResult project(const VectorField2D& u, const SolverOptions& opts = {});

}  // namespace cda
