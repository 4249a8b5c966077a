#include "cda/linear_solvers.hpp"

#include <cmath>
#include <string>

#include "cda/error.hpp"
#include "cda/operators.hpp"
#include "cda/parallel.hpp"

namespace cda {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return par::blocked_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double mean_of(std::span<const double> a) {
  if (a.empty()) return 0.0;
  return par::blocked_sum(a.size(), [&](std::size_t i) { return a[i]; }) / static_cast<double>(a.size());
}

void subtract(std::span<double> a, double c) {
  par::for_each_index(a.size(), [&](std::size_t i) { a[i] -= c; });
}

}  // namespace

SolveStats conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply_a,
                              std::span<const double> b_in, std::span<double> x, const SolverOptions& opts,
                              bool remove_mean) {
  std::vector<std::vector<double>> basis;
  if (remove_mean && !b_in.empty()) {
    basis.emplace_back(b_in.size(), 1.0 / std::sqrt(static_cast<double>(b_in.size())));
  }
  return conjugate_gradient(apply_a, b_in, x, opts, basis);
}

SolveStats conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply_a,
                              std::span<const double> b_in, std::span<double> x, const SolverOptions& opts,
                              const std::vector<std::vector<double>>& nullspace) {
  const std::size_t n = b_in.size();
  if (x.size() != n) throw ValidationError("conjugate_gradient: size mismatch", errc::kGridMismatch);
  for (const auto& q : nullspace) {
    if (q.size() != n) throw ValidationError("conjugate_gradient: null-space vector size mismatch", errc::kGridMismatch);
  }
  const bool deflate = !nullspace.empty();
  auto remove_kernel = [&](std::span<double> a) {
    for (const auto& q : nullspace) {
      const double c = dot(a, q);
      par::for_each_index(n, [&](std::size_t i) { a[i] -= c * q[i]; });
    }
  };
  std::vector<double> b(b_in.begin(), b_in.end());
  if (deflate) {
    remove_kernel(b);
    remove_kernel(x);
  }
  SolveStats stats;
  const double bnorm = std::sqrt(dot(b, b));
  if (!std::isfinite(bnorm)) throw NumericalError("conjugate_gradient: non-finite right-hand side", errc::kNonFinite);
  if (bnorm == 0.0) {
    par::for_each_index(n, [&](std::size_t i) { x[i] = 0.0; });
    return stats;
  }
  std::vector<double> r(n), p(n), ap(n);
  apply_a(x, ap);
  par::for_each_index(n, [&](std::size_t i) { r[i] = b[i] - ap[i]; });
  if (deflate) remove_kernel(r);
  p = r;
  double rr = dot(r, r);
  const double target = opts.tolerance * bnorm;
  int it = 0;
  while (std::sqrt(rr) > target) {
    if (it >= opts.max_iterations) {
      throw NumericalError("conjugate gradients did not converge in " + std::to_string(opts.max_iterations) +
                               " iterations (relative residual " + std::to_string(std::sqrt(rr) / bnorm) + ")",
                           errc::kNonConvergence);
    }
    apply_a(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      if (pap == 0.0 && rr == 0.0) break;
      throw NumericalError("conjugate gradients: operator not positive definite", errc::kNonConvergence);
    }
    const double alpha = rr / pap;
    par::for_each_index(n, [&](std::size_t i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    });
    if (deflate) remove_kernel(r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    par::for_each_index(n, [&](std::size_t i) { p[i] = r[i] + beta * p[i]; });
    ++it;
  }
  if (deflate) remove_kernel(x);
  stats.iterations = it;
  stats.relative_residual = std::sqrt(rr) / bnorm;
  return stats;
}

PoissonResult poisson_solve(const ScalarField& rhs, PoissonBC bc, const SolverOptions& opts,
                            const ScalarBC* dirichlet_data) {
  const Grid& g = rhs.grid;
  g.require_stencil();
  if (bc == PoissonBC::Periodic && !g.periodic()) {
    throw ValidationError("periodic Poisson solve on a wall-bounded grid", errc::kConstraint);
  }
  ScalarBC sbc = ScalarBC::zero_dirichlet();
  if (bc == PoissonBC::Neumann) {
    sbc = ScalarBC::neumann();
  } else if (dirichlet_data) {
    sbc = *dirichlet_data;
  }
  sbc.require_data(g);
  const bool singular = bc == PoissonBC::Neumann || (g.periodic() && g.nz == 1);

  PoissonResult out{ScalarField(g), 0.0, {}};
  std::vector<double> b(rhs.v);
  if (sbc.kind == FaceCondition::Dirichlet && !sbc.homogeneous) {
    const auto src = ops::boundary_source(g, sbc);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= src[i];
  }
  if (singular) {
    out.removed_mean = mean_of(b);
    subtract(b, out.removed_mean);
  }
  for (double& v : b) v = -v;
  auto apply = [&](std::span<const double> in, std::span<double> o) {
    ops::apply_laplacian(g, in, o, sbc, ops::DataMode::HomogeneousOnly);
    for (double& v : o) v = -v;
  };
  out.stats = conjugate_gradient(apply, b, out.solution.v, opts, singular);
  return out;
}

ScalarField helmholtz_solve(const ScalarField& b, double c, const ScalarBC& bc, const SolverOptions& opts,
                            SolveStats* stats) {
  const Grid& g = b.grid;
  if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("helmholtz_solve: coefficient must be >= 0");
  bc.require_data(g);
  std::vector<double> rhs(b.v);
  if (bc.kind == FaceCondition::Dirichlet && !bc.homogeneous) {
    const auto src = ops::boundary_source(g, bc);
    par::for_each_index(rhs.size(), [&](std::size_t i) { rhs[i] += c * src[i]; });
  }
  ScalarField x(g, b.v);
  if (c == 0.0) {
    x.v = rhs;
    if (stats) *stats = {};
    return x;
  }
  g.require_stencil();
  auto apply = [&](std::span<const double> in, std::span<double> o) {
    ops::apply_laplacian(g, in, o, bc, ops::DataMode::HomogeneousOnly);
    const std::size_t n = in.size();
    par::for_each_index(n, [&](std::size_t i) { o[i] = in[i] - c * o[i]; });
  };
  const SolveStats s = conjugate_gradient(apply, rhs, x.v, opts, false);
  if (stats) *stats = s;
  return x;
}

std::vector<std::vector<double>> wide_laplacian_kernel(const Grid& g) {
  // Constants always; on periodic grids with even counts the central difference
  // also annihilates the sawtooth modes (-1)^i, (-1)^j and (-1)^(i+j).
  const std::size_t n = g.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::vector<double>> basis;
  basis.emplace_back(n, scale);
  if (!g.periodic()) return basis;
  const bool ex = g.nx % 2 == 0;
  const bool ey = g.ny % 2 == 0;
  auto mode = [&](bool sx, bool sy) {
    std::vector<double> q(n);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const bool neg = ((sx ? i : 0) + (sy ? j : 0)) % 2 == 1;
          q[g.index(i, j, k)] = neg ? -scale : scale;
        }
    basis.push_back(std::move(q));
  };
  if (ex) mode(true, false);
  if (ey) mode(false, true);
  if (ex && ey) mode(true, true);
  return basis;
}

ProjectionResult project(const VectorField2D& u, const SolverOptions& opts) {
  const Grid& g = u.grid;
  g.require_stencil();
  ProjectionResult out;
  ScalarField div = div_h(u);
  out.divergence_before = norm(div, NormKind::L2);
  std::vector<double> sx, sy;
  std::vector<double> b(div.v);
  for (double& v : b) v = -v;
  auto apply = [&](std::span<const double> in, std::span<double> o) {
    ops::apply_wide_laplacian(g, in, o, sx, sy);
    for (double& v : o) v = -v;
  };
  out.potential = ScalarField(g);
  out.stats = conjugate_gradient(apply, b, out.potential.v, opts, wide_laplacian_kernel(g));
  out.velocity = u;
  out.velocity -= grad_h(out.potential);
  out.divergence_after = norm(div_h(out.velocity), NormKind::L2);
  return out;
}

}  // namespace cda
