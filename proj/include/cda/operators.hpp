#pragma once
/**
 * Discrete operators on cell-centered grids.
 *
 * grad_h and div_h are an adjoint pair: at walls grad_h mirrors the cell value
 * (zero normal derivative) and div_h mirrors the normal component with a sign
 * flip (zero normal flux). With these ghost rules
 *
 *     ⟨div_h v, f⟩ = -⟨v, grad_h f⟩
 *
 * holds for every discrete field, not only for compactly supported ones, and
 * div_h ∘ grad_h is the symmetric wide-stencil operator used by the projection.
 * laplacian() is the compact 5-point (2D) / 7-point (3D) operator.
 */

#include <span>

#include "cda/grid.hpp"

namespace cda {

VectorField2D grad_h(const ScalarField& f);
ScalarField div_h(const VectorField2D& v);

/// Compact Laplacian, Δ_h for nz = 1 and Δ_x for nz > 1. Dirichlet data enter
/// through the ghost value 2g - f₀.
ScalarField laplacian(const ScalarField& f, const ScalarBC& bc);

/// Midpoint quadrature of ∫₀¹ f dx₃.
ScalarField vertical_average(const ScalarField& f);
/// Broadcasts a horizontal field to every level of a 3D grid.
ScalarField vertical_extend(const ScalarField& f2d, const Grid& grid3d);

double integral(const ScalarField& f);
double domain_mean(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField2D& a, const VectorField2D& b);

enum class NormKind { L1, L2, L4, H1Seminorm, Max };

/// H1Seminorm uses zero-trace ghosts on walls and on the top/bottom faces,
/// i.e. the W₀^{1,2} setting; it equals sqrt(-⟨f, Δf⟩) with the homogeneous
/// Dirichlet laplacian.
double norm(const ScalarField& f, NormKind kind);
double norm(const VectorField2D& v, NormKind kind);
double h1_seminorm(const ScalarField& f, FaceCondition faces);

enum class InequalityKind { Ladyzhenskaya, Poincare };

/// ‖f‖²_{L4}/(‖f‖_{L2}‖∇f‖_{L2}) or ‖f‖_{L2}/‖∇f‖_{L2}.
double inequality_ratio(const ScalarField& f, InequalityKind kind);
double inequality_ratio(const VectorField2D& v, InequalityKind kind);

namespace ops {

enum class DataMode { Full, HomogeneousOnly };

/// out = Δ in (compact stencil). With HomogeneousOnly the Dirichlet data are
/// dropped; boundary_source() returns the dropped part so that
/// Δ_full f = Δ_hom f + boundary_source.
void apply_laplacian(const Grid& g, std::span<const double> in, std::span<double> out, const ScalarBC& bc,
                     DataMode mode);
std::vector<double> boundary_source(const Grid& g, const ScalarBC& bc);

/// div_h(u ⊗ u) with no-slip ghosts at walls.
VectorField2D momentum_advection(const VectorField2D& u);

/// u·∇_h T for a 3D (or 2D) scalar T; u is extended trivially in x₃.
ScalarField scalar_advection(const VectorField2D& u, const ScalarField& t, const ScalarBC& bc);

/// div_h(grad_h f), raw form used by the projection solver.
void apply_wide_laplacian(const Grid& g, std::span<const double> in, std::span<double> out,
                          std::vector<double>& scratch_x, std::vector<double>& scratch_y);

}  // namespace ops

}  // namespace cda
