#pragma once
/**
 * Serial reference kernels. They pad the field with an explicit ghost layer and
 * then apply the interior stencil everywhere, which is a different code path
 * from the branchy OpenMP kernels in operators.cpp. Tests and the benchmark
 * compare the two.
 */

#include <vector>

#include "cda/grid.hpp"

namespace cda::reference {

std::vector<double> laplacian(const ScalarField& f, const ScalarBC& bc);
VectorField2D grad_h(const ScalarField& f);
ScalarField div_h(const VectorField2D& v);
ScalarField wide_laplacian(const ScalarField& f);
VectorField2D momentum_advection(const VectorField2D& u);
ScalarField scalar_advection(const VectorField2D& u, const ScalarField& t, const ScalarBC& bc);
double sum(const std::vector<double>& v);

}  // namespace cda::reference
