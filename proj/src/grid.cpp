#include "cda/grid.hpp"

#include <algorithm>
#include <cmath>

#include "cda/error.hpp"
#include "cda/parallel.hpp"

namespace cda {

std::string to_string(HorizontalBC bc) { return bc == HorizontalBC::Periodic ? "periodic" : "walls"; }

HorizontalBC horizontal_bc_from_string(const std::string& s) {
  if (s == "periodic") return HorizontalBC::Periodic;
  if (s == "walls" || s == "no-slip" || s == "noslip") return HorizontalBC::Walls;
  throw ValidationError("unknown horizontal boundary condition '" + s + "'", errc::kConstraint);
}

void Grid::validate() const {
  if (nx < 1 || ny < 1 || nz < 1) throw ValidationError("grid counts must be positive", errc::kConstraint);
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw ValidationError("grid extents must be positive", errc::kConstraint);
  }
}

void Grid::require_stencil() const {
  validate();
  if (nx < 4 || ny < 4 || (nz > 1 && nz < 4)) {
    throw ValidationError("grid too small for differential operators (need >= 4 cells per direction)",
                          errc::kConstraint);
  }
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
  if (v.size() != grid.size()) throw ValidationError("field size does not match grid", errc::kGridMismatch);
}

bool ScalarField::all_finite() const {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

namespace {
void require_same(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ValidationError("fields live on different grids", errc::kGridMismatch);
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same(grid, o.grid);
  par::for_each_index(v.size(), [&](std::size_t i) { v[i] += o.v[i]; });
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same(grid, o.grid);
  par::for_each_index(v.size(), [&](std::size_t i) { v[i] -= o.v[i]; });
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  par::for_each_index(v.size(), [&](std::size_t i) { v[i] *= s; });
  return *this;
}

VectorField2D::VectorField2D(const Grid& g) : grid(g.horizontal()), x(grid.size(), 0.0), y(grid.size(), 0.0) {}

VectorField2D::VectorField2D(const ScalarField& cx, const ScalarField& cy) : grid(cx.grid), x(cx.v), y(cy.v) {
  require_same(cx.grid, cy.grid);
  if (grid.nz != 1) throw ValidationError("vector fields are horizontal (nz = 1)", errc::kGridMismatch);
}

ScalarField VectorField2D::component(int c) const { return ScalarField(grid, c == 0 ? x : y); }

bool VectorField2D::all_finite() const {
  auto fin = [](double v) { return std::isfinite(v); };
  return std::all_of(x.begin(), x.end(), fin) && std::all_of(y.begin(), y.end(), fin);
}

VectorField2D& VectorField2D::operator+=(const VectorField2D& o) {
  require_same(grid, o.grid);
  par::for_each_index(x.size(), [&](std::size_t i) {
    x[i] += o.x[i];
    y[i] += o.y[i];
  });
  return *this;
}

VectorField2D& VectorField2D::operator-=(const VectorField2D& o) {
  require_same(grid, o.grid);
  par::for_each_index(x.size(), [&](std::size_t i) {
    x[i] -= o.x[i];
    y[i] -= o.y[i];
  });
  return *this;
}

VectorField2D& VectorField2D::operator*=(double s) {
  par::for_each_index(x.size(), [&](std::size_t i) {
    x[i] *= s;
    y[i] *= s;
  });
  return *this;
}

BoundaryValues BoundaryValues::zeros(const Grid& g) {
  BoundaryValues b;
  if (!g.periodic()) {
    b.x_lo.assign(static_cast<std::size_t>(g.ny * g.nz), 0.0);
    b.x_hi.assign(static_cast<std::size_t>(g.ny * g.nz), 0.0);
    b.y_lo.assign(static_cast<std::size_t>(g.nx * g.nz), 0.0);
    b.y_hi.assign(static_cast<std::size_t>(g.nx * g.nz), 0.0);
  }
  if (g.nz > 1) {
    b.z_lo.assign(static_cast<std::size_t>(g.nx * g.ny), 0.0);
    b.z_hi.assign(static_cast<std::size_t>(g.nx * g.ny), 0.0);
  }
  return b;
}

bool BoundaryValues::matches(const Grid& g) const {
  const auto ref = zeros(g);
  return x_lo.size() == ref.x_lo.size() && x_hi.size() == ref.x_hi.size() && y_lo.size() == ref.y_lo.size() &&
         y_hi.size() == ref.y_hi.size() && z_lo.size() == ref.z_lo.size() && z_hi.size() == ref.z_hi.size();
}

double BoundaryValues::max_abs() const {
  double m = 0.0;
  for (const auto* face : {&x_lo, &x_hi, &y_lo, &y_hi, &z_lo, &z_hi}) {
    for (double v : *face) m = std::max(m, std::abs(v));
  }
  return m;
}

ScalarBC ScalarBC::dirichlet(BoundaryValues values) {
  return dirichlet(std::make_shared<const BoundaryValues>(std::move(values)));
}

ScalarBC ScalarBC::dirichlet(std::shared_ptr<const BoundaryValues> values) {
  ScalarBC bc;
  bc.kind = FaceCondition::Dirichlet;
  bc.values = std::move(values);
  return bc;
}

ScalarBC ScalarBC::zero_dirichlet() {
  ScalarBC bc;
  bc.kind = FaceCondition::Dirichlet;
  bc.homogeneous = true;
  return bc;
}

ScalarBC ScalarBC::neumann() {
  ScalarBC bc;
  bc.kind = FaceCondition::Neumann;
  return bc;
}

void ScalarBC::require_data(const Grid& g) const {
  if (kind != FaceCondition::Dirichlet || homogeneous) return;
  if (!values) throw ValidationError("missing boundary data for Dirichlet condition");
  if (!values->matches(g)) throw ValidationError("boundary data does not match grid", errc::kGridMismatch);
}

}  // namespace cda
