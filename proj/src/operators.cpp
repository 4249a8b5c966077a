#include "cda/operators.hpp"

#include <cmath>

#include "cda/error.hpp"
#include "cda/parallel.hpp"

namespace cda {

namespace {

void require_horizontal(const Grid& g, const char* op) {
  if (g.nz != 1) throw ValidationError(std::string(op) + " expects a horizontal field (nz = 1)", errc::kGridMismatch);
}

void require_same(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ValidationError("fields live on different grids", errc::kGridMismatch);
}

// Row-parallel loop over (k, j); body(k, j, row_offset).
template <class Body>
void for_each_row(const Grid& g, Body&& body) {
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(g.ny) * g.nz;
  const bool big = static_cast<std::ptrdiff_t>(g.size()) > par::kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const int k = static_cast<int>(r / g.ny);
    const int j = static_cast<int>(r % g.ny);
    body(k, j, g.index(0, j, k));
  }
}

}  // namespace

namespace ops {

void apply_laplacian(const Grid& g, std::span<const double> in, std::span<double> out, const ScalarBC& bc,
                     DataMode mode) {
  g.require_stencil();
  bc.require_data(g);
  const int nx = g.nx;
  const int ny = g.ny;
  const int nz = g.nz;
  const auto plane = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  const double iz2 = 1.0 / (g.dz() * g.dz());
  const bool per = g.periodic();
  const double gs = bc.kind == FaceCondition::Dirichlet ? -1.0 : 1.0;
  const BoundaryValues* bv = (mode == DataMode::Full && bc.kind == FaceCondition::Dirichlet && !bc.homogeneous)
                                 ? bc.values.get()
                                 : nullptr;

  for_each_row(g, [&](int k, int j, std::size_t row) {
    const std::size_t xf = static_cast<std::size_t>(k * ny + j);
    for (int i = 0; i < nx; ++i) {
      const std::size_t id = row + static_cast<std::size_t>(i);
      const double c = in[id];
      double l;
      double r;
      if (i > 0) {
        l = in[id - 1];
      } else if (per) {
        l = in[id + static_cast<std::size_t>(nx - 1)];
      } else {
        l = gs * c + (bv ? 2.0 * bv->x_lo[xf] : 0.0);
      }
      if (i < nx - 1) {
        r = in[id + 1];
      } else if (per) {
        r = in[row];
      } else {
        r = gs * c + (bv ? 2.0 * bv->x_hi[xf] : 0.0);
      }
      double acc = (l - 2.0 * c + r) * ix2;

      const std::size_t yf = static_cast<std::size_t>(k * nx + i);
      double s;
      double n;
      if (j > 0) {
        s = in[id - static_cast<std::size_t>(nx)];
      } else if (per) {
        s = in[id + static_cast<std::size_t>((ny - 1) * nx)];
      } else {
        s = gs * c + (bv ? 2.0 * bv->y_lo[yf] : 0.0);
      }
      if (j < ny - 1) {
        n = in[id + static_cast<std::size_t>(nx)];
      } else if (per) {
        n = in[id - static_cast<std::size_t>((ny - 1) * nx)];
      } else {
        n = gs * c + (bv ? 2.0 * bv->y_hi[yf] : 0.0);
      }
      acc += (s - 2.0 * c + n) * iy2;

      if (nz > 1) {
        const std::size_t zf = static_cast<std::size_t>(j * nx + i);
        const double b = k > 0 ? in[id - plane] : gs * c + (bv ? 2.0 * bv->z_lo[zf] : 0.0);
        const double t = k < nz - 1 ? in[id + plane] : gs * c + (bv ? 2.0 * bv->z_hi[zf] : 0.0);
        acc += (b - 2.0 * c + t) * iz2;
      }
      out[id] = acc;
    }
  });
}

std::vector<double> boundary_source(const Grid& g, const ScalarBC& bc) {
  std::vector<double> zero(g.size(), 0.0);
  std::vector<double> out(g.size(), 0.0);
  apply_laplacian(g, zero, out, bc, DataMode::Full);
  return out;
}

namespace {

// Central x/y differences with an even ghost (mirror) at walls.
void even_central(const Grid& g, std::span<const double> f, std::span<double> dfx, std::span<double> dfy) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = 0.5 / g.dx();
  const double hy = 0.5 / g.dy();
  const bool per = g.periodic();
  for_each_row(g, [&](int /*k*/, int j, std::size_t row) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t id = row + static_cast<std::size_t>(i);
      const double l = i > 0 ? f[id - 1] : (per ? f[id + static_cast<std::size_t>(nx - 1)] : f[id]);
      const double r = i < nx - 1 ? f[id + 1] : (per ? f[row] : f[id]);
      const double s = j > 0 ? f[id - static_cast<std::size_t>(nx)]
                             : (per ? f[id + static_cast<std::size_t>((ny - 1) * nx)] : f[id]);
      const double n = j < ny - 1 ? f[id + static_cast<std::size_t>(nx)]
                                  : (per ? f[id - static_cast<std::size_t>((ny - 1) * nx)] : f[id]);
      if (!dfx.empty()) dfx[id] = (r - l) * hx;
      if (!dfy.empty()) dfy[id] = (n - s) * hy;
    }
  });
}

// div of (vx, vy) with an odd ghost for the normal component at walls.
void odd_divergence(const Grid& g, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = 0.5 / g.dx();
  const double hy = 0.5 / g.dy();
  const bool per = g.periodic();
  for_each_row(g, [&](int /*k*/, int j, std::size_t row) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t id = row + static_cast<std::size_t>(i);
      const double l = i > 0 ? vx[id - 1] : (per ? vx[id + static_cast<std::size_t>(nx - 1)] : -vx[id]);
      const double r = i < nx - 1 ? vx[id + 1] : (per ? vx[row] : -vx[id]);
      const double s = j > 0 ? vy[id - static_cast<std::size_t>(nx)]
                             : (per ? vy[id + static_cast<std::size_t>((ny - 1) * nx)] : -vy[id]);
      const double n = j < ny - 1 ? vy[id + static_cast<std::size_t>(nx)]
                                  : (per ? vy[id - static_cast<std::size_t>((ny - 1) * nx)] : -vy[id]);
      out[id] = (r - l) * hx + (n - s) * hy;
    }
  });
}

}  // namespace

VectorField2D momentum_advection(const VectorField2D& u) {
  const Grid& g = u.grid;
  g.require_stencil();
  const std::size_t n = g.size();
  std::vector<double> fxx(n), fxy(n), fyy(n);
  par::for_each_index(n, [&](std::size_t i) {
    fxx[i] = u.x[i] * u.x[i];
    fxy[i] = u.x[i] * u.y[i];
    fyy[i] = u.y[i] * u.y[i];
  });
  // Under no-slip ghosts (u_ghost = -u₀) every quadratic flux has an even ghost.
  std::vector<double> dxx(n), dyx(n), dxy(n), dyy(n);
  even_central(g, fxx, dxx, {});
  even_central(g, fxy, dxy, dyx);
  even_central(g, fyy, {}, dyy);
  VectorField2D out(g);
  par::for_each_index(n, [&](std::size_t i) {
    out.x[i] = dxx[i] + dyx[i];
    out.y[i] = dxy[i] + dyy[i];
  });
  return out;
}

ScalarField scalar_advection(const VectorField2D& u, const ScalarField& t, const ScalarBC& bc) {
  const Grid& g = t.grid;
  g.require_stencil();
  bc.require_data(g);
  if (!(u.grid == g.horizontal())) throw ValidationError("velocity and scalar grids differ", errc::kGridMismatch);
  const int nx = g.nx;
  const int ny = g.ny;
  const double hx = 0.5 / g.dx();
  const double hy = 0.5 / g.dy();
  const bool per = g.periodic();
  const double gs = bc.kind == FaceCondition::Dirichlet ? -1.0 : 1.0;
  const BoundaryValues* bv =
      (bc.kind == FaceCondition::Dirichlet && !bc.homogeneous) ? bc.values.get() : nullptr;
  const auto& f = t.v;
  ScalarField out(g);
  for_each_row(g, [&](int k, int j, std::size_t row) {
    const std::size_t xf = static_cast<std::size_t>(k * ny + j);
    for (int i = 0; i < nx; ++i) {
      const std::size_t id = row + static_cast<std::size_t>(i);
      const std::size_t id2 = g.index(i, j, 0);
      const double c = f[id];
      const double l = i > 0 ? f[id - 1]
                             : (per ? f[id + static_cast<std::size_t>(nx - 1)] : gs * c + (bv ? 2.0 * bv->x_lo[xf] : 0.0));
      const double r = i < nx - 1 ? f[id + 1] : (per ? f[row] : gs * c + (bv ? 2.0 * bv->x_hi[xf] : 0.0));
      const std::size_t yf = static_cast<std::size_t>(k * nx + i);
      const double s = j > 0 ? f[id - static_cast<std::size_t>(nx)]
                             : (per ? f[id + static_cast<std::size_t>((ny - 1) * nx)]
                                    : gs * c + (bv ? 2.0 * bv->y_lo[yf] : 0.0));
      const double n = j < ny - 1 ? f[id + static_cast<std::size_t>(nx)]
                                  : (per ? f[id - static_cast<std::size_t>((ny - 1) * nx)]
                                         : gs * c + (bv ? 2.0 * bv->y_hi[yf] : 0.0));
      out.v[id] = u.x[id2] * (r - l) * hx + u.y[id2] * (n - s) * hy;
    }
  });
  return out;
}

void apply_wide_laplacian(const Grid& g, std::span<const double> in, std::span<double> out,
                          std::vector<double>& scratch_x, std::vector<double>& scratch_y) {
  scratch_x.resize(g.size());
  scratch_y.resize(g.size());
  even_central(g, in, scratch_x, scratch_y);
  odd_divergence(g, scratch_x, scratch_y, out);
}

}  // namespace ops

VectorField2D grad_h(const ScalarField& f) {
  require_horizontal(f.grid, "grad_h");
  f.grid.require_stencil();
  VectorField2D out(f.grid);
  ops::even_central(f.grid, f.v, out.x, out.y);
  return out;
}

ScalarField div_h(const VectorField2D& v) {
  v.grid.require_stencil();
  ScalarField out(v.grid);
  ops::odd_divergence(v.grid, v.x, v.y, out.v);
  return out;
}

ScalarField laplacian(const ScalarField& f, const ScalarBC& bc) {
  ScalarField out(f.grid);
  ops::apply_laplacian(f.grid, f.v, out.v, bc, ops::DataMode::Full);
  return out;
}

ScalarField vertical_average(const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out(g.horizontal());
  const std::size_t plane = out.size();
  const double w = 1.0 / g.nz;
  par::for_each_index(plane, [&](std::size_t p) {
    double s = 0.0;
    for (int k = 0; k < g.nz; ++k) s += f.v[static_cast<std::size_t>(k) * plane + p];
    out.v[p] = s * w;
  });
  return out;
}

ScalarField vertical_extend(const ScalarField& f2d, const Grid& grid3d) {
  if (!(f2d.grid == grid3d.horizontal())) throw ValidationError("horizontal grid mismatch", errc::kGridMismatch);
  ScalarField out(grid3d);
  const std::size_t plane = f2d.size();
  par::for_each_index(out.size(), [&](std::size_t id) { out.v[id] = f2d.v[id % plane]; });
  return out;
}

double integral(const ScalarField& f) {
  return par::blocked_sum(f.size(), [&](std::size_t i) { return f.v[i]; }) * f.grid.cell_volume();
}

double domain_mean(const ScalarField& f) { return integral(f) / f.grid.volume(); }

double inner(const ScalarField& a, const ScalarField& b) {
  require_same(a.grid, b.grid);
  return par::blocked_sum(a.size(), [&](std::size_t i) { return a.v[i] * b.v[i]; }) * a.grid.cell_volume();
}

double inner(const VectorField2D& a, const VectorField2D& b) {
  require_same(a.grid, b.grid);
  return par::blocked_sum(a.size(), [&](std::size_t i) { return a.x[i] * b.x[i] + a.y[i] * b.y[i]; }) *
         a.grid.cell_volume();
}

double h1_seminorm(const ScalarField& f, FaceCondition faces) {
  const Grid& g = f.grid;
  g.require_stencil();
  const int nx = g.nx;
  const int ny = g.ny;
  const int nz = g.nz;
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  const double iz2 = 1.0 / (g.dz() * g.dz());
  const bool per = g.periodic();
  const bool dir = faces == FaceCondition::Dirichlet;
  const auto plane = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  // Each interior face is attributed to its lower cell; boundary faces carry
  // half weight of (2f₀/h)², matching -⟨f, Δf⟩ exactly.
  const double s = par::blocked_sum(g.size(), [&](std::size_t id) {
    const int i = static_cast<int>(id % static_cast<std::size_t>(nx));
    const int j = static_cast<int>((id / static_cast<std::size_t>(nx)) % static_cast<std::size_t>(ny));
    const int k = static_cast<int>(id / plane);
    const double c = f.v[id];
    double acc = 0.0;
    if (i < nx - 1) {
      const double d = f.v[id + 1] - c;
      acc += d * d * ix2;
    } else if (per) {
      const double d = f.v[id + 1 - static_cast<std::size_t>(nx)] - c;
      acc += d * d * ix2;
    } else if (dir) {
      acc += 2.0 * c * c * ix2;
    }
    if (i == 0 && !per && dir) acc += 2.0 * c * c * ix2;
    if (j < ny - 1) {
      const double d = f.v[id + static_cast<std::size_t>(nx)] - c;
      acc += d * d * iy2;
    } else if (per) {
      const double d = f.v[id - static_cast<std::size_t>((ny - 1) * nx)] - c;
      acc += d * d * iy2;
    } else if (dir) {
      acc += 2.0 * c * c * iy2;
    }
    if (j == 0 && !per && dir) acc += 2.0 * c * c * iy2;
    if (nz > 1) {
      if (k < nz - 1) {
        const double d = f.v[id + plane] - c;
        acc += d * d * iz2;
      } else if (dir) {
        acc += 2.0 * c * c * iz2;
      }
      if (k == 0 && dir) acc += 2.0 * c * c * iz2;
    }
    return acc;
  });
  return std::sqrt(s * g.cell_volume());
}

double norm(const ScalarField& f, NormKind kind) {
  const double vol = f.grid.cell_volume();
  switch (kind) {
    case NormKind::L1:
      return par::blocked_sum(f.size(), [&](std::size_t i) { return std::abs(f.v[i]); }) * vol;
    case NormKind::L2:
      return std::sqrt(par::blocked_sum(f.size(), [&](std::size_t i) { return f.v[i] * f.v[i]; }) * vol);
    case NormKind::L4:
      return std::pow(par::blocked_sum(f.size(), [&](std::size_t i) {
                        const double s = f.v[i] * f.v[i];
                        return s * s;
                      }) * vol,
                      0.25);
    case NormKind::H1Seminorm:
      return h1_seminorm(f, FaceCondition::Dirichlet);
    case NormKind::Max:
      return par::blocked_max(f.size(), [&](std::size_t i) { return std::abs(f.v[i]); });
  }
  return 0.0;
}

double norm(const VectorField2D& v, NormKind kind) {
  const double vol = v.grid.cell_volume();
  switch (kind) {
    case NormKind::L1:
      return par::blocked_sum(v.size(), [&](std::size_t i) { return std::hypot(v.x[i], v.y[i]); }) * vol;
    case NormKind::L2:
      return std::sqrt(par::blocked_sum(v.size(), [&](std::size_t i) { return v.x[i] * v.x[i] + v.y[i] * v.y[i]; }) *
                       vol);
    case NormKind::L4:
      return std::pow(par::blocked_sum(v.size(), [&](std::size_t i) {
                        const double s = v.x[i] * v.x[i] + v.y[i] * v.y[i];
                        return s * s;
                      }) * vol,
                      0.25);
    case NormKind::H1Seminorm: {
      const double a = h1_seminorm(v.component(0), FaceCondition::Dirichlet);
      const double b = h1_seminorm(v.component(1), FaceCondition::Dirichlet);
      return std::sqrt(a * a + b * b);
    }
    case NormKind::Max:
      return par::blocked_max(v.size(), [&](std::size_t i) { return std::hypot(v.x[i], v.y[i]); });
  }
  return 0.0;
}

namespace {
double ratio_from(double l2, double l4, double grad, InequalityKind kind) {
  if (kind == InequalityKind::Poincare) {
    if (!(grad > 0.0)) throw NumericalError("inequality ratio: zero gradient norm", errc::kNonFinite);
    return l2 / grad;
  }
  const double den = l2 * grad;
  if (!(den > 0.0)) throw NumericalError("inequality ratio: zero denominator", errc::kNonFinite);
  return l4 * l4 / den;
}
}  // namespace

double inequality_ratio(const ScalarField& f, InequalityKind kind) {
  return ratio_from(norm(f, NormKind::L2), norm(f, NormKind::L4), norm(f, NormKind::H1Seminorm), kind);
}

double inequality_ratio(const VectorField2D& v, InequalityKind kind) {
  return ratio_from(norm(v, NormKind::L2), norm(v, NormKind::L4), norm(v, NormKind::H1Seminorm), kind);
}

}  // namespace cda
