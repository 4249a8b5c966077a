#include "cda/reference.hpp"

#include "cda/error.hpp"

namespace cda::reference {

namespace {

enum class Ghost { Even, Odd, Scalar };

// (nx+2)×(ny+2)×(nz+2) copy with one ghost layer. Scalar ghosts follow the
// scalar BC (Dirichlet: 2g - f₀, Neumann: f₀); Even/Odd mirror with sign ±1.
struct Padded {
  int nx, ny, nz;
  std::vector<double> a;
  double& at(int i, int j, int k) {
    return a[(static_cast<std::size_t>(k + 1) * (ny + 2) + static_cast<std::size_t>(j + 1)) * (nx + 2) +
             static_cast<std::size_t>(i + 1)];
  }
};

Padded pad(const Grid& g, const std::vector<double>& f, Ghost ghost, const ScalarBC* bc) {
  Padded p{g.nx, g.ny, g.nz, std::vector<double>(static_cast<std::size_t>(g.nx + 2) * (g.ny + 2) * (g.nz + 2), 0.0)};
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) p.at(i, j, k) = f[g.index(i, j, k)];

  double sign = ghost == Ghost::Odd ? -1.0 : 1.0;
  const BoundaryValues* bv = nullptr;
  if (ghost == Ghost::Scalar) {
    sign = bc->kind == FaceCondition::Dirichlet ? -1.0 : 1.0;
    if (bc->kind == FaceCondition::Dirichlet && !bc->homogeneous) bv = bc->values.get();
  }
  auto data = [&](const std::vector<double>& face, std::size_t idx) { return bv ? 2.0 * face[idx] : 0.0; };

  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j) {
      const auto fi = static_cast<std::size_t>(k * g.ny + j);
      if (g.periodic()) {
        p.at(-1, j, k) = p.at(g.nx - 1, j, k);
        p.at(g.nx, j, k) = p.at(0, j, k);
      } else {
        p.at(-1, j, k) = sign * p.at(0, j, k) + (bv ? data(bv->x_lo, fi) : 0.0);
        p.at(g.nx, j, k) = sign * p.at(g.nx - 1, j, k) + (bv ? data(bv->x_hi, fi) : 0.0);
      }
    }
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const auto fi = static_cast<std::size_t>(k * g.nx + i);
      if (g.periodic()) {
        p.at(i, -1, k) = p.at(i, g.ny - 1, k);
        p.at(i, g.ny, k) = p.at(i, 0, k);
      } else {
        p.at(i, -1, k) = sign * p.at(i, 0, k) + (bv ? data(bv->y_lo, fi) : 0.0);
        p.at(i, g.ny, k) = sign * p.at(i, g.ny - 1, k) + (bv ? data(bv->y_hi, fi) : 0.0);
      }
    }
  if (g.nz > 1) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto fi = static_cast<std::size_t>(j * g.nx + i);
        p.at(i, j, -1) = sign * p.at(i, j, 0) + (bv ? data(bv->z_lo, fi) : 0.0);
        p.at(i, j, g.nz) = sign * p.at(i, j, g.nz - 1) + (bv ? data(bv->z_hi, fi) : 0.0);
      }
  }
  return p;
}

}  // namespace

std::vector<double> laplacian(const ScalarField& f, const ScalarBC& bc) {
  const Grid& g = f.grid;
  bc.require_data(g);
  Padded p = pad(g, f.v, Ghost::Scalar, &bc);
  std::vector<double> out(g.size());
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  const double iz2 = 1.0 / (g.dz() * g.dz());
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double c = p.at(i, j, k);
        double v = (p.at(i - 1, j, k) - 2.0 * c + p.at(i + 1, j, k)) * ix2 +
                   (p.at(i, j - 1, k) - 2.0 * c + p.at(i, j + 1, k)) * iy2;
        if (g.nz > 1) v += (p.at(i, j, k - 1) - 2.0 * c + p.at(i, j, k + 1)) * iz2;
        out[g.index(i, j, k)] = v;
      }
  return out;
}

VectorField2D grad_h(const ScalarField& f) {
  const Grid& g = f.grid;
  if (g.nz != 1) throw ValidationError("reference::grad_h expects nz = 1", errc::kGridMismatch);
  Padded p = pad(g, f.v, Ghost::Even, nullptr);
  VectorField2D out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      out.x[g.index(i, j)] = (p.at(i + 1, j, 0) - p.at(i - 1, j, 0)) / (2.0 * g.dx());
      out.y[g.index(i, j)] = (p.at(i, j + 1, 0) - p.at(i, j - 1, 0)) / (2.0 * g.dy());
    }
  return out;
}

ScalarField div_h(const VectorField2D& v) {
  const Grid& g = v.grid;
  Padded px = pad(g, v.x, Ghost::Odd, nullptr);
  Padded py = pad(g, v.y, Ghost::Odd, nullptr);
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      out.v[g.index(i, j)] = (px.at(i + 1, j, 0) - px.at(i - 1, j, 0)) / (2.0 * g.dx()) +
                             (py.at(i, j + 1, 0) - py.at(i, j - 1, 0)) / (2.0 * g.dy());
    }
  return out;
}

ScalarField wide_laplacian(const ScalarField& f) { return div_h(grad_h(f)); }

VectorField2D momentum_advection(const VectorField2D& u) {
  const Grid& g = u.grid;
  // Fluxes of the padded (no-slip) velocity; the product of two odd ghosts is even.
  Padded ux = pad(g, u.x, Ghost::Odd, nullptr);
  Padded uy = pad(g, u.y, Ghost::Odd, nullptr);
  VectorField2D out(g);
  auto xx = [&](int i, int j) { return ux.at(i, j, 0) * ux.at(i, j, 0); };
  auto xy = [&](int i, int j) { return ux.at(i, j, 0) * uy.at(i, j, 0); };
  auto yy = [&](int i, int j) { return uy.at(i, j, 0) * uy.at(i, j, 0); };
  const double hx = 1.0 / (2.0 * g.dx());
  const double hy = 1.0 / (2.0 * g.dy());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      out.x[g.index(i, j)] = (xx(i + 1, j) - xx(i - 1, j)) * hx + (xy(i, j + 1) - xy(i, j - 1)) * hy;
      out.y[g.index(i, j)] = (xy(i + 1, j) - xy(i - 1, j)) * hx + (yy(i, j + 1) - yy(i, j - 1)) * hy;
    }
  return out;
}

ScalarField scalar_advection(const VectorField2D& u, const ScalarField& t, const ScalarBC& bc) {
  const Grid& g = t.grid;
  bc.require_data(g);
  Padded p = pad(g, t.v, Ghost::Scalar, &bc);
  ScalarField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t h = g.index(i, j, 0);
        out.v[g.index(i, j, k)] = u.x[h] * (p.at(i + 1, j, k) - p.at(i - 1, j, k)) / (2.0 * g.dx()) +
                                  u.y[h] * (p.at(i, j + 1, k) - p.at(i, j - 1, k)) / (2.0 * g.dy());
      }
  return out;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace cda::reference
