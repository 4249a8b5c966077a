#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace cda {

enum class HorizontalBC { Periodic, Walls };

std::string to_string(HorizontalBC bc);
HorizontalBC horizontal_bc_from_string(const std::string& s);

/// Cell-centered structured grid on [0,lx]×[0,ly]×[0,1]. Fields with nz = 1
/// live on the horizontal cross-section; the vertical extent stays 1 so that
/// cell volumes of 2D and 3D fields are measured consistently.
struct Grid {
  int nx = 4;
  int ny = 4;
  int nz = 1;
  double lx = 1.0;
  double ly = 1.0;
  HorizontalBC horizontal_bc = HorizontalBC::Walls;

  [[nodiscard]] double dx() const { return lx / nx; }
  [[nodiscard]] double dy() const { return ly / ny; }
  [[nodiscard]] double dz() const { return 1.0 / nz; }
  [[nodiscard]] double cell_volume() const { return dx() * dy() * dz(); }
  [[nodiscard]] double volume() const { return lx * ly; }
  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  [[nodiscard]] std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(i);
  }
  [[nodiscard]] double x(int i) const { return (i + 0.5) * dx(); }
  [[nodiscard]] double y(int j) const { return (j + 0.5) * dy(); }
  [[nodiscard]] double z(int k) const { return (k + 0.5) * dz(); }
  [[nodiscard]] bool periodic() const { return horizontal_bc == HorizontalBC::Periodic; }
  [[nodiscard]] bool is_horizontal() const { return nz == 1; }
  [[nodiscard]] Grid horizontal() const {
    Grid g = *this;
    g.nz = 1;
    return g;
  }

  /// Counts ≥ 1 and positive extents.
  void validate() const;
  /// Counts ≥ 4 in every direction that carries a stencil.
  void require_stencil() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
  ScalarField(const Grid& g, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid& g, F&& f) {
    ScalarField out(g);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.v[g.index(i, j, k)] = f(g.x(i), g.y(j), g.z(k));
    return out;
  }

  [[nodiscard]] std::size_t size() const { return v.size(); }
  double& operator()(int i, int j, int k = 0) { return v[grid.index(i, j, k)]; }
  double operator()(int i, int j, int k = 0) const { return v[grid.index(i, j, k)]; }
  [[nodiscard]] bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
};

/// Horizontal vector field on a grid with nz = 1.
struct VectorField2D {
  Grid grid;
  std::vector<double> x;
  std::vector<double> y;

  VectorField2D() = default;
  explicit VectorField2D(const Grid& g);
  VectorField2D(const ScalarField& cx, const ScalarField& cy);

  template <class F>
  static VectorField2D sample(const Grid& g, F&& f) {
    VectorField2D out(g);
    for (int j = 0; j < out.grid.ny; ++j)
      for (int i = 0; i < out.grid.nx; ++i) {
        const auto val = f(out.grid.x(i), out.grid.y(j));
        out.x[out.grid.index(i, j)] = val[0];
        out.y[out.grid.index(i, j)] = val[1];
      }
    return out;
  }

  [[nodiscard]] std::size_t size() const { return x.size(); }
  [[nodiscard]] ScalarField component(int c) const;
  [[nodiscard]] bool all_finite() const;

  VectorField2D& operator+=(const VectorField2D& o);
  VectorField2D& operator-=(const VectorField2D& o);
  VectorField2D& operator*=(double s);
  friend VectorField2D operator+(VectorField2D a, const VectorField2D& b) { return a += b; }
  friend VectorField2D operator-(VectorField2D a, const VectorField2D& b) { return a -= b; }
  friend VectorField2D operator*(double s, VectorField2D a) { return a *= s; }
};

/// Dirichlet data on the non-periodic faces of a grid. Face arrays are indexed
/// x faces: k*ny + j, y faces: k*nx + i, z faces: j*nx + i. x/y faces exist only
/// for wall grids, z faces only for nz > 1.
struct BoundaryValues {
  std::vector<double> x_lo, x_hi;
  std::vector<double> y_lo, y_hi;
  std::vector<double> z_lo, z_hi;

  static BoundaryValues zeros(const Grid& g);

  /// Samples f(x, y, z) at the face centers.
  template <class F>
  static BoundaryValues sample(const Grid& g, F&& f) {
    BoundaryValues b = zeros(g);
    if (!g.periodic()) {
      for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j) {
          b.x_lo[static_cast<std::size_t>(k * g.ny + j)] = f(0.0, g.y(j), g.z(k));
          b.x_hi[static_cast<std::size_t>(k * g.ny + j)] = f(g.lx, g.y(j), g.z(k));
        }
      for (int k = 0; k < g.nz; ++k)
        for (int i = 0; i < g.nx; ++i) {
          b.y_lo[static_cast<std::size_t>(k * g.nx + i)] = f(g.x(i), 0.0, g.z(k));
          b.y_hi[static_cast<std::size_t>(k * g.nx + i)] = f(g.x(i), g.ly, g.z(k));
        }
    }
    if (g.nz > 1) {
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          b.z_lo[static_cast<std::size_t>(j * g.nx + i)] = f(g.x(i), g.y(j), 0.0);
          b.z_hi[static_cast<std::size_t>(j * g.nx + i)] = f(g.x(i), g.y(j), 1.0);
        }
    }
    return b;
  }

  [[nodiscard]] bool matches(const Grid& g) const;
  [[nodiscard]] double max_abs() const;
};

enum class FaceCondition { Dirichlet, Neumann };

/// Boundary condition for scalar operators on the non-periodic faces.
/// Dirichlet requires explicit data; homogeneous data must be requested
/// through zero_dirichlet().
struct ScalarBC {
  FaceCondition kind = FaceCondition::Dirichlet;
  std::shared_ptr<const BoundaryValues> values;  // null means homogeneous
  bool homogeneous = false;

  static ScalarBC dirichlet(BoundaryValues values);
  static ScalarBC dirichlet(std::shared_ptr<const BoundaryValues> values);
  static ScalarBC zero_dirichlet();
  static ScalarBC neumann();

  /// Throws ValidationError("missing boundary data") for Dirichlet without data.
  void require_data(const Grid& g) const;
};

}  // namespace cda
