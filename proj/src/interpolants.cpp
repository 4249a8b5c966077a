#include "cda/interpolants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cda/error.hpp"
#include "cda/operators.hpp"
#include "cda/parallel.hpp"

namespace cda {

std::string to_string(InterpolantKind kind) {
  return kind == InterpolantKind::CellAverage ? "cell_average" : "spectral_cutoff";
}

InterpolantKind interpolant_kind_from_string(const std::string& s) {
  if (s == "cell_average") return InterpolantKind::CellAverage;
  if (s == "spectral_cutoff") return InterpolantKind::SpectralCutoff;
  throw ValidationError("unknown interpolant kind '" + s + "' (cell_average | spectral_cutoff)", errc::kConstraint);
}

VerticalLayout VerticalLayout::parse(const std::string& s) {
  if (s == "full") return {};
  const std::string prefix = "blocks:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string num = s.substr(prefix.size());
    std::size_t pos = 0;
    int n = 0;
    try {
      n = std::stoi(num, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == num.size() && !num.empty() && n >= 1) return {n};
  }
  throw ValidationError("interpolant.vertical must be 'full' or 'blocks:<n>' with n >= 1, got '" + s + "'",
                        errc::kConstraint);
}

std::string VerticalLayout::to_string() const { return blocks == 0 ? "full" : "blocks:" + std::to_string(blocks); }

namespace {

// Real orthogonal projector onto span{1, cos(2πk·/n), sin(2πk·/n) : 1 ≤ k ≤ m}.
std::vector<double> fourier_projector(int n, int m) {
  std::vector<double> p(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 1.0;
      for (int k = 1; k <= m; ++k) s += 2.0 * std::cos(2.0 * std::numbers::pi * k * (i - j) / n);
      p[static_cast<std::size_t>(i) * n + j] = s / n;
    }
  return p;
}

int block_count(int n, int b) { return std::max(1, n / b); }

// Start of block ib; the last block runs to n.
int block_lo(int ib, int b) { return ib * b; }
int block_hi(int ib, int nb, int b, int n) { return ib == nb - 1 ? n : (ib + 1) * b; }

}  // namespace

Interpolant::Interpolant(InterpolantKind kind, const Grid& grid, double delta, VerticalLayout vertical)
    : kind_(kind), grid_(grid), delta_(delta), vertical_(vertical) {
  grid_.validate();
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("interpolant delta must be > 0", errc::kConstraint);
  if (vertical_.blocks < 0 || vertical_.blocks > grid_.nz) {
    throw ValidationError("vertical block count exceeds nz", errc::kConstraint);
  }
  if (kind_ == InterpolantKind::CellAverage) {
    bx_ = std::clamp(static_cast<int>(std::floor(delta / grid_.dx() + 1e-9)), 1, grid_.nx);
    by_ = std::clamp(static_cast<int>(std::floor(delta / grid_.dy() + 1e-9)), 1, grid_.ny);
    identity_ = bx_ < 2 && by_ < 2;
  } else {
    if (!grid_.periodic()) {
      throw ValidationError("spectral_cutoff interpolant requires a periodic grid", errc::kConstraint);
    }
    const int kx = static_cast<int>(std::floor(grid_.lx / delta + 1e-9));
    const int ky = static_cast<int>(std::floor(grid_.ly / delta + 1e-9));
    const int cap_x = (grid_.nx - 1) / 2;
    const int cap_y = (grid_.ny - 1) / 2;
    identity_ = kx > cap_x && ky > cap_y;
    modes_x_ = std::min(kx, cap_x);
    modes_y_ = std::min(ky, cap_y);
    // A full set of modes is the identity; keep the matrix exact in that case.
    if (kx > cap_x && grid_.nx % 2 == 0) modes_x_ = -1;
    if (ky > cap_y && grid_.ny % 2 == 0) modes_y_ = -1;
    auto build = [](int n, int m) {
      if (m < 0) {
        std::vector<double> id(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i) * n + i] = 1.0;
        return id;
      }
      return fourier_projector(n, m);
    };
    px_ = build(grid_.nx, modes_x_);
    py_ = build(grid_.ny, modes_y_);
  }
}

std::size_t Interpolant::rank() const {
  const std::size_t vz =
      grid_.nz == 1 ? 1 : static_cast<std::size_t>(vertical_.blocks == 0 ? 1 : vertical_.blocks);
  if (kind_ == InterpolantKind::CellAverage) {
    return static_cast<std::size_t>(block_count(grid_.nx, bx_)) * block_count(grid_.ny, by_) * vz;
  }
  const auto rx = static_cast<std::size_t>(modes_x_ < 0 ? grid_.nx : 2 * modes_x_ + 1);
  const auto ry = static_cast<std::size_t>(modes_y_ < 0 ? grid_.ny : 2 * modes_y_ + 1);
  return rx * ry * vz;
}

ScalarField Interpolant::apply_blocks(const ScalarField& f) const {
  const Grid& g = f.grid;
  const int nbx = block_count(g.nx, bx_);
  const int nby = block_count(g.ny, by_);
  ScalarField out(g);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(nby) * g.nz;
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(g.size()) > par::kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const int k = static_cast<int>(r / nby);
    const int jb = static_cast<int>(r % nby);
    const int j0 = block_lo(jb, by_);
    const int j1 = block_hi(jb, nby, by_, g.ny);
    std::vector<double> sums(static_cast<std::size_t>(nbx), 0.0);
    for (int j = j0; j < j1; ++j)
      for (int ib = 0; ib < nbx; ++ib) {
        const int i1 = block_hi(ib, nbx, bx_, g.nx);
        double s = 0.0;
        for (int i = block_lo(ib, bx_); i < i1; ++i) s += f.v[g.index(i, j, k)];
        sums[static_cast<std::size_t>(ib)] += s;
      }
    for (int ib = 0; ib < nbx; ++ib) {
      const int i0 = block_lo(ib, bx_);
      const int i1 = block_hi(ib, nbx, bx_, g.nx);
      const double mean = sums[static_cast<std::size_t>(ib)] / static_cast<double>((i1 - i0) * (j1 - j0));
      for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) out.v[g.index(i, j, k)] = mean;
    }
  }
  return out;
}

ScalarField Interpolant::apply_spectral(const ScalarField& f) const {
  const Grid& g = f.grid;
  const int nx = g.nx;
  const int ny = g.ny;
  ScalarField out(g);
  const std::ptrdiff_t layers = g.nz;
  for (std::ptrdiff_t k = 0; k < layers; ++k) {
    // tmp = F · P_xᵀ (rows), then out = P_y · tmp (columns).
    std::vector<double> tmp(static_cast<std::size_t>(nx) * ny);
    const std::size_t off = static_cast<std::size_t>(k) * nx * ny;
    par::for_each_index(static_cast<std::size_t>(ny), [&](std::size_t j) {
      for (int i = 0; i < nx; ++i) {
        double s = 0.0;
        for (int m = 0; m < nx; ++m) s += px_[static_cast<std::size_t>(i) * nx + m] * f.v[off + j * nx + m];
        tmp[j * nx + i] = s;
      }
    });
    par::for_each_index(static_cast<std::size_t>(ny), [&](std::size_t j) {
      for (int i = 0; i < nx; ++i) {
        double s = 0.0;
        for (int m = 0; m < ny; ++m) s += py_[j * ny + m] * tmp[static_cast<std::size_t>(m) * nx + i];
        out.v[off + j * nx + i] = s;
      }
    });
  }
  return out;
}

ScalarField Interpolant::apply_vertical(const ScalarField& f) const {
  const Grid& g = f.grid;
  if (g.nz == 1) return f;
  const int nbz = vertical_.blocks == 0 ? 1 : vertical_.blocks;
  const int bz = g.nz / nbz;
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  ScalarField out(g);
  par::for_each_index(plane, [&](std::size_t p) {
    for (int kb = 0; kb < nbz; ++kb) {
      const int k0 = block_lo(kb, bz);
      const int k1 = block_hi(kb, nbz, bz, g.nz);
      double s = 0.0;
      for (int k = k0; k < k1; ++k) s += f.v[static_cast<std::size_t>(k) * plane + p];
      const double mean = s / (k1 - k0);
      for (int k = k0; k < k1; ++k) out.v[static_cast<std::size_t>(k) * plane + p] = mean;
    }
  });
  return out;
}

ScalarField Interpolant::apply(const ScalarField& f) const {
  const bool full = f.grid == grid_;
  if (!full && !(f.grid == grid_.horizontal())) {
    throw ValidationError("field does not live on the interpolant's grid", errc::kGridMismatch);
  }
  ScalarField h = kind_ == InterpolantKind::CellAverage ? apply_blocks(f) : apply_spectral(f);
  return apply_vertical(h);
}

VectorField2D Interpolant::apply_vector(const VectorField2D& v) const {
  if (!(v.grid == grid_.horizontal())) {
    throw ValidationError("vector field does not live on the interpolant's grid", errc::kGridMismatch);
  }
  return VectorField2D(apply(v.component(0)), apply(v.component(1)));
}

double w12_norm(const ScalarField& f) {
  const double l2 = norm(f, NormKind::L2);
  const double h1 = h1_seminorm(f, FaceCondition::Neumann);
  return std::sqrt(l2 * l2 + h1 * h1);
}

DiagnosticsReport projection_diagnostics(const Interpolant& interp, const std::vector<ScalarField>& samples) {
  DiagnosticsReport rep;
  rep.samples = samples.size();
  if (samples.empty()) return rep;

  std::vector<ScalarField> partners(samples.begin(), samples.end());
  {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField r(samples.front().grid);
    for (double& x : r.v) x = dist(rng);
    partners.push_back(std::move(r));
  }
  std::vector<ScalarField> images;
  images.reserve(partners.size());
  for (const auto& p : partners) images.push_back(interp.apply(p));

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const ScalarField& f = samples[s];
    const ScalarField& pf = images[s];
    const double nf = norm(f, NormKind::L2);
    const double err = norm(pf - f, NormKind::L2);
    rep.approximation_errors.push_back(err);
    if (nf == 0.0) continue;
    rep.idempotence_defect = std::max(rep.idempotence_defect, norm(interp.apply(pf) - pf, NormKind::L2) / nf);
    rep.nonexpansive_defect = std::max(rep.nonexpansive_defect, (norm(pf, NormKind::L2) - nf) / nf);
    const double w = w12_norm(f);
    if (w > 0.0) rep.approximation_constant = std::max(rep.approximation_constant, err / (interp.delta() * w));
    for (std::size_t q = 0; q < partners.size(); ++q) {
      if (q == s) continue;
      const double ng = norm(partners[q], NormKind::L2);
      if (ng == 0.0) continue;
      const double d = std::abs(inner(pf, partners[q]) - inner(f, images[q])) / (nf * ng);
      rep.self_adjoint_defect = std::max(rep.self_adjoint_defect, d);
    }
  }
  return rep;
}

}  // namespace cda
