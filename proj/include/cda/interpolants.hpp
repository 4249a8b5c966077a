#pragma once
/**
 * Observation operators I_δ: finite-rank L²-orthogonal projections.
 *
 * cell_average   block means over δ×δ horizontal blocks (last block in each
 *                direction absorbs the remainder) and, for 3D fields, over
 *                vertical blocks (full column by default).
 * spectral_cutoff  keeps Fourier modes with |k|/L ≤ 1/δ in each horizontal
 *                direction (periodic grids only), then the same vertical blocks.
 */

#include <string>
#include <vector>

#include "cda/grid.hpp"

namespace cda {

enum class InterpolantKind { CellAverage, SpectralCutoff };

std::string to_string(InterpolantKind kind);
InterpolantKind interpolant_kind_from_string(const std::string& s);

/// Vertical block layout: 0 means one block over the full column.
struct VerticalLayout {
  int blocks = 0;
  static VerticalLayout parse(const std::string& s);  // "full" | "blocks:<n>"
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const VerticalLayout&, const VerticalLayout&) = default;
};

class Interpolant {
 public:
  Interpolant() = default;
  Interpolant(InterpolantKind kind, const Grid& grid, double delta, VerticalLayout vertical = {});

  static Interpolant cell_average(const Grid& grid, double delta, VerticalLayout vertical = {}) {
    return {InterpolantKind::CellAverage, grid, delta, vertical};
  }
  static Interpolant spectral_cutoff(const Grid& grid, double delta, VerticalLayout vertical = {}) {
    return {InterpolantKind::SpectralCutoff, grid, delta, vertical};
  }

  [[nodiscard]] InterpolantKind kind() const noexcept { return kind_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] const VerticalLayout& vertical() const noexcept { return vertical_; }
  /// Dimension of the range.
  [[nodiscard]] std::size_t rank() const;
  /// True when δ resolves fewer than 2 cells, so the horizontal part is the identity.
  [[nodiscard]] bool is_identity() const noexcept { return identity_; }
  [[nodiscard]] int block_x() const noexcept { return bx_; }
  [[nodiscard]] int block_y() const noexcept { return by_; }

  /// f must live on grid() or, for a 3D interpolant, on its horizontal slice.
  [[nodiscard]] ScalarField apply(const ScalarField& f) const;
  [[nodiscard]] VectorField2D apply_vector(const VectorField2D& v) const;

 private:
  [[nodiscard]] ScalarField apply_blocks(const ScalarField& f) const;
  [[nodiscard]] ScalarField apply_spectral(const ScalarField& f) const;
  [[nodiscard]] ScalarField apply_vertical(const ScalarField& f) const;

  InterpolantKind kind_ = InterpolantKind::CellAverage;
  Grid grid_;
  double delta_ = 0.0;
  VerticalLayout vertical_;
  bool identity_ = false;
  int bx_ = 1, by_ = 1;     // block sizes in cells (cell_average)
  int modes_x_ = 0, modes_y_ = 0;  // retained wavenumbers (spectral)
  std::vector<double> px_, py_;    // dense 1D projectors (spectral)
};

struct DiagnosticsReport {
  double idempotence_defect = 0.0;     // max ‖I²f - If‖ / ‖f‖
  double self_adjoint_defect = 0.0;    // max |⟨If,g⟩ - ⟨f,Ig⟩| / (‖f‖‖g‖)
  double nonexpansive_defect = 0.0;    // max (‖If‖ - ‖f‖)/‖f‖, ≤ 0 for a projection
  double approximation_constant = 0.0; // max ‖If - f‖ / (δ ‖f‖_{W^{1,2}})
  std::vector<double> approximation_errors;  // ‖If - f‖ per sample
  std::size_t samples = 0;
};

/// Pairs every sample with every other one and with a fixed pseudo-random field
/// for the self-adjointness test.
DiagnosticsReport projection_diagnostics(const Interpolant& interp, const std::vector<ScalarField>& samples);

/// ‖f‖_{W^{1,2}} = sqrt(‖f‖² + ‖∇f‖²) with interior differences only.
double w12_norm(const ScalarField& f);

}  // namespace cda
