#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "afgas/grid.hpp"

namespace afgas {

/// Free-space kernels for convolution against densities living on a grid.
///
/// The kernels are the logarithm w0 = log|x| and its gradient x/|x|^2,
/// truncated at the box diagonal. Their Fourier transforms are known in
/// closed form, so the discrete tables are obtained by sampling the
/// transform on a 4x oversampled spectrum and transforming back. Used on a
/// 2x zero-padded box this reproduces the continuous aperiodic convolution
/// of any density resolved on the grid to spectral accuracy.
///
/// Instances are immutable and safe to share between threads.
class ConvolutionKernel {
 public:
  enum class Which { w0, grad_w0 };

  /// Cached per grid geometry (point counts and spacings).
  static std::shared_ptr<const ConvolutionKernel> for_grid(const GridSpec& g);

  explicit ConvolutionKernel(const GridSpec& g);

  [[nodiscard]] int padded_nx() const { return px_; }
  [[nodiscard]] int padded_ny() const { return py_; }
  [[nodiscard]] double truncation_radius() const { return radius_; }

  /// Real-space kernel value at the lattice offset (dx, dy), |dx| < nx,
  /// |dy| < ny, without the cell-area factor. component: 0 = d/dx w0,
  /// 1 = d/dy w0, 2 = w0.
  [[nodiscard]] double table(int component, int dx, int dy) const;

  // Half-spectrum (r2c layout, py x (px/2+1)) of the wrapped tables,
  // including the cell-area factor and the 1/(px*py) inverse normalisation.
  [[nodiscard]] const std::vector<cplx>& spectrum_gx() const { return hat_gx_; }
  [[nodiscard]] const std::vector<cplx>& spectrum_gy() const { return hat_gy_; }
  [[nodiscard]] const std::vector<cplx>& spectrum_w0() const { return hat_w0_; }

 private:
  int nx_, ny_, px_, py_;
  double radius_;
  std::vector<double> gx_, gy_, w0_;  // wrapped padded tables
  std::vector<cplx> hat_gx_, hat_gy_, hat_w0_;
};

/// Result of a free-space convolution: the field plus a flag raised when the
/// density reaches the box edge (where the no-image guarantee degrades).
struct ConvolutionResult {
  ScalarField scalar;  // filled for Which::w0
  VectorField vector;  // filled for Which::grad_w0
  bool support_warning = false;
};

/// Transform-based operators on one grid. Derivatives act in the basis implied
/// by the boundary tag: sine series (dirichlet), cosine series (neumann) or
/// Fourier series on the box (plane). The highest mode in each direction has
/// no representable derivative; `project` removes it from states so that the
/// discrete Dirichlet form is positive on the admissible space.
///
/// Owns FFT plans and scratch memory: one instance per thread.
class SpectralOps {
 public:
  explicit SpectralOps(const GridSpec& g);
  ~SpectralOps();
  SpectralOps(SpectralOps&&) noexcept;
  SpectralOps& operator=(SpectralOps&&) noexcept;
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] const ConvolutionKernel& kernel() const { return *kernel_; }

  std::pair<ComplexField, ComplexField> grad(const ComplexField& u);
  VectorField grad(const ScalarField& f);

  /// D_x^* fx + D_y^* fy, the grid adjoint of `grad` (adjoint of d/dx is
  /// minus the derivative in the opposite-parity basis).
  ComplexField grad_adjoint(const ComplexField& fx, const ComplexField& fy);

  /// -D^* D u: the discrete Laplacian consistent with `grad`.
  ComplexField laplacian(const ComplexField& u);

  /// Spectral value of sum |grad u|^2 dA computed mode by mode.
  double dirichlet_form_spectral(const ComplexField& u);

  /// Removes the modes that carry no derivative (see class comment).
  void project(ComplexField& u);

  /// (shift - Laplacian)^{-1} r in the grid basis, shift > 0.
  ComplexField precondition(const ComplexField& r, double shift);

  /// Free-space convolution of a density on this grid with w0 or grad w0.
  ConvolutionResult free_space_convolve(const ScalarField& rho, ConvolutionKernel::Which which);

  /// grad-perp w0 * rho, i.e. (-(dy w0 * rho), dx w0 * rho). curl of the
  /// result equals 2 pi rho.
  VectorField grad_perp_convolve(const ScalarField& rho, bool* support_warning = nullptr);

  /// C(y) = sum_x K(x - y) . F(x) dA with K = grad-perp w0: the adjoint of
  /// rho -> grad_perp_convolve(rho) under the grid inner product.
  ScalarField grad_perp_adjoint(const VectorField& F);

 private:
  struct Impl;
  GridSpec grid_;
  std::shared_ptr<const ConvolutionKernel> kernel_;
  std::unique_ptr<Impl> impl_;
};

/// dx Fy - dy Fx by 8th-order central differences (reduced order at the box
/// edge). Vector potentials do not satisfy the grid's boundary symmetry, so
/// the curl is evaluated locally rather than by transforms.
ScalarField curl(const VectorField& F);

}  // namespace afgas
