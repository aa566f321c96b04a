#include "afgas/spectral_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fft.hpp"

namespace afgas {

namespace {

constexpr double pi = std::numbers::pi;

// Wavenumber of DFT index j on a length-n periodic axis of length L; the
// Nyquist index is reported separately.
inline double fourier_k(int j, int n, double L) {
  const int m = j <= n / 2 ? j : j - n;
  return 2.0 * pi * m / L;
}

inline int wrap(int d, int n) { return d < 0 ? d + n : d; }

}  // namespace

// ---------------------------------------------------------------------------
// ConvolutionKernel

std::shared_ptr<const ConvolutionKernel> ConvolutionKernel::for_grid(const GridSpec& g) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const ConvolutionKernel>> cache;
  const Key key{g.nx, g.ny, g.hx, g.hy};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto kernel = std::make_shared<const ConvolutionKernel>(g);
  std::lock_guard lock(mutex);
  if (cache.size() >= 24) cache.clear();
  return cache.emplace(key, kernel).first->second;
}

ConvolutionKernel::ConvolutionKernel(const GridSpec& g)
    : nx_(g.nx), ny_(g.ny), px_(2 * g.nx), py_(2 * g.ny) {
  validate(g);
  const double Lx = g.extent_x();
  const double Ly = g.extent_y();
  // Any two points of the box are closer than the truncation radius, and the
  // oversampled period leaves a gap of at least `radius` between images.
  radius_ = 1.0001 * std::hypot(Lx, Ly);
  int fx = 4, fy = 4;
  while ((fx - 1) * Lx <= radius_) ++fx;
  while ((fy - 1) * Ly <= radius_) ++fy;
  const int Nx = fx * nx_;
  const int Ny = fy * ny_;
  const double Px = Nx * g.hx;
  const double Py = Ny * g.hy;
  const double R = radius_;

  // Closed-form transforms of the truncated kernels (convention
  // f^(k) = int f(x) exp(-i k.x) dx):
  //   grad w0 : -2 pi i k (1 - J0(kR)) / k^2
  //   w0      :  2 pi [R log R J1(kR) / k - (1 - J0(kR)) / k^2]
  // They depend on |k| only; evaluate on one quadrant and mirror.
  const int hx_modes = Nx / 2;
  const int hy_modes = Ny / 2;
  std::vector<double> radial_g((hx_modes + 1) * (hy_modes + 1));
  std::vector<double> radial_w((hx_modes + 1) * (hy_modes + 1));
  for (int my = 0; my <= hy_modes; ++my) {
    for (int mx = 0; mx <= hx_modes; ++mx) {
      const double kx = 2.0 * pi * mx / Px;
      const double ky = 2.0 * pi * my / Py;
      const double k = std::hypot(kx, ky);
      const std::size_t idx = static_cast<std::size_t>(my) * (hx_modes + 1) + mx;
      if (mx == 0 && my == 0) {
        radial_g[idx] = 0.0;
        radial_w[idx] = 2.0 * pi * (R * R * std::log(R) / 2.0 - R * R / 4.0);
        continue;
      }
      const double kr = k * R;
      // POSIX j0/j1 are several times faster than std::cyl_bessel_j at the
      // same absolute accuracy, and this loop dominates kernel setup.
      const double j0 = ::j0(kr);
      const double j1 = ::j1(kr);
      radial_g[idx] = -2.0 * pi * (1.0 - j0) / (k * k);
      radial_w[idx] = 2.0 * pi * (R * std::log(R) * j1 / k - (1.0 - j0) / (k * k));
    }
  }

  std::vector<cplx> grad_hat(static_cast<std::size_t>(Nx) * Ny);
  std::vector<cplx> w0_hat(static_cast<std::size_t>(Nx) * Ny);
  for (int jy = 0; jy < Ny; ++jy) {
    const int my = jy <= hy_modes ? jy : jy - Ny;
    for (int jx = 0; jx < Nx; ++jx) {
      const int mx = jx <= hx_modes ? jx : jx - Nx;
      const std::size_t out = static_cast<std::size_t>(jy) * Nx + jx;
      if (jx == hx_modes || jy == hy_modes) {
        grad_hat[out] = 0.0;
        w0_hat[out] = 0.0;
        continue;
      }
      const std::size_t idx = static_cast<std::size_t>(std::abs(my)) * (hx_modes + 1) + std::abs(mx);
      const double kx = 2.0 * pi * mx / Px;
      const double ky = 2.0 * pi * my / Py;
      // Both gradient components are real in space, so pack them as
      // gx + i gy into one complex transform.
      const cplx hat_x = cplx(0.0, kx * radial_g[idx]);
      const cplx hat_y = cplx(0.0, ky * radial_g[idx]);
      grad_hat[out] = hat_x + cplx(0.0, 1.0) * hat_y;
      w0_hat[out] = radial_w[idx];
    }
  }
  {
    fft::Plan p1 = fft::dft_2d(Ny, Nx, grad_hat.data(), FFTW_BACKWARD);
    p1.execute();
    fft::Plan p2 = fft::dft_2d(Ny, Nx, w0_hat.data(), FFTW_BACKWARD);
    p2.execute();
  }
  const double inv_period_area = 1.0 / (Px * Py);

  const std::size_t psize = static_cast<std::size_t>(px_) * py_;
  gx_.assign(psize, 0.0);
  gy_.assign(psize, 0.0);
  w0_.assign(psize, 0.0);
  for (int dy = -(ny_ - 1); dy <= ny_ - 1; ++dy) {
    for (int dx = -(nx_ - 1); dx <= nx_ - 1; ++dx) {
      const std::size_t src = static_cast<std::size_t>(wrap(dy, Ny)) * Nx + wrap(dx, Nx);
      const std::size_t dst = static_cast<std::size_t>(wrap(dy, py_)) * px_ + wrap(dx, px_);
      gx_[dst] = grad_hat[src].real() * inv_period_area;
      gy_[dst] = grad_hat[src].imag() * inv_period_area;
      w0_[dst] = w0_hat[src].real() * inv_period_area;
    }
  }
  // Enforce exact point-reflection antisymmetry of grad w0 (and symmetry of w0).
  for (int dy = 0; dy <= ny_ - 1; ++dy) {
    for (int dx = -(nx_ - 1); dx <= nx_ - 1; ++dx) {
      if (dy == 0 && dx < 0) continue;
      const std::size_t a = static_cast<std::size_t>(wrap(dy, py_)) * px_ + wrap(dx, px_);
      const std::size_t b = static_cast<std::size_t>(wrap(-dy, py_)) * px_ + wrap(-dx, px_);
      const double ax = 0.5 * (gx_[a] - gx_[b]);
      const double ay = 0.5 * (gy_[a] - gy_[b]);
      const double aw = 0.5 * (w0_[a] + w0_[b]);
      gx_[a] = ax;
      gx_[b] = -ax;
      gy_[a] = ay;
      gy_[b] = -ay;
      w0_[a] = aw;
      w0_[b] = aw;
    }
  }
  gx_[0] = 0.0;
  gy_[0] = 0.0;

  const std::size_t hsize = static_cast<std::size_t>(py_) * (px_ / 2 + 1);
  const double scale = g.hx * g.hy / static_cast<double>(psize);
  auto transform = [&](const std::vector<double>& table, std::vector<cplx>& hat) {
    std::vector<double> in = table;
    hat.assign(hsize, 0.0);
    fft::Plan p = fft::r2c_2d(py_, px_, in.data(), hat.data());
    p.execute();
    for (auto& v : hat) v *= scale;
  };
  transform(gx_, hat_gx_);
  transform(gy_, hat_gy_);
  transform(w0_, hat_w0_);
}

double ConvolutionKernel::table(int component, int dx, int dy) const {
  if (std::abs(dx) >= nx_ || std::abs(dy) >= ny_) throw GridError("kernel offset out of range");
  const std::size_t i = static_cast<std::size_t>(wrap(dy, py_)) * px_ + wrap(dx, px_);
  switch (component) {
    case 0: return gx_[i];
    case 1: return gy_[i];
    default: return w0_[i];
  }
}

// ---------------------------------------------------------------------------
// SpectralOps

namespace {

enum class Parity { odd, even, periodic };

Parity parity_of(Boundary bc) {
  switch (bc) {
    case Boundary::dirichlet: return Parity::odd;
    case Boundary::neumann: return Parity::even;
    case Boundary::plane: return Parity::periodic;
  }
  return Parity::periodic;
}

Parity flip(Parity p) {
  if (p == Parity::odd) return Parity::even;
  if (p == Parity::even) return Parity::odd;
  return p;
}

}  // namespace

struct SpectralOps::Impl {
  int nx, ny;
  double Lx, Ly;
  Parity parity;
  std::vector<cplx> buf;
  // r2r plans per axis: [axis][kind] with kinds RODFT10, RODFT01, REDFT10, REDFT01.
  fft::Plan r2r[2][4];
  fft::Plan dft_fwd[2], dft_bwd[2];

  int px, py;
  std::vector<double> pad;
  std::vector<cplx> hat, hat_tmp, hat_acc;
  fft::Plan pad_r2c, pad_c2r;

  Impl(const GridSpec& g, const ConvolutionKernel& k)
      : nx(g.nx), ny(g.ny), Lx(g.extent_x()), Ly(g.extent_y()), parity(parity_of(g.bc)),
        buf(g.size()), px(k.padded_nx()), py(k.padded_ny()) {
    double* raw = reinterpret_cast<double*>(buf.data());
    if (parity == Parity::periodic) {
      for (int a = 0; a < 2; ++a) {
        dft_fwd[a] = fft::dft_axis(buf.data(), nx, ny, a, FFTW_FORWARD);
        dft_bwd[a] = fft::dft_axis(buf.data(), nx, ny, a, FFTW_BACKWARD);
      }
    } else {
      const fftw_r2r_kind kinds[4] = {FFTW_RODFT10, FFTW_RODFT01, FFTW_REDFT10, FFTW_REDFT01};
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 4; ++k) r2r[a][k] = fft::r2r_axis(raw, nx, ny, a, kinds[k]);
    }
    pad.assign(static_cast<std::size_t>(px) * py, 0.0);
    const std::size_t hsize = static_cast<std::size_t>(py) * (px / 2 + 1);
    hat.assign(hsize, 0.0);
    hat_tmp.assign(hsize, 0.0);
    hat_acc.assign(hsize, 0.0);
    pad_r2c = fft::r2c_2d(py, px, pad.data(), hat.data());
    pad_c2r = fft::c2r_2d(py, px, hat_tmp.data(), pad.data());
  }

  [[nodiscard]] int n_of(int axis) const { return axis == 0 ? nx : ny; }
  [[nodiscard]] double L_of(int axis) const { return axis == 0 ? Lx : Ly; }

  // Visit every 1D line along `axis` of the interleaved buffer; f(base, stride).
  template <class F>
  void for_lines(int axis, F&& f) {
    double* raw = reinterpret_cast<double*>(buf.data());
    if (axis == 0) {
      for (int iy = 0; iy < ny; ++iy)
        for (int part = 0; part < 2; ++part) f(raw + 2 * static_cast<std::size_t>(iy) * nx + part, 2);
    } else {
      for (int ix = 0; ix < nx; ++ix)
        for (int part = 0; part < 2; ++part) f(raw + 2 * static_cast<std::size_t>(ix) + part, 2 * nx);
    }
  }

  // buf <- d/d(axis) buf, where buf is expanded in basis `p` along that axis.
  void derivative(int axis, Parity p) {
    const int n = n_of(axis);
    const double L = L_of(axis);
    if (p == Parity::periodic) {
      dft_fwd[axis].execute();
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          const int j = axis == 0 ? ix : iy;
          cplx& c = buf[static_cast<std::size_t>(iy) * nx + ix];
          c = (j == n / 2) ? cplx(0.0) : c * cplx(0.0, fourier_k(j, n, L) / n);
        }
      dft_bwd[axis].execute();
      return;
    }
    const double inv2n = 1.0 / (2.0 * n);
    if (p == Parity::odd) {
      r2r[axis][0].execute();  // DST-II: index k holds mode k+1
      for_lines(axis, [&](double* line, std::size_t s) {
        for (int m = n - 1; m >= 1; --m) line[m * s] = (pi * m / L) * line[(m - 1) * s] * inv2n;
        line[0] = 0.0;
      });
      r2r[axis][3].execute();  // DCT-III
    } else {
      r2r[axis][2].execute();  // DCT-II: index k holds mode k
      for_lines(axis, [&](double* line, std::size_t s) {
        for (int k = 0; k <= n - 2; ++k) line[k * s] = -(pi * (k + 1) / L) * line[(k + 1) * s] * inv2n;
        line[(n - 1) * s] = 0.0;
      });
      r2r[axis][1].execute();  // DST-III
    }
  }

  // Forward transform along both axes in the grid basis (unnormalised).
  void forward2d() {
    if (parity == Parity::periodic) {
      dft_fwd[0].execute();
      dft_fwd[1].execute();
    } else {
      const int k = parity == Parity::odd ? 0 : 2;
      r2r[0][k].execute();
      r2r[1][k].execute();
    }
  }
  void backward2d() {
    if (parity == Parity::periodic) {
      dft_bwd[0].execute();
      dft_bwd[1].execute();
    } else {
      const int k = parity == Parity::odd ? 1 : 3;
      r2r[0][k].execute();
      r2r[1][k].execute();
    }
  }
  [[nodiscard]] double backward_norm() const {
    return parity == Parity::periodic ? 1.0 / (static_cast<double>(nx) * ny)
                                      : 1.0 / (4.0 * nx * ny);
  }
  // Wavenumber of transform index j along an axis, and whether the mode has a
  // representable derivative.
  [[nodiscard]] double wavenumber(int j, int axis) const {
    const int n = n_of(axis);
    const double L = L_of(axis);
    switch (parity) {
      case Parity::odd: return pi * (j + 1) / L;
      case Parity::even: return pi * j / L;
      case Parity::periodic: return fourier_k(j, n, L);
    }
    return 0.0;
  }
  [[nodiscard]] bool derivative_free_top(int j, int axis) const {
    const int n = n_of(axis);
    if (parity == Parity::odd) return j == n - 1;
    if (parity == Parity::periodic) return j == n / 2;
    return false;
  }

  void load(const ComplexField& u) { std::copy(u.values.begin(), u.values.end(), buf.begin()); }
  void store(ComplexField& out) const { std::copy(buf.begin(), buf.end(), out.values.begin()); }

  void load_padded(const std::vector<double>& values) {
    std::fill(pad.begin(), pad.end(), 0.0);
    for (int iy = 0; iy < ny; ++iy)
      std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(iy) * nx, nx,
                  pad.begin() + static_cast<std::ptrdiff_t>(iy) * px);
  }
  void unload_padded(std::vector<double>& values) const {
    for (int iy = 0; iy < ny; ++iy)
      std::copy_n(pad.begin() + static_cast<std::ptrdiff_t>(iy) * px, nx,
                  values.begin() + static_cast<std::ptrdiff_t>(iy) * nx);
  }
  // pad <- IFFT(hat .* spectrum)
  void apply_spectrum(const std::vector<cplx>& spectrum, std::vector<double>& out) {
    for (std::size_t i = 0; i < hat.size(); ++i) hat_tmp[i] = hat[i] * spectrum[i];
    pad_c2r.execute();
    unload_padded(out);
  }
};

SpectralOps::SpectralOps(const GridSpec& g)
    : grid_(g), kernel_(ConvolutionKernel::for_grid(g)), impl_(std::make_unique<Impl>(g, *kernel_)) {}
SpectralOps::~SpectralOps() = default;
SpectralOps::SpectralOps(SpectralOps&&) noexcept = default;
SpectralOps& SpectralOps::operator=(SpectralOps&&) noexcept = default;

std::pair<ComplexField, ComplexField> SpectralOps::grad(const ComplexField& u) {
  require_same_grid(u.grid, grid_, "grad");
  ComplexField dx(grid_), dy(grid_);
  impl_->load(u);
  impl_->derivative(0, impl_->parity);
  impl_->store(dx);
  impl_->load(u);
  impl_->derivative(1, impl_->parity);
  impl_->store(dy);
  return {std::move(dx), std::move(dy)};
}

VectorField SpectralOps::grad(const ScalarField& f) {
  ComplexField u(f.grid);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = f.values[i];
  auto [dx, dy] = grad(u);
  VectorField out(grid_);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    out.vx[i] = dx.values[i].real();
    out.vy[i] = dy.values[i].real();
  }
  return out;
}

ComplexField SpectralOps::grad_adjoint(const ComplexField& fx, const ComplexField& fy) {
  const Parity adj = flip(impl_->parity);
  ComplexField out(grid_);
  impl_->load(fx);
  impl_->derivative(0, adj);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = -impl_->buf[i];
  impl_->load(fy);
  impl_->derivative(1, adj);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= impl_->buf[i];
  return out;
}

ComplexField SpectralOps::laplacian(const ComplexField& u) {
  auto [dx, dy] = grad(u);
  ComplexField out = grad_adjoint(dx, dy);
  for (auto& v : out.values) v = -v;
  return out;
}

double SpectralOps::dirichlet_form_spectral(const ComplexField& u) {
  require_same_grid(u.grid, grid_, "dirichlet_form_spectral");
  Impl& I = *impl_;
  I.load(u);
  I.forward2d();
  const int nx = I.nx, ny = I.ny;
  // Grid norms of the basis functions produced by differentiation.
  auto weight = [&](int j, int axis, bool differentiated) -> double {
    const int n = I.n_of(axis);
    switch (I.parity) {
      case Parity::periodic: return 1.0;
      case Parity::odd:
        // u basis: sin_{j+1}; coefficient = Y / n (j < n-1) or Y / 2n (top).
        if (differentiated) return 1.0 / (2.0 * n);   // (1/n)^2 * n/2
        return j == n - 1 ? 1.0 / (4.0 * n) : 1.0 / (2.0 * n);
      case Parity::even:
        if (differentiated) return 1.0 / (2.0 * n);
        return j == 0 ? 1.0 / (4.0 * n) : 1.0 / (2.0 * n);
    }
    return 0.0;
  };
  double sum = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double c2 = std::norm(I.buf[static_cast<std::size_t>(iy) * nx + ix]);
      const double kx = I.derivative_free_top(ix, 0) ? 0.0 : I.wavenumber(ix, 0);
      const double ky = I.derivative_free_top(iy, 1) ? 0.0 : I.wavenumber(iy, 1);
      if (I.parity == Parity::periodic) {
        sum += (kx * kx + ky * ky) * c2 / (static_cast<double>(nx) * ny);
      } else {
        sum += kx * kx * c2 * weight(ix, 0, true) * weight(iy, 1, false);
        sum += ky * ky * c2 * weight(ix, 0, false) * weight(iy, 1, true);
      }
    }
  }
  return sum * grid_.cell_area();
}

void SpectralOps::project(ComplexField& u) {
  require_same_grid(u.grid, grid_, "project");
  Impl& I = *impl_;
  if (I.parity == Parity::even) return;
  I.load(u);
  for (int axis = 0; axis < 2; ++axis) {
    const int n = I.n_of(axis);
    if (I.parity == Parity::periodic) {
      I.dft_fwd[axis].execute();
      for (int iy = 0; iy < I.ny; ++iy)
        for (int ix = 0; ix < I.nx; ++ix) {
          cplx& c = I.buf[static_cast<std::size_t>(iy) * I.nx + ix];
          c = ((axis == 0 ? ix : iy) == n / 2) ? cplx(0.0) : c / static_cast<double>(n);
        }
      I.dft_bwd[axis].execute();
    } else {
      I.r2r[axis][0].execute();
      const double inv2n = 1.0 / (2.0 * n);
      I.for_lines(axis, [&](double* line, std::size_t s) {
        for (int k = 0; k < n - 1; ++k) line[k * s] *= inv2n;
        line[(n - 1) * s] = 0.0;
      });
      I.r2r[axis][1].execute();
    }
  }
  I.store(u);
}

ComplexField SpectralOps::precondition(const ComplexField& r, double shift) {
  require_same_grid(r.grid, grid_, "precondition");
  Impl& I = *impl_;
  I.load(r);
  I.forward2d();
  const double norm = I.backward_norm();
  for (int iy = 0; iy < I.ny; ++iy) {
    const double ky = I.wavenumber(iy, 1);
    for (int ix = 0; ix < I.nx; ++ix) {
      const double kx = I.wavenumber(ix, 0);
      I.buf[static_cast<std::size_t>(iy) * I.nx + ix] *= norm / (shift + kx * kx + ky * ky);
    }
  }
  I.backward2d();
  ComplexField out(grid_);
  I.store(out);
  return out;
}

ConvolutionResult SpectralOps::free_space_convolve(const ScalarField& rho,
                                                   ConvolutionKernel::Which which) {
  require_same_grid(rho.grid, grid_, "free_space_convolve");
  Impl& I = *impl_;
  ConvolutionResult res;
  res.support_warning =
      grid_.bc == Boundary::plane && boundary_mass_fraction(rho) > kBoundaryMassWarning;
  I.load_padded(rho.values);
  I.pad_r2c.execute();
  if (which == ConvolutionKernel::Which::w0) {
    res.scalar = ScalarField(grid_);
    I.apply_spectrum(kernel_->spectrum_w0(), res.scalar.values);
  } else {
    res.vector = VectorField(grid_);
    I.apply_spectrum(kernel_->spectrum_gx(), res.vector.vx);
    I.apply_spectrum(kernel_->spectrum_gy(), res.vector.vy);
  }
  return res;
}

VectorField SpectralOps::grad_perp_convolve(const ScalarField& rho, bool* support_warning) {
  ConvolutionResult g = free_space_convolve(rho, ConvolutionKernel::Which::grad_w0);
  if (support_warning) *support_warning = g.support_warning;
  VectorField A(grid_);
  for (std::size_t i = 0; i < A.vx.size(); ++i) {
    A.vx[i] = -g.vector.vy[i];
    A.vy[i] = g.vector.vx[i];
  }
  return A;
}

ScalarField SpectralOps::grad_perp_adjoint(const VectorField& F) {
  require_same_grid(F.grid, grid_, "grad_perp_adjoint");
  Impl& I = *impl_;
  // K = (-gy, gx) is odd, so C = sum_x K(x-y).F(x) = -(K .* F)(y)
  //   = (gy * Fx)(y) - (gx * Fy)(y).
  I.load_padded(F.vx);
  I.pad_r2c.execute();
  const auto& sgx = kernel_->spectrum_gx();
  const auto& sgy = kernel_->spectrum_gy();
  for (std::size_t i = 0; i < I.hat.size(); ++i) I.hat_acc[i] = I.hat[i] * sgy[i];
  I.load_padded(F.vy);
  I.pad_r2c.execute();
  for (std::size_t i = 0; i < I.hat.size(); ++i) I.hat_tmp[i] = I.hat_acc[i] - I.hat[i] * sgx[i];
  I.pad_c2r.execute();
  ScalarField out(grid_);
  I.unload_padded(out.values);
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference curl

namespace {

// d/ds at index i of a line with n samples and spacing h.
double fd_derivative(const double* f, std::size_t stride, int i, int n, double h) {
  static constexpr double c8[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  static constexpr double c6[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  static constexpr double c4[2] = {2.0 / 3.0, -1.0 / 12.0};
  auto at = [&](int j) { return f[static_cast<std::size_t>(j) * stride]; };
  const int room = std::min(i, n - 1 - i);
  double s = 0.0;
  if (room >= 4) {
    for (int k = 1; k <= 4; ++k) s += c8[k - 1] * (at(i + k) - at(i - k));
  } else if (room == 3) {
    for (int k = 1; k <= 3; ++k) s += c6[k - 1] * (at(i + k) - at(i - k));
  } else if (room == 2) {
    for (int k = 1; k <= 2; ++k) s += c4[k - 1] * (at(i + k) - at(i - k));
  } else if (room == 1) {
    s = 0.5 * (at(i + 1) - at(i - 1));
  } else if (i == 0) {
    s = -1.5 * at(0) + 2.0 * at(1) - 0.5 * at(2);
  } else {
    s = 1.5 * at(n - 1) - 2.0 * at(n - 2) + 0.5 * at(n - 3);
  }
  return s / h;
}

}  // namespace

ScalarField curl(const VectorField& F) {
  const GridSpec& g = F.grid;
  ScalarField out(g);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dFy_dx = fd_derivative(F.vy.data() + g.index(0, iy), 1, ix, g.nx, g.hx);
      const double dFx_dy = fd_derivative(F.vx.data() + ix, static_cast<std::size_t>(g.nx), iy, g.ny, g.hy);
      out.values[g.index(ix, iy)] = dFy_dx - dFx_dy;
    }
  }
  return out;
}

}  // namespace afgas
