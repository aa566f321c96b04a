#include <cmath>
#include <random>

#include "afgas/spectral_ops.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace afgas;
using afgas::testing::max_abs;
using afgas::testing::max_abs_diff;

namespace {

double bump(double r, double a, int p) {
  if (r >= a) return 0.0;
  const double t = 1.0 - (r / a) * (r / a);
  return std::pow(t, p);
}

// Mass of bump(r, a, p) over the plane: pi a^2 / (p + 1).
double bump_mass(double a, int p) { return M_PI * a * a / (p + 1); }

ComplexField random_field(const GridSpec& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexField u(g);
  for (auto& v : u.values) v = cplx(nd(rng), nd(rng));
  return u;
}

}  // namespace

TEST_CASE("derivative of constants vanishes on neumann grids") {
  const GridSpec g = make_square(3.0, 32, Boundary::neumann);
  SpectralOps ops(g);
  ComplexField u(g);
  for (auto& v : u.values) v = cplx(2.0, -1.0);
  auto [dx, dy] = ops.grad(u);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    CHECK(std::abs(dx.values[i]) < 1e-12);
    CHECK(std::abs(dy.values[i]) < 1e-12);
  }
}

TEST_CASE("sine series derivative on dirichlet grids") {
  const double L = 2.5;
  const GridSpec g = make_square(L, 64, Boundary::dirichlet);
  SpectralOps ops(g);
  const double k = M_PI / L;
  const ComplexField u = sample_complex([&](double x, double y) { return cplx(std::sin(k * x), 0.0) * (1.0 + 0.0 * y); }, g);
  auto [dx, dy] = ops.grad(u);
  const ComplexField want = sample_complex([&](double x, double) { return cplx(k * std::cos(k * x), 0.0); }, g);
  CHECK(max_abs_diff(dx.values, want.values) < 1e-10);

  // Mixed modes, complex amplitude, derivative along y.
  const ComplexField v = sample_complex(
      [&](double x, double y) { return cplx(1.0, 2.0) * std::sin(3 * k * x) * std::sin(5 * k * y); }, g);
  auto [vx, vy] = ops.grad(v);
  const ComplexField wy = sample_complex(
      [&](double x, double y) { return cplx(1.0, 2.0) * std::sin(3 * k * x) * (5 * k) * std::cos(5 * k * y); }, g);
  CHECK(max_abs_diff(vy.values, wy.values) < 1e-10);
}

TEST_CASE("cosine series derivative on neumann grids") {
  const double L = 1.0;
  const GridSpec g = make_square(L, 32, Boundary::neumann);
  SpectralOps ops(g);
  const double k = M_PI / L;
  const ComplexField u = sample_complex([&](double x, double y) { return cplx(std::cos(2 * k * x) * std::cos(k * y), 0.0); }, g);
  auto [dx, dy] = ops.grad(u);
  const ComplexField wx = sample_complex([&](double x, double y) { return cplx(-2 * k * std::sin(2 * k * x) * std::cos(k * y), 0.0); }, g);
  const ComplexField wy = sample_complex([&](double x, double y) { return cplx(-k * std::cos(2 * k * x) * std::sin(k * y), 0.0); }, g);
  CHECK(max_abs_diff(dx.values, wx.values) < 1e-10);
  CHECK(max_abs_diff(dy.values, wy.values) < 1e-10);
}

TEST_CASE("plane wave derivative on plane grids") {
  const GridSpec g = make_plane_box(3.0, 64);
  SpectralOps ops(g);
  const double kx = 2 * M_PI * 3 / g.extent_x();
  const double ky = -2 * M_PI * 5 / g.extent_y();
  const ComplexField u = sample_complex([&](double x, double y) { return std::polar(1.0, kx * x + ky * y); }, g);
  auto [dx, dy] = ops.grad(u);
  double ex = 0.0, ey = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    ex = std::max(ex, std::abs(dx.values[i] - cplx(0.0, kx) * u.values[i]));
    ey = std::max(ey, std::abs(dy.values[i] - cplx(0.0, ky) * u.values[i]));
  }
  CHECK(ex < 1e-10);
  CHECK(ey < 1e-10);
}

TEST_CASE("grad_adjoint is the grid adjoint of grad") {
  std::mt19937_64 rng(7);
  for (Boundary bc : {Boundary::dirichlet, Boundary::neumann, Boundary::plane}) {
    const GridSpec g = bc == Boundary::plane ? make_plane_box(1.5, 16) : make_square(1.3, 16, bc);
    SpectralOps ops(g);
    ComplexField u = random_field(g, rng);
    const ComplexField fx = random_field(g, rng), fy = random_field(g, rng);
    auto [dx, dy] = ops.grad(u);
    const cplx lhs = inner(dx, fx) + inner(dy, fy);
    const cplx rhs = inner(u, ops.grad_adjoint(fx, fy));
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("spectral and quadrature Dirichlet forms agree") {
  std::mt19937_64 rng(11);
  for (Boundary bc : {Boundary::dirichlet, Boundary::neumann, Boundary::plane}) {
    const GridSpec g = bc == Boundary::plane ? make_plane_box(2.0, 32) : make_square(2.0, 32, bc);
    SpectralOps ops(g);
    ComplexField u = random_field(g, rng);
    ops.project(u);
    auto [dx, dy] = ops.grad(u);
    const double quad = mass(dx) + mass(dy);
    const double spec = ops.dirichlet_form_spectral(u);
    CHECK(std::abs(quad - spec) <= 1e-10 * quad);
  }
}

TEST_CASE("laplacian eigenmodes and preconditioner inverse") {
  const double L = 2.0;
  const GridSpec g = make_square(L, 32, Boundary::dirichlet);
  SpectralOps ops(g);
  const double k = M_PI / L;
  const ComplexField u = sample_complex([&](double x, double y) { return cplx(std::sin(2 * k * x) * std::sin(k * y), 0.0); }, g);
  const ComplexField lu = ops.laplacian(u);
  for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(std::abs(lu.values[i] + 5 * k * k * u.values[i]) < 1e-9);

  std::mt19937_64 rng(3);
  for (Boundary bc : {Boundary::dirichlet, Boundary::neumann, Boundary::plane}) {
    const GridSpec h = bc == Boundary::plane ? make_plane_box(1.0, 16) : make_square(1.0, 16, bc);
    SpectralOps o(h);
    ComplexField r = random_field(h, rng);
    o.project(r);
    const ComplexField p = o.precondition(r, 3.0);
    ComplexField back = o.laplacian(p);
    for (std::size_t i = 0; i < r.values.size(); ++i) back.values[i] = 3.0 * p.values[i] - back.values[i];
    CHECK(max_abs_diff(back.values, r.values) < 1e-10 * (1.0 + max_abs_diff(r.values, ComplexField(h).values)));
  }
}

TEST_CASE("gradient kernel is odd") {
  const GridSpec g = make_plane_box(4.0, 32);
  const auto K = ConvolutionKernel::for_grid(g);
  CHECK(K->table(0, 0, 0) == 0.0);
  CHECK(K->table(1, 0, 0) == 0.0);
  for (int dy = -31; dy < 32; dy += 5)
    for (int dx = -31; dx < 32; dx += 3) {
      CHECK(K->table(0, dx, dy) == -K->table(0, -dx, -dy));
      CHECK(K->table(1, dx, dy) == -K->table(1, -dx, -dy));
    }
  // Far from the origin the tables approach the pointwise kernel.
  const double x = 20 * g.hx, y = -7 * g.hy;
  CHECK(K->table(0, 20, -7) == doctest::Approx(x / (x * x + y * y)).epsilon(1e-3));
  CHECK(K->table(2, 20, -7) == doctest::Approx(0.5 * std::log(x * x + y * y)).epsilon(1e-2));
}

TEST_CASE("newton far field of a radial bump") {
  const GridSpec g = make_plane_box(6.0, 256);
  SpectralOps ops(g);
  const double a = 1.2, cx = 0.37, cy = -0.21;
  const int p = 8;
  const double M = bump_mass(a, p);
  const ScalarField rho = sample([&](double x, double y) { return bump(std::hypot(x - cx, y - cy), a, p); }, g);
  const VectorField A = ops.grad_perp_convolve(rho);
  const ConvolutionResult w = ops.free_space_convolve(rho, ConvolutionKernel::Which::w0);
  double err = 0.0, scale = 0.0, werr = 0.0, wscale = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x(ix) - cx, dy = g.y(iy) - cy;
      const double r2 = dx * dx + dy * dy;
      if (r2 < 1.5 * 1.5 * a * a) continue;
      const std::size_t i = g.index(ix, iy);
      const double ax = -M * dy / r2, ay = M * dx / r2;
      err = std::max(err, std::hypot(A.vx[i] - ax, A.vy[i] - ay));
      scale = std::max(scale, std::hypot(ax, ay));
      werr = std::max(werr, std::abs(w.scalar.values[i] - 0.5 * M * std::log(r2)));
      wscale = std::max(wscale, std::abs(0.5 * M * std::log(r2)));
    }
  CHECK(err <= 1e-6 * scale);
  CHECK(werr <= 1e-6 * wscale);
}

TEST_CASE("curl of the vector potential is 2 pi rho") {
  const GridSpec g = make_plane_box(6.0, 256);
  SpectralOps ops(g);
  const ScalarField rho = sample(
      [](double x, double y) {
        return std::exp(-((x - 0.5) * (x - 0.5) + y * y) / 0.8) + 0.5 * std::exp(-((x + 1.0) * (x + 1.0) + (y - 0.7) * (y - 0.7)) / 0.5);
      },
      g);
  const ScalarField c = curl(ops.grad_perp_convolve(rho));
  double err = 0.0;
  for (int iy = 8; iy < g.ny - 8; ++iy)
    for (int ix = 8; ix < g.nx - 8; ++ix) {
      const std::size_t i = g.index(ix, iy);
      err = std::max(err, std::abs(c.values[i] - 2 * M_PI * rho.values[i]));
    }
  CHECK(err <= 1e-6 * 2 * M_PI * max_abs(rho.values));
}

TEST_CASE("curl of analytic fields") {
  const GridSpec g = make_plane_box(2.0, 64);
  const ScalarField rot = curl(sample_vector([](double x, double y) { return std::array<double, 2>{-y / 2, x / 2}; }, g));
  const ScalarField grd = curl(sample_vector(
      [](double x, double y) { return std::array<double, 2>{std::cos(x) * std::cos(y), -std::sin(x) * std::sin(y)}; }, g));
  for (int iy = 4; iy < g.ny - 4; ++iy)
    for (int ix = 4; ix < g.nx - 4; ++ix) {
      CHECK(std::abs(rot.values[g.index(ix, iy)] - 1.0) < 1e-8);
      CHECK(std::abs(grd.values[g.index(ix, iy)]) < 1e-8);
    }
}

TEST_CASE("convolution is linear") {
  const GridSpec g = make_plane_box(5.0, 64);
  SpectralOps ops(g);
  auto one = [&](double cx, double cy) {
    return sample([=](double x, double y) { return bump(std::hypot(x - cx, y - cy), 1.0, 6); }, g);
  };
  const ScalarField r1 = one(-2.0, 0.5), r2 = one(1.5, -1.0);
  ScalarField sum = r1;
  for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += r2.values[i];
  const VectorField a1 = ops.grad_perp_convolve(r1), a2 = ops.grad_perp_convolve(r2), as = ops.grad_perp_convolve(sum);
  for (std::size_t i = 0; i < sum.values.size(); ++i) {
    CHECK(std::abs(as.vx[i] - a1.vx[i] - a2.vx[i]) < 1e-12);
    CHECK(std::abs(as.vy[i] - a1.vy[i] - a2.vy[i]) < 1e-12);
  }
}

TEST_CASE("point-symmetric density gives a vanishing field at its centre") {
  const GridSpec g = make_plane_box(4.0, 64);
  SpectralOps ops(g);
  const int i0 = 32, j0 = 33;
  const double cx = g.x(i0), cy = g.y(j0);
  const ScalarField rho = sample(
      [&](double x, double y) {
        const double u = x - cx, v = y - cy;
        return std::exp(-3 * (u - 0.6) * (u - 0.6) - 5 * (v + 0.3) * (v + 0.3)) +
               std::exp(-3 * (u + 0.6) * (u + 0.6) - 5 * (v - 0.3) * (v - 0.3));
      },
      g);
  const ConvolutionResult r = ops.free_space_convolve(rho, ConvolutionKernel::Which::grad_w0);
  CHECK(std::abs(r.vector.vx[g.index(i0, j0)]) < 1e-12);
  CHECK(std::abs(r.vector.vy[g.index(i0, j0)]) < 1e-12);
}

TEST_CASE("grad_perp_adjoint is the adjoint of the potential map") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (Boundary bc : {Boundary::dirichlet, Boundary::plane}) {
    const GridSpec g = bc == Boundary::plane ? make_plane_box(2.0, 32) : make_square(2.0, 32, bc);
    SpectralOps ops(g);
    ScalarField rho(g);
    VectorField F(g);
    for (auto& v : rho.values) v = nd(rng);
    for (std::size_t i = 0; i < F.vx.size(); ++i) {
      F.vx[i] = nd(rng);
      F.vy[i] = nd(rng);
    }
    const VectorField A = ops.grad_perp_convolve(rho);
    const ScalarField C = ops.grad_perp_adjoint(F);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < F.vx.size(); ++i) {
      lhs += A.vx[i] * F.vx[i] + A.vy[i] * F.vy[i];
      rhs += rho.values[i] * C.values[i];
    }
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("support warning on plane grids") {
  const GridSpec g = make_plane_box(2.0, 32);
  SpectralOps ops(g);
  ScalarField wide(g);
  for (auto& v : wide.values) v = 1.0;
  bool warn = false;
  ops.grad_perp_convolve(wide, &warn);
  CHECK(warn);
  const ScalarField tight = sample([](double x, double y) { return std::exp(-8 * (x * x + y * y)); }, g);
  ops.grad_perp_convolve(tight, &warn);
  CHECK_FALSE(warn);
}
