#include <cmath>
#include <random>

#include "afgas/model.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace afgas;
using afgas::testing::normalize;
using afgas::testing::random_smooth_state;

namespace {

ComplexField ground_mode(const GridSpec& g) {
  const double L = g.extent_x();
  ComplexField u = sample_complex(
      [&](double x, double y) { return cplx(std::sin(M_PI * x / L) * std::sin(M_PI * y / L), 0.0); }, g);
  normalize(u);
  return u;
}

ScalarField harmonic(const GridSpec& g) {
  return sample([](double x, double y) { return x * x + y * y; }, g);
}

struct Case {
  const char* name;
  GridSpec grid;
  bool trap;
};

std::vector<Case> cases() {
  return {{"dirichlet", make_square(3.0, 32, Boundary::dirichlet), false},
          {"neumann", make_square(3.0, 32, Boundary::neumann), false},
          {"plane", make_plane_box(4.0, 32), true}};
}

ModelParams params_for(const Case& c, double beta) {
  ModelParams p;
  p.beta = beta;
  if (c.trap) p.V = harmonic(c.grid);
  return p;
}

}  // namespace

TEST_CASE("density") {
  const GridSpec g = make_plane_box(2.0, 16);
  CHECK(mass(ComplexField(g)) == 0.0);
  std::mt19937_64 rng(1);
  const ComplexField u = random_smooth_state(g, rng);
  const ScalarField rho = density(u);
  for (double v : rho.values) CHECK(v >= 0.0);
  CHECK(integrate(rho) == doctest::Approx(mass(u)).epsilon(1e-14));
  ComplexField w = u;
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] *= std::polar(1.0, 0.3 * g.x(int(i % g.nx)));
  const ScalarField rw = density(w);
  for (std::size_t i = 0; i < rho.values.size(); ++i) CHECK(rw.values[i] == doctest::Approx(rho.values[i]).epsilon(1e-14));
}

TEST_CASE("current") {
  const GridSpec g = make_plane_box(5.0, 256);
  const ScalarField phi = sample([](double x, double y) { return std::exp(-(x * x + y * y) / 1.5); }, g);
  ComplexField real(g);
  for (std::size_t i = 0; i < real.values.size(); ++i) real.values[i] = phi.values[i];
  const VectorField J0 = current(real);
  for (std::size_t i = 0; i < J0.vx.size(); ++i) {
    CHECK(std::abs(J0.vx[i]) < 1e-12);
    CHECK(std::abs(J0.vy[i]) < 1e-12);
  }

  const double k = 2 * M_PI * 4 / g.extent_x();
  const ComplexField u = sample_complex(
      [&](double x, double y) { return std::exp(-(x * x + y * y) / 1.5) * std::polar(1.0, k * x); }, g);
  const VectorField J = current(u);
  double err = 0.0;
  for (std::size_t i = 0; i < J.vx.size(); ++i) {
    err = std::max(err, std::abs(J.vx[i] - k * phi.values[i] * phi.values[i]));
    CHECK(std::abs(J.vy[i]) < 1e-8);
  }
  CHECK(err < 1e-8);

  // Fourth-order finite-difference phase gradient at interior points.
  for (int ix : {80, 127, 160})
    for (int iy : {100, 128}) {
      auto at = [&](int i) { return u.values[g.index(i, iy)]; };
      const cplx du = (-at(ix + 2) + 8.0 * at(ix + 1) - 8.0 * at(ix - 1) + at(ix - 2)) / (12.0 * g.hx);
      const double fd = (std::conj(at(ix)) * du).imag();
      CHECK(J.vx[g.index(ix, iy)] == doctest::Approx(fd).epsilon(1e-3));
    }

  ComplexField c = u;
  for (auto& v : c.values) v = std::conj(v);
  const VectorField Jc = current(c);
  for (std::size_t i = 0; i < J.vx.size(); ++i) CHECK(Jc.vx[i] == doctest::Approx(-J.vx[i]).epsilon(1e-12));
}

TEST_CASE("vector potential of a radial density") {
  const GridSpec g = make_plane_box(6.0, 128);
  const double a = 1.0;
  const ScalarField rho = sample(
      [&](double x, double y) {
        const double r2 = x * x + y * y;
        return r2 < a * a ? std::pow(1.0 - r2, 8) : 0.0;
      },
      g);
  const double M = M_PI / 9.0;
  const VectorField A = vector_potential(rho);
  for (int ix : {5, 100, 120})
    for (int iy : {3, 64, 110}) {
      const double x = g.x(ix), y = g.y(iy), r2 = x * x + y * y;
      if (r2 < 2.25) continue;
      const std::size_t i = g.index(ix, iy);
      CHECK(std::abs(A.vx[i] + M * y / r2) < 1e-6 * M / std::sqrt(r2));
      CHECK(std::abs(A.vy[i] - M * x / r2) < 1e-6 * M / std::sqrt(r2));
    }
  const VectorField A0 = vector_potential(ScalarField(g));
  for (double v : A0.vx) CHECK(v == 0.0);
}

TEST_CASE("energy of the linear dirichlet ground mode") {
  for (double L : {1.0, 2.5}) {
    const GridSpec g = make_square(L, 32, Boundary::dirichlet);
    const ComplexField u = ground_mode(g);
    const EnergyBreakdown e = energy(u, ModelParams{0.0, std::nullopt});
    CHECK(std::abs(e.kinetic_magnetic - 2 * M_PI * M_PI / (L * L)) < 1e-8);
    CHECK(e.total == e.kinetic_magnetic + e.potential);
  }
}

TEST_CASE("real states carry no current term") {
  const GridSpec g = make_square(2.0, 32, Boundary::dirichlet);
  const ComplexField u = ground_mode(g);
  const EnergyBreakdown e = energy(u, ModelParams{3.0, std::nullopt});
  CHECK(std::abs(e.current_term) < 1e-12 * e.total);
  CHECK(e.kinetic_magnetic == doctest::Approx(e.gradient + e.field_term).epsilon(1e-12));
  CHECK(e.field_term > 0.0);
}

TEST_CASE("energy is invariant under a constant phase and conjugation flips beta") {
  std::mt19937_64 rng(21);
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    ComplexField u = random_smooth_state(c.grid, rng);
    normalize(u);
    Model m(c.grid, params_for(c, 1.7));
    const EnergyBreakdown e = m.energy(u);
    ComplexField v = u;
    for (auto& z : v.values) z *= std::polar(1.0, 1.1);
    CHECK(m.energy(v).total == doctest::Approx(e.total).epsilon(1e-13));

    ComplexField cu = u;
    for (auto& z : cu.values) z = std::conj(z);
    Model neg(c.grid, params_for(c, -1.7));
    CHECK(neg.energy(cu).kinetic_magnetic == doctest::Approx(e.kinetic_magnetic).epsilon(1e-13));
    CHECK(neg.multiplier(cu) == doctest::Approx(m.multiplier(u)).epsilon(1e-12));
  }
}

TEST_CASE("residual of the linear ground mode vanishes") {
  const double L = 1.5;
  const GridSpec g = make_square(L, 32, Boundary::dirichlet);
  const ComplexField u = ground_mode(g);
  const ModelParams p{0.0, std::nullopt};
  const ComplexField r = residual(u, p, 2 * M_PI * M_PI / (L * L));
  CHECK(l2_norm(r) < 1e-8);
  CHECK(multiplier(u, p) == doctest::Approx(2 * M_PI * M_PI / (L * L)).epsilon(1e-12));
}

TEST_CASE("multiplier identities") {
  std::mt19937_64 rng(33);
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    for (double beta : {0.5, 2.0, 6.0}) {
      ComplexField u = random_smooth_state(c.grid, rng);
      normalize(u);
      Model m(c.grid, params_for(c, beta));
      const double lam = m.multiplier(u);
      const ComplexField r0 = m.residual(u, 0.0);
      CHECK(inner_re(u, r0) == doctest::Approx(lam).epsilon(1e-8));
      CHECK(m.multiplier_from_energy(u) == doctest::Approx(lam).epsilon(1e-10));
    }
  }
}

TEST_CASE("multiplier rejects unnormalized states") {
  const GridSpec g = make_square(1.0, 16, Boundary::dirichlet);
  ComplexField u = ground_mode(g);
  for (auto& v : u.values) v *= 1.01;
  CHECK_THROWS_AS(multiplier(u, ModelParams{1.0, std::nullopt}), ModelError);
}

TEST_CASE("residual pairs with finite differences of the energy") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    Model m(c.grid, params_for(c, 2.3));
    ComplexField u = random_smooth_state(c.grid, rng);
    normalize(u);
    const Model::Evaluation ev = m.evaluate(u, true, false);
    int checked = 0;
    for (int dir = 0; dir < 21; ++dir) {
      ComplexField v = dir % 3 == 0 ? random_smooth_state(c.grid, rng) : ComplexField(c.grid);
      if (dir % 3 != 0)
        for (auto& z : v.values) z = cplx(nd(rng), nd(rng));
      m.ops().project(v);
      normalize(v);
      const double eps = 1e-3;
      auto along = [&](double t) {
        ComplexField w = u;
        for (std::size_t i = 0; i < u.values.size(); ++i) w.values[i] += t * v.values[i];
        return m.evaluate(w, false, false).energy.total;
      };
      const double fd = (8.0 * (along(eps) - along(-eps)) - (along(2 * eps) - along(-2 * eps))) / (12 * eps);
      const double an = 2.0 * inner_re(ev.gradient, v);
      CHECK(std::abs(fd - an) <= 1e-6 * std::max(std::abs(an), 1e-3 * ev.energy.total));
      ++checked;
    }
    CHECK(checked >= 20);
  }
}

TEST_CASE("magnetic inequalities on random states") {
  std::mt19937_64 rng(4);
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    for (double beta : {0.0, 1.0, 5.0, 20.0}) {
      ComplexField u = random_smooth_state(c.grid, rng, 4);
      normalize(u);
      const EnergyBreakdown e = energy(u, params_for(c, beta));
      const double tol = 1e-8 * (1.0 + std::abs(e.total));
      CHECK(e.kinetic_magnetic >= e.diamagnetic - tol);
      if (c.grid.bc == Boundary::dirichlet) CHECK(e.kinetic_magnetic >= 2 * M_PI * beta * e.l4 - tol);
    }
  }
}

TEST_CASE("vortex census") {
  const GridSpec g = make_plane_box(3.0, 64);
  const ComplexField gauss = sample_complex([](double x, double y) { return cplx(std::exp(-(x * x + y * y)), 0.0); }, g);
  CHECK(vortex_census(gauss).empty());

  const ComplexField one = sample_complex([](double x, double y) { return cplx(x, y) * std::exp(-(x * x + y * y)); }, g);
  const auto v1 = vortex_census(one);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].winding == 1);
  CHECK(std::hypot(v1[0].x, v1[0].y) < 2 * g.hx);

  const ComplexField two = sample_complex(
      [](double x, double y) {
        const cplx z(x, -y);
        return z * z * std::exp(-(x * x + y * y));
      },
      g);
  CHECK(total_winding(vortex_census(two)) == -2);
}
