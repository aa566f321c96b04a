#include <cmath>
#include <random>

#include "afgas/solver.hpp"
#include "afgas/trial.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace afgas;
using afgas::testing::normalize;
using afgas::testing::random_smooth_state;
using afgas::testing::rel_err;

namespace {

ScalarField harmonic(const GridSpec& g) {
  return sample([](double x, double y) { return x * x + y * y; }, g);
}

SolverConfig quiet() {
  SolverConfig c;
  c.restarts = 0;
  return c;
}

}  // namespace

TEST_CASE("linear ground state on the dirichlet square") {
  for (double L : {1.0, 2.5}) {
    const GridSpec g = make_square(L, 64, Boundary::dirichlet);
    const SolveReport r = minimize(g, ModelParams{0.0, {}}, 1.0, quiet());
    CHECK(r.converged);
    CHECK(rel_err(r.breakdown.total, 2 * M_PI * M_PI / (L * L)) < 1e-3);
    CHECK(rel_err(r.lambda, r.breakdown.total) < 1e-6);
  }
}

TEST_CASE("harmonic oscillator ground state") {
  const GridSpec g = make_plane_box(6.0, 64);
  const SolveReport r = minimize(g, ModelParams{0.0, harmonic(g)}, 1.0, quiet());
  CHECK(r.converged);
  CHECK(rel_err(r.breakdown.total, 2.0) < 1e-3);
}

TEST_CASE("scaling transform identities") {
  std::mt19937_64 rng(11);
  const GridSpec g = make_square(1.0, 48, Boundary::dirichlet);
  const double beta = 1.7;
  for (auto [lam, mu] : {std::pair{2.0, 1.0}, {1.0, 2.0}, {0.5, 3.0}}) {
    CAPTURE(lam);
    CAPTURE(mu);
    ComplexField u = random_smooth_state(g, rng);
    normalize(u);
    const ComplexField v = scaling_transform(u, lam, mu);
    CHECK(v.grid.hx == doctest::Approx(mu * g.hx).epsilon(1e-15));
    CHECK(std::abs(mass(v) - lam * lam * mu * mu * mass(u)) <= 1e-12 * lam * lam * mu * mu);
    const double lhs = energy(v, ModelParams{beta, {}}).total;
    const double rhs = lam * lam * energy(u, ModelParams{beta * lam * lam * mu * mu, {}}).total;
    CHECK(rel_err(lhs, rhs) <= 1e-8);
  }
  ComplexField u = random_smooth_state(g, rng);
  const ComplexField same = scaling_transform(u, 1.0, 1.0);
  CHECK(same.values == u.values);
}

TEST_CASE("descent invariants") {
  const GridSpec g = make_square(1.0, 48, Boundary::dirichlet);
  const SolveReport r = minimize(g, ModelParams{4.0, {}}, 1.0, quiet());
  REQUIRE(r.history.size() > 2);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    const double prev = r.history[i - 1].energy;
    CHECK(r.history[i].energy <= prev + 1e-13 * (1.0 + std::abs(prev)) * 10.0);
  }
  CHECK(r.mass_error <= 1e-12);
  CHECK(r.converged);
  CHECK(r.bounds.diamagnetic_violations == 0);
  CHECK(r.bounds.l4_violations == 0);

  // Stationarity at convergence, with the multiplier given by the closed formula.
  Model m(g, ModelParams{4.0, {}});
  const double lam = m.multiplier(r.state);
  CHECK(rel_err(lam, r.lambda) < 1e-8);
  ComplexField res = m.residual(r.state, lam);
  m.ops().project(res);
  CHECK(l2_norm(res) <= r.grad_tol * (1 + 1e-6));
  CHECK(r.breakdown.kinetic_magnetic >= 2 * M_PI * 4.0 * r.breakdown.l4 - 1e-8);
}

TEST_CASE("neumann energy does not exceed dirichlet") {
  for (double beta : {0.0, 2.0, 6.0}) {
    CAPTURE(beta);
    const GridSpec gd = make_square(1.0, 40, Boundary::dirichlet);
    const GridSpec gn = make_square(1.0, 40, Boundary::neumann);
    const double ed = minimize(gd, ModelParams{beta, {}}, 1.0, quiet()).breakdown.total;
    const double en = minimize(gn, ModelParams{beta, {}}, 1.0, quiet()).breakdown.total;
    CHECK(en <= ed + 1e-8);
  }
}

TEST_CASE("solver energy below the trial certificate") {
  const GridSpec g = make_square(2.0, 64, Boundary::dirichlet);
  for (double beta : {1.0, 12.0}) {
    CAPTURE(beta);
    SolverConfig c = quiet();
    c.restarts = 1;
    const SolveReport r = minimize(g, ModelParams{beta, {}}, 4.0, c);
    const Certificate cert = upper_bound_certificate(g, beta, 4.0);
    CHECK(r.breakdown.total <= cert.energy);
  }
}

TEST_CASE("coarse squares warn about the self-generated phase") {
  SolverConfig c = quiet();
  c.restarts = 0;
  auto warned = [](const SolveReport& r) {
    for (const auto& w : r.warnings)
      if (w.find("self-generated phase") != std::string::npos) return true;
    return false;
  };
  CHECK(warned(minimize(make_square(4.0, 8, Boundary::dirichlet), ModelParams{1.0, {}}, 16.0, c)));
  CHECK_FALSE(warned(minimize(make_square(4.0, 16, Boundary::dirichlet), ModelParams{1.0, {}}, 16.0, c)));
}

TEST_CASE("negative beta by conjugation") {
  const GridSpec g = make_square(1.0, 32, Boundary::dirichlet);
  const double ep = minimize(g, ModelParams{3.0, {}}, 1.0, quiet()).breakdown.total;
  const double em = minimize(g, ModelParams{-3.0, {}}, 1.0, quiet()).breakdown.total;
  CHECK(rel_err(em, ep) < 1e-8);
}

TEST_CASE("scaling covariance of converged energies") {
  const GridSpec g = make_square(1.0, 32, Boundary::dirichlet);
  const double beta = 3.0, lam = 0.5, mu = 2.0;
  SolverConfig c = quiet();
  const SolveReport a = minimize(g, ModelParams{beta, {}}, 1.0, c);
  SolverConfig cs = c;
  cs.initializer = Initializer::file;
  cs.initial_state = scaling_transform(initial_state(g, ModelParams{beta, {}}, 1.0, c), lam, mu);
  const GridSpec gs = cs.initial_state->grid;
  const double Ms = lam * lam * mu * mu;
  const SolveReport b = minimize(gs, ModelParams{beta / Ms, {}}, Ms, cs);
  const double scale = std::abs(a.breakdown.total);
  CHECK(std::abs(b.breakdown.total - lam * lam * a.breakdown.total) <= 2 * a.grad_tol * scale);
}

TEST_CASE("deterministic given the seed") {
  const GridSpec g = make_square(1.0, 32, Boundary::dirichlet);
  SolverConfig c;
  c.restarts = 2;
  c.seed = 5;
  const SolveReport a = minimize(g, ModelParams{10.0, {}}, 1.0, c);
  c.threads = 2;
  const SolveReport b = minimize(g, ModelParams{10.0, {}}, 1.0, c);
  CHECK(a.state.values == b.state.values);
  CHECK(a.breakdown.total == b.breakdown.total);
  CHECK(a.iterations == b.iterations);
  CHECK(a.branch_energies.size() == 3);
}

TEST_CASE("continuation schedule") {
  SolverConfig c;
  CHECK(continuation_schedule(5.0, c) == std::vector<double>{5.0});
  CHECK(continuation_schedule(64.0, c) == std::vector<double>{8.0, 16.0, 32.0, 64.0});
  CHECK(continuation_schedule(-20.0, c) == std::vector<double>{-5.0, -10.0, -20.0});
  // The coupling that matters is beta times the mass.
  CHECK(continuation_schedule(1.0, c, 64.0) == std::vector<double>{0.125, 0.25, 0.5, 1.0});
  c.continuation = false;
  CHECK(continuation_schedule(64.0, c) == std::vector<double>{64.0});
  c.continuation = true;
  c.schedule = {2.0, 7.0};
  CHECK(continuation_schedule(20.0, c) == std::vector<double>{2.0, 7.0, 20.0});
}

TEST_CASE("configuration and input errors") {
  SolverConfig c;
  c.grad_tol = -1.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = SolverConfig{};
  c.schedule = {4.0, 2.0};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = SolverConfig{};
  c.shrink = 1.5;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  const GridSpec plane = make_plane_box(3.0, 16);
  CHECK_THROWS_AS(minimize(plane, ModelParams{0.0, {}}, 1.0, SolverConfig{}), SolverError);
  const GridSpec sq = make_square(1.0, 16, Boundary::dirichlet);
  CHECK_THROWS_AS(minimize(sq, ModelParams{0.0, {}}, -1.0, SolverConfig{}), SolverError);
  c = SolverConfig{};
  c.initializer = Initializer::file;
  CHECK_THROWS_AS(minimize(sq, ModelParams{0.0, {}}, 1.0, c), std::invalid_argument);
  CHECK(method_from_string("lbfgs") == Method::lbfgs);
  CHECK(initializer_from_string("vortex_imprint") == Initializer::vortex_imprint);
  CHECK_THROWS_AS(method_from_string("newton"), std::invalid_argument);
}
