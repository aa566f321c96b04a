#include <cmath>

#include "afgas/lda.hpp"
#include "doctest.h"

using namespace afgas;

namespace {

SolverConfig fast() {
  SolverConfig c;
  c.restarts = 0;
  return c;
}

}  // namespace

TEST_CASE("grid sized from the TF support") {
  const TrapSpec V = TrapSpec::radial(1.0, 2.0);
  GridPolicy p;
  const GridSpec g = lda_grid(V, 32.0, 7.0, p);
  const double R = tf_solve(V, 32.0, 7.0).support_radius;
  CHECK(g.bc == Boundary::plane);
  CHECK(g.extent_x() == doctest::Approx(4.0 * R));
  CHECK(g.nx % 2 == 0);
  CHECK(std::pow(32.0, -0.25) / g.hx >= p.points_per_vortex);
  // The box covers the larger of the two TF supports.
  const GridSpec lo = lda_grid(V, 32.0, 1.0, p);
  CHECK(lo.extent_x() == doctest::Approx(4.0 * tf_solve(V, 32.0, 2 * M_PI).support_radius));
  // Small beta: the linear length sets the box.
  CHECK(lda_grid(V, 0.5, 2 * M_PI, p).extent_x() == doctest::Approx(10.0));
  p.fixed_n = 48;
  CHECK(lda_grid(V, 32.0, 7.0, p).nx == 48);
  CHECK_THROWS_AS(lda_grid(V, -1.0, 7.0, p), std::invalid_argument);
}

TEST_CASE("small sweep records") {
  const TrapSpec V = TrapSpec::radial(1.0, 2.0);
  GridPolicy p;
  p.fixed_n = 64;
  const double e11 = 7.0;
  const SweepResult s = lda_sweep(V, {1.0, 2.0, 4.0}, e11, p, fast());
  REQUIRE(s.records.size() == 3);
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const LdaRecord& r = s.records[i];
    CAPTURE(r.beta);
    if (i > 0) CHECK(r.beta > s.records[i - 1].beta);
    CHECK(r.ratio > 0.0);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.energy_tf_2pi == doctest::Approx(4.0 / 3.0 * std::sqrt(2.0) * std::sqrt(r.beta)).epsilon(1e-8));
    // The ratio is monotone in the coupling: e11 >= 2 pi gives the smaller ratio.
    CHECK(r.ratio_2pi >= r.ratio);
    CHECK(r.tf_distance >= 0.0);
    CHECK(r.boundary_mass < 1e-6);
    CHECK(r.resolution_margin > kMinResolutionMargin);
    CHECK_FALSE(r.under_resolved);
  }
  CHECK(std::isfinite(s.top_slope));
}

TEST_CASE("under-resolved records are flagged and the sweep continues") {
  const TrapSpec V = TrapSpec::radial(1.0, 2.0);
  GridPolicy p;
  p.fixed_n = 16;
  const SweepResult s = lda_sweep(V, {2.0, 4.0}, 2 * M_PI, p, fast());
  REQUIRE(s.records.size() == 2);
  CHECK(s.records[1].under_resolved);
}

TEST_CASE("linear problem passes the resolution audit") {
  const TrapSpec V = TrapSpec::radial(1.0, 2.0);
  LdaRecord rec;
  rec.beta = 0.0;
  rec.grid = make_plane_box(6.0, 48);
  rec.energy_af = minimize(rec.grid, ModelParams{0.0, sample_trap(V, rec.grid)}, 1.0, fast()).breakdown.total;
  const ResolutionAudit a = resolution_audit(rec, V, fast());
  CHECK(a.relative_change < 1e-4);
  CHECK(a.passed);
  CHECK(a.fine_energy == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("anisotropic smoke case") {
  const TrapSpec V = TrapSpec::anisotropic(1.0, 2.0);
  GridPolicy p;
  p.fixed_n = 64;
  const SweepResult s = lda_sweep(V, {2.0}, 2 * M_PI, p, fast());
  REQUIRE(s.records.size() == 1);
  CHECK(s.records[0].ratio > 1.0 - 0.05);
  CHECK(s.records[0].ratio == s.records[0].ratio_2pi);
}
