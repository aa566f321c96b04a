#include <cmath>

#include "afgas/trial.hpp"
#include "doctest.h"

using namespace afgas;

namespace {

double isolated_energy_sum(const BumpLattice& lat, double beta, const GridSpec& g) {
  Model m(g, ModelParams{beta, std::nullopt});
  double s = 0.0;
  for (std::size_t j = 0; j < lat.centers.size(); ++j) s += m.energy(single_bump(lat, j, g)).total;
  return s;
}

}  // namespace

TEST_CASE("profile is normalised and vanishes at the rim") {
  double s = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) / n * 1.3;
    s += 2 * M_PI * r * std::pow(bump_profile(r, 1.3, 8), 2) * 1.3 / n;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bump_profile(1.3, 1.3, 8) == 0.0);
  CHECK(bump_profile(2.0, 1.3, 8) == 0.0);
}

TEST_CASE("single bump carries no phase") {
  const GridSpec g = make_square(4.0, 64, Boundary::dirichlet);
  BumpLattice lat;
  lat.centers = {{2.0, 2.0}};
  lat.bump_radius = 1.5;
  lat.omega = 1.0;
  const ComplexField u = build_trial(lat, 5.0, g);
  const ComplexField b = single_bump(lat, 0, g);
  for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(u.values[i] == b.values[i]);
  CHECK(mass(u) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauge phases cancel the mutual interaction") {
  const GridSpec g = make_square(6.0, 128, Boundary::dirichlet);
  BumpLattice lat;
  lat.centers = {{1.6, 2.0}, {4.3, 3.9}};
  lat.bump_radius = 1.2;
  lat.omega = 0.8;
  for (double beta : {0.7, 3.0}) {
    CAPTURE(beta);
    for (std::size_t j = 0; j < 2; ++j) CHECK(gauge_cancellation_error(lat, beta, g, j) < 1e-6);
    const double E = energy(build_trial(lat, beta, g), ModelParams{beta, std::nullopt}).total;
    const double sum = isolated_energy_sum(lat, beta, g);
    CHECK(std::abs(E - sum) <= 1e-6 * sum);
  }
}

TEST_CASE("lattice additivity") {
  const GridSpec g = make_square(8.0, 128, Boundary::dirichlet);
  const BumpLattice lat = square_packing(g, 3, 9.0);
  const double beta = 1.0;
  const double E = energy(build_trial(lat, beta, g), ModelParams{beta, std::nullopt}).total;
  CHECK(std::abs(E - isolated_energy_sum(lat, beta, g)) <= 1e-6 * E);
  // Without the gauge phases the disks interact.
  ComplexField plain(g);
  for (std::size_t j = 0; j < lat.centers.size(); ++j) {
    const ComplexField b = single_bump(lat, j, g);
    for (std::size_t i = 0; i < b.values.size(); ++i) plain.values[i] += b.values[i];
  }
  CHECK(energy(plain, ModelParams{beta, std::nullopt}).total > 1.01 * E);
}

TEST_CASE("additivity with fractional circulation along lattice rows") {
  // beta omega is not an integer, so the phase must not jump inside any disk.
  const GridSpec g = make_square(8.0, 128, Boundary::dirichlet);
  for (double beta : {0.7, 2.56}) {
    CAPTURE(beta);
    const BumpLattice lat = square_packing(g, 4, 16.0 * 1.3);
    const double E = energy(build_trial(lat, beta, g), ModelParams{beta, std::nullopt}).total;
    CHECK(std::abs(E - isolated_energy_sum(lat, beta, g)) <= 1e-6 * E);
  }
}

TEST_CASE("invalid lattices are rejected") {
  const GridSpec g = make_square(4.0, 64, Boundary::dirichlet);
  BumpLattice lat;
  lat.centers = {{1.5, 2.0}, {2.5, 2.0}};
  lat.bump_radius = 0.8;
  CHECK_THROWS_AS(build_trial(lat, 1.0, g), TrialError);
  lat.centers = {{0.5, 2.0}};
  CHECK_THROWS_AS(build_trial(lat, 1.0, g), TrialError);
  lat.centers = {{2.0, 2.0}};
  lat.bump_radius = 0.1;
  CHECK_THROWS_AS(build_trial(lat, 1.0, g), TrialError);
  CHECK_THROWS_AS(upper_bound_certificate(make_square(4.0, 64, Boundary::neumann), 1.0, 1.0), TrialError);
  CHECK_THROWS_AS(upper_bound_certificate(g, 1.0, -1.0), TrialError);
  // 16 x 16 at unit density needs 256 points per axis.
  CHECK_THROWS_AS(upper_bound_certificate(make_square(16.0, 128, Boundary::dirichlet), 1.0, 256.0), TrialError);
}

TEST_CASE("certificate at tiny beta is the linear packing energy") {
  const GridSpec g = make_square(4.0, 64, Boundary::dirichlet);
  const Certificate c = upper_bound_certificate(g, 1e-9, 4.0);
  const Certificate lin = upper_bound_certificate(g, 0.0, 4.0);
  CHECK(c.energy == doctest::Approx(lin.energy).epsilon(1e-6));
  CHECK(mass(c.state) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c.candidates.size() >= 2);
}

TEST_CASE("certificate energy per area stays bounded") {
  const double beta = 1.0;
  const Certificate c8 = upper_bound_certificate(make_square(8.0, 128, Boundary::dirichlet), beta, 64.0);
  const Certificate c16 = upper_bound_certificate(make_square(16.0, 256, Boundary::dirichlet), beta, 256.0);
  MESSAGE("per-area certificates: " << c8.energy / 64.0 << " " << c16.energy / 256.0);
  CHECK(c16.energy / 256.0 <= 1.05 * c8.energy / 64.0);
}
