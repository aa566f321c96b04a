#include "afgas/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "afgas/spectral_ops.hpp"

namespace afgas {

namespace {

// Disks narrower than this many cells resolve too poorly to be useful.
constexpr double kMinRadiusCells = 4.0;

struct Window {
  int ix0, ix1, iy0, iy1;
};

Window window(const GridSpec& g, const Point& c, double r) {
  auto clampx = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, g.nx - 1); };
  auto clampy = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, g.ny - 1); };
  return {clampx((c[0] - r - g.x0) / g.hx - 1), clampx((c[0] + r - g.x0) / g.hx + 1),
          clampy((c[1] - r - g.y0) / g.hy - 1), clampy((c[1] + r - g.y0) / g.hy + 1)};
}

void rescale_to(ComplexField& u, double target) {
  const double m = mass(u);
  if (!(m > 0.0)) throw TrialError("bump has no mass on this grid");
  const double s = std::sqrt(target / m);
  for (auto& v : u.values) v *= s;
}

}  // namespace

double bump_profile(double r, double radius, int power) {
  if (r >= radius) return 0.0;
  const double t = 1.0 - (r / radius) * (r / radius);
  const double c = std::sqrt((2.0 * power + 1.0) / (std::numbers::pi * radius * radius));
  return c * std::pow(t, power);
}

void validate_lattice(const BumpLattice& lat, const GridSpec& g) {
  validate(g);
  if (lat.centers.empty()) throw TrialError("lattice has no disks");
  if (!(lat.bump_radius > 0.0) || !(lat.omega > 0.0)) throw TrialError("bump radius and mass must be positive");
  if (lat.profile_power < 2) throw TrialError("profile power must be at least 2");
  if (lat.bump_radius < kMinRadiusCells * std::max(g.hx, g.hy))
    throw TrialError("bump radius is under-resolved by the grid");
  const double r = lat.bump_radius;
  for (const Point& c : lat.centers) {
    if (c[0] - r < g.x0 || c[0] + r > g.x0 + g.extent_x() || c[1] - r < g.y0 || c[1] + r > g.y0 + g.extent_y())
      throw TrialError("disk leaves the domain");
  }
  for (std::size_t a = 0; a < lat.centers.size(); ++a)
    for (std::size_t b = a + 1; b < lat.centers.size(); ++b) {
      const double d = std::hypot(lat.centers[a][0] - lat.centers[b][0], lat.centers[a][1] - lat.centers[b][1]);
      if (d < 2.0 * r) throw TrialError("disks overlap");
    }
}

BumpLattice square_packing(const GridSpec& g, int m, double total_mass, double fill, int power) {
  if (m < 1) throw TrialError("packing needs at least one disk per side");
  if (!(total_mass > 0.0)) throw TrialError("packing mass must be positive");
  if (!(fill > 0.0 && fill < 1.0)) throw TrialError("fill factor must lie in (0, 1)");
  BumpLattice lat;
  const double sx = g.extent_x() / m, sy = g.extent_y() / m;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) lat.centers.push_back({g.x0 + (i + 0.5) * sx, g.y0 + (j + 0.5) * sy});
  lat.bump_radius = 0.5 * fill * std::min(sx, sy);
  lat.omega = total_mass / (static_cast<double>(m) * m);
  lat.profile_power = power;
  return lat;
}

ComplexField single_bump(const BumpLattice& lat, std::size_t j, const GridSpec& g) {
  ComplexField u(g);
  const Point c = lat.centers.at(j);
  const Window w = window(g, c, lat.bump_radius);
  for (int iy = w.iy0; iy <= w.iy1; ++iy)
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      const double r = std::hypot(g.x(ix) - c[0], g.y(iy) - c[1]);
      u.values[g.index(ix, iy)] = bump_profile(r, lat.bump_radius, lat.profile_power);
    }
  rescale_to(u, lat.omega);
  return u;
}

ComplexField build_trial(const BumpLattice& lat, double beta, const GridSpec& g) {
  validate_lattice(lat, g);
  ComplexField u(g);
  const double q = -beta * lat.omega;
  for (std::size_t j = 0; j < lat.centers.size(); ++j) {
    const ComplexField b = single_bump(lat, j, g);
    const Window w = window(g, lat.centers[j], lat.bump_radius);
    for (int iy = w.iy0; iy <= w.iy1; ++iy)
      for (int ix = w.ix0; ix <= w.ix1; ++ix) {
        const std::size_t i = g.index(ix, iy);
        if (b.values[i] == 0.0) continue;
        // Branch of arg(x - x_k) continuous on disk j: the angle measured
        // from the direction of its centre stays inside (-pi/2, pi/2)
        // because the disks are disjoint. The global atan2 cut would cross
        // whole rows of disks and, for non-integer beta omega, put a phase
        // jump inside them.
        double phase = 0.0;
        for (std::size_t k = 0; k < lat.centers.size(); ++k) {
          if (k == j) continue;
          const double cx = lat.centers[j][0] - lat.centers[k][0], cy = lat.centers[j][1] - lat.centers[k][1];
          const double dx = g.x(ix) - lat.centers[k][0], dy = g.y(iy) - lat.centers[k][1];
          phase += std::atan2(cy, cx) + std::atan2(cx * dy - cy * dx, cx * dx + cy * dy);
        }
        u.values[i] = b.values[i] * std::polar(1.0, q * phase);
      }
  }
  return u;
}

double gauge_cancellation_error(const BumpLattice& lat, double beta, const GridSpec& g, std::size_t j) {
  validate_lattice(lat, g);
  ScalarField others(g);
  for (std::size_t k = 0; k < lat.centers.size(); ++k) {
    if (k == j) continue;
    const ComplexField b = single_bump(lat, k, g);
    for (std::size_t i = 0; i < b.values.size(); ++i) others.values[i] += std::norm(b.values[i]);
  }
  SpectralOps ops(g);
  const VectorField A = ops.grad_perp_convolve(others);
  const Point c = lat.centers.at(j);
  const Window w = window(g, c, lat.bump_radius);
  double err = 0.0, scale = 0.0;
  for (int iy = w.iy0; iy <= w.iy1; ++iy)
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      const double x = g.x(ix), y = g.y(iy);
      if (std::hypot(x - c[0], y - c[1]) >= lat.bump_radius) continue;
      double gx = 0.0, gy = 0.0;
      for (std::size_t k = 0; k < lat.centers.size(); ++k) {
        if (k == j) continue;
        const double dx = x - lat.centers[k][0], dy = y - lat.centers[k][1];
        const double r2 = dx * dx + dy * dy;
        gx += -dy / r2;
        gy += dx / r2;
      }
      const std::size_t i = g.index(ix, iy);
      const double ex = beta * (A.vx[i] - lat.omega * gx);
      const double ey = beta * (A.vy[i] - lat.omega * gy);
      err = std::max(err, std::hypot(ex, ey));
      scale = std::max(scale, std::abs(beta) * lat.omega * std::hypot(gx, gy));
    }
  return scale > 0.0 ? err / scale : err;
}

Certificate upper_bound_certificate(const GridSpec& g, double beta, double M) {
  validate(g);
  if (g.bc != Boundary::dirichlet) throw TrialError("certificates are built on dirichlet squares");
  if (!(M > 0.0) || !std::isfinite(M)) throw TrialError("certificate mass must be positive");
  const double L = std::min(g.extent_x(), g.extent_y());
  const double h = std::max(g.hx, g.hy);
  // The gauge phases turn by about 2.2 |beta| M h / L per cell near the corners.
  if (std::abs(beta) * M / L * h > 1.0 + 1e-9) throw TrialError("grid under-resolves the gauge phases");
  std::vector<int> counts;
  for (double spacing : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
    const int m = std::max(1, static_cast<int>(std::lround(L / spacing)));
    if (0.49 * L / m < kMinRadiusCells * h) continue;
    if (std::find(counts.begin(), counts.end(), m) == counts.end()) counts.push_back(m);
  }
  // Small domains: a single centred disk.
  if (counts.empty() && 0.49 * L >= kMinRadiusCells * h) counts.push_back(1);
  if (counts.empty()) throw TrialError("grid too coarse for any trial packing");

  Model model(g, ModelParams{beta, std::nullopt});
  Certificate best;
  best.energy = std::numeric_limits<double>::infinity();
  for (int m : counts) {
    BumpLattice lat = square_packing(g, m, M);
    ComplexField u = build_trial(lat, beta, g);
    model.ops().project(u);
    rescale_to(u, M);
    const EnergyBreakdown e = model.energy(u);
    best.candidates.emplace_back(m, e.total);
    if (e.total < best.energy) {
      best.energy = e.total;
      best.state = std::move(u);
      best.lattice = std::move(lat);
      best.breakdown = e;
    }
  }
  return best;
}

}  // namespace afgas
