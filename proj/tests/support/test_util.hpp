#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "afgas/grid.hpp"

namespace afgas::testing {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Smooth random state: a few Gaussians with random phases and vortex-free
// phase ramps, decaying well inside the box.
inline ComplexField random_smooth_state(const GridSpec& g, std::mt19937_64& rng, int blobs = 3) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double cx = g.x0 + 0.5 * g.extent_x();
  const double cy = g.y0 + 0.5 * g.extent_y();
  const double span = std::min(g.extent_x(), g.extent_y());
  struct Blob { double x, y, s, kx, ky; cplx a; };
  std::vector<Blob> bs;
  for (int b = 0; b < blobs; ++b) {
    Blob bl;
    bl.x = cx + (uni(rng) - 0.5) * 0.25 * span;
    bl.y = cy + (uni(rng) - 0.5) * 0.25 * span;
    bl.s = span * (0.06 + 0.04 * uni(rng));
    bl.kx = (uni(rng) - 0.5) * 4.0 / bl.s;
    bl.ky = (uni(rng) - 0.5) * 4.0 / bl.s;
    bl.a = std::polar(0.5 + uni(rng), 2.0 * M_PI * uni(rng));
    bs.push_back(bl);
  }
  return sample_complex(
      [&](double x, double y) {
        cplx v = 0.0;
        for (const auto& b : bs) {
          const double r2 = ((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (b.s * b.s);
          v += b.a * std::exp(-r2) * std::polar(1.0, b.kx * (x - b.x) + b.ky * (y - b.y));
        }
        return v;
      },
      g);
}

inline void normalize(ComplexField& u, double M = 1.0) {
  const double s = std::sqrt(M / mass(u));
  for (auto& v : u.values) v *= s;
}

}  // namespace afgas::testing
