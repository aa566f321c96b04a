#include "afgas/tf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace afgas {

namespace {

constexpr int kAngles = 512;

double radial_integral(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-14);
}

// int over the plane of F(x) as sum over angles (periodic trapezoid) of
// radial Gauss-Kronrod integrals on [0, rmax(theta)], split at the radii
// returned by `breaks` where F has kinks.
using Breaks = std::function<void(double ct, double st, std::vector<double>& out)>;

double polar_integral(const std::function<double(double, double)>& F,
                      const std::function<double(double)>& rmax, const Breaks& breaks = {},
                      int angles = kAngles) {
  double sum = 0.0;
  const double dt = 2.0 * std::numbers::pi / angles;
  std::vector<double> pts;
  for (int k = 0; k < angles; ++k) {
    const double t = (k + 0.5) * dt;
    const double ct = std::cos(t), st = std::sin(t);
    const double top = rmax(t);
    pts.assign({0.0, top});
    if (breaks) breaks(ct, st, pts);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = std::max(pts[i], 0.0), b = std::min(pts[i + 1], top);
      sum += radial_integral([&](double r) { return F(r * ct, r * st) * r; }, a, b);
    }
  }
  return sum * dt;
}

double unit_mass_for(const TrapSpec& V, double beta, double e11, double lambda) {
  const double norm = 1.0 / (2.0 * beta * e11);
  if (V.kind == TrapSpec::Kind::radial) {
    const double R = std::pow(lambda / V.c, 1.0 / V.s);
    return 2.0 * std::numbers::pi * norm *
           radial_integral([&](double r) { return (lambda - V.c * std::pow(r, V.s)) * r; }, 0.0, R);
  }
  double sum = 0.0;
  const double dt = 2.0 * std::numbers::pi / kAngles;
  for (int k = 0; k < kAngles; ++k) {
    const double t = (k + 0.5) * dt;
    const double phi = V.angular(t);
    const double R = std::pow(lambda / phi, 1.0 / V.s);
    sum += radial_integral([&](double r) { return (lambda - phi * std::pow(r, V.s)) * r; }, 0.0, R);
  }
  return norm * sum * dt;
}

}  // namespace

TrapSpec TrapSpec::radial(double c, double s) {
  TrapSpec t;
  t.kind = Kind::radial;
  t.c = c;
  t.s = s;
  t.validate();
  return t;
}

TrapSpec TrapSpec::anisotropic(double c1, double c2, double s) {
  TrapSpec t;
  t.kind = Kind::anisotropic;
  t.c1 = c1;
  t.c2 = c2;
  t.s = s;
  t.validate();
  return t;
}

double TrapSpec::operator()(double x, double y) const {
  if (kind == Kind::radial) return c * std::pow(std::hypot(x, y), s);
  const double q = c1 * x * x + c2 * y * y;
  return s == 2.0 ? q : std::pow(q, 0.5 * s);
}

double TrapSpec::angular(double theta) const { return (*this)(std::cos(theta), std::sin(theta)); }

void TrapSpec::validate() const {
  if (!(s > 1.0) || !std::isfinite(s)) throw TfError("trap degree s must exceed 1");
  if (kind == Kind::radial && !(c > 0.0)) throw TfError("radial trap needs c > 0");
  if (kind == Kind::anisotropic && !(c1 > 0.0 && c2 > 0.0)) throw TfError("anisotropic trap needs c1, c2 > 0");
}

ScalarField sample_trap(const TrapSpec& V, const GridSpec& g) {
  return sample([&](double x, double y) { return V(x, y); }, g);
}

double TfSolution::density(double x, double y) const {
  return std::max(lambda - trap(x, y), 0.0) / (2.0 * beta * e11);
}

double TfSolution::support_radius_at(double theta) const {
  return std::pow(lambda / trap.angular(theta), 1.0 / trap.s);
}

ScalarField TfSolution::sample(const GridSpec& g) const {
  return afgas::sample([&](double x, double y) { return density(x, y); }, g);
}

TfSolution tf_solve(const TrapSpec& V, double beta, double e11) {
  V.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw TfError("TF needs beta > 0");
  if (!(e11 > 0.0) || !std::isfinite(e11)) throw TfError("TF needs e11 > 0");

  auto f = [&](double lam) { return unit_mass_for(V, beta, e11, lam) - 1.0; };
  double lo = 1e-3, hi = 1.0;
  while (f(lo) > 0.0) lo *= 0.5;
  while (f(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);

  TfSolution sol;
  sol.trap = V;
  sol.beta = beta;
  sol.e11 = e11;
  sol.lambda = 0.5 * (bracket.first + bracket.second);
  sol.rho_max = sol.lambda / (2.0 * beta * e11);
  auto rmax = [&](double t) { return sol.support_radius_at(t); };
  double rsup = 0.0;
  for (int k = 0; k < kAngles; ++k) rsup = std::max(rsup, rmax(2.0 * std::numbers::pi * k / kAngles));
  sol.support_radius = V.kind == TrapSpec::Kind::radial ? rmax(0.0) : rsup;

  sol.l2sq = polar_integral([&](double x, double y) { const double r = sol.density(x, y); return r * r; }, rmax);
  const double pot = polar_integral([&](double x, double y) { return V(x, y) * sol.density(x, y); }, rmax);
  sol.energy = beta * e11 * sol.l2sq + pot;
  const double chem = sol.energy + beta * e11 * sol.l2sq;
  if (std::abs(chem - sol.lambda) > 1e-10 * (1.0 + std::abs(sol.lambda)))
    throw TfError("TF chemical potential identity failed");
  return sol;
}

TfSolution tf_scale(const TfSolution& sol, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw TfError("TF scaling needs beta > 0");
  const double s = sol.trap.s;
  const double q = beta / sol.beta;
  TfSolution out = sol;
  out.beta = beta;
  const double up = std::pow(q, s / (s + 2.0));
  out.lambda = sol.lambda * up;
  out.energy = sol.energy * up;
  out.l2sq = sol.l2sq * std::pow(q, -2.0 / (s + 2.0));
  out.rho_max = sol.rho_max * std::pow(q, -2.0 / (s + 2.0));
  out.support_radius = sol.support_radius * std::pow(q, 1.0 / (s + 2.0));
  return out;
}

TfDistance tf_distance(const ScalarField& rho, const TfSolution& sol, double R) {
  const GridSpec& g = rho.grid;
  const double m = integrate(rho);
  if (std::abs(m - 1.0) > 1e-6) throw TfError("tf_distance expects a unit-mass density");
  const TfSolution base = tf_scale(sol, 1.0);
  const double s = sol.trap.s;
  const double b = std::pow(sol.beta, 1.0 / (s + 2.0));
  if (!(R > 0.0)) R = 1.25 * base.support_radius;

  // Test functions with unit W^{1,inf}(B_R) norm (sup and Lipschitz constant <= 1).
  struct Test {
    std::string name;
    std::function<double(double, double)> phi;
    Breaks breaks;
  };
  std::vector<Test> dict;
  const double k = 1.0 / std::max(1.0, R);
  dict.push_back({"x", [k](double x, double) { return k * x; }, {}});
  dict.push_back({"y", [k](double, double y) { return k * y; }, {}});
  dict.push_back({"|x|", [k](double x, double y) { return k * std::hypot(x, y); }, {}});
  dict.push_back({"|x|^2/(2R)", [k, R](double x, double y) { return k * (x * x + y * y) / (2.0 * R); }, {}});
  for (double r0 : {0.25 * R, 0.5 * R}) {
    const double kt = 1.0 / std::max(1.0, r0);
    const int steps = 4;
    for (int j = -steps; j <= steps; ++j)
      for (int i = -steps; i <= steps; ++i) {
        const double cx = i * R / steps, cy = j * R / steps;
        if (std::hypot(cx, cy) > R) continue;
        // The ray r e meets the circle |x - c| = r0 where r^2 - 2 r (c.e) + |c|^2 - r0^2 = 0;
        // the closest approach r = c.e is the kink at the apex.
        auto tent_breaks = [=](double ct, double st, std::vector<double>& out) {
          const double ce = cx * ct + cy * st;
          const double disc = ce * ce - (cx * cx + cy * cy - r0 * r0);
          out.push_back(ce);
          if (disc > 0.0) {
            out.push_back(ce - std::sqrt(disc));
            out.push_back(ce + std::sqrt(disc));
          }
        };
        dict.push_back({"tent(" + std::to_string(cx) + "," + std::to_string(cy) + "," + std::to_string(r0) + ")",
                        [=](double x, double y) { return kt * std::max(r0 - std::hypot(x - cx, y - cy), 0.0); },
                        tent_breaks});
      }
  }

  TfDistance out;
  out.R = R;
  const double dA = g.cell_area();
  auto rmax = [&](double t) { return std::min(base.support_radius_at(t), R); };
  for (const Test& t : dict) {
    double lhs = 0.0;  // int_{B_R} phi(x) b^2 rho(b x) dx = int_{B_{bR}} phi(y/b) rho(y) dy
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.x(ix) / b, y = g.y(iy) / b;
        if (x * x + y * y > R * R) continue;
        lhs += t.phi(x, y) * rho.values[g.index(ix, iy)];
      }
    lhs *= dA;
    const double rhs = polar_integral([&](double x, double y) { return t.phi(x, y) * base.density(x, y); }, rmax,
                                        t.breaks);
    const double v = std::abs(lhs - rhs);
    if (v >= out.dictionary) {
      out.dictionary = v;
      out.argmax = t.name;
    }
  }

  // Mollified L1 part: Gaussian blur of the difference, width eps in the
  // rescaled variable.
  const double eps = 0.1 * R;
  std::vector<double> diff(g.size());
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix) / b, y = g.y(iy) / b;
      diff[g.index(ix, iy)] = b * b * rho.values[g.index(ix, iy)] - base.density(x, y);
    }
  auto blur = [&](int axis) {
    const double sigma = eps * b / (axis == 0 ? g.hx : g.hy);
    const int w = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    std::vector<double> ker(2 * w + 1);
    double ks = 0.0;
    for (int i = -w; i <= w; ++i) ks += ker[i + w] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    for (auto& v : ker) v /= ks;
    std::vector<double> out2(diff.size(), 0.0);
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        double acc = 0.0;
        for (int o = -w; o <= w; ++o) {
          const int jx = axis == 0 ? ix + o : ix, jy = axis == 0 ? iy : iy + o;
          if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
          acc += ker[o + w] * diff[g.index(jx, jy)];
        }
        out2[g.index(ix, iy)] = acc;
      }
    diff.swap(out2);
  };
  blur(0);
  blur(1);
  double l1 = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix) / b, y = g.y(iy) / b;
      if (x * x + y * y <= R * R) l1 += std::abs(diff[g.index(ix, iy)]);
    }
  out.mollified_l1 = eps * l1 * dA / (b * b);
  out.value = std::max(out.dictionary, out.mollified_l1);
  return out;
}

}  // namespace afgas
