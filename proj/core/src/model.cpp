#include "afgas/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace afgas {

namespace {

void check_finite(double v, const char* term) {
  if (!std::isfinite(v)) throw ModelError(std::string("non-finite value in energy term '") + term + "'");
}

ComplexField conjugated(const ComplexField& u) {
  ComplexField c = u;
  for (auto& v : c.values) v = std::conj(v);
  return c;
}

}  // namespace

ScalarField density(const ComplexField& u) {
  ScalarField rho(u.grid);
  for (std::size_t i = 0; i < u.values.size(); ++i) rho.values[i] = std::norm(u.values[i]);
  return rho;
}

VectorField current(SpectralOps& ops, const ComplexField& u) {
  auto [dx, dy] = ops.grad(u);
  VectorField J(u.grid);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const cplx cu = std::conj(u.values[i]);
    J.vx[i] = (cu * dx.values[i]).imag();
    J.vy[i] = (cu * dy.values[i]).imag();
  }
  return J;
}

VectorField current(const ComplexField& u) {
  SpectralOps ops(u.grid);
  return current(ops, u);
}

VectorField vector_potential(SpectralOps& ops, const ScalarField& rho, bool* support_warning) {
  return ops.grad_perp_convolve(rho, support_warning);
}

VectorField vector_potential(const ScalarField& rho, bool* support_warning) {
  SpectralOps ops(rho.grid);
  return ops.grad_perp_convolve(rho, support_warning);
}

Model::Model(const GridSpec& g, ModelParams p) : grid_(g), params_(std::move(p)), ops_(g) {
  if (!std::isfinite(params_.beta)) throw ModelError("beta must be finite");
  if (params_.V) {
    require_same_grid(params_.V->grid, g, "trap potential");
    for (double v : params_.V->values)
      if (!std::isfinite(v) || v < 0.0) throw ModelError("trap potential must be finite and non-negative");
  }
}

Model::Evaluation Model::evaluate(const ComplexField& u, bool with_gradient, bool with_diagnostics) {
  require_same_grid(u.grid, grid_, "energy");
  if (params_.beta >= 0.0) return evaluate_nonnegative(u, with_gradient, with_diagnostics);
  // beta < 0: evaluate conj(u) at |beta|; the gradient conjugates back.
  params_.beta = -params_.beta;
  Evaluation ev;
  try {
    ev = evaluate_nonnegative(conjugated(u), with_gradient, with_diagnostics);
  } catch (...) {
    params_.beta = -params_.beta;
    throw;
  }
  params_.beta = -params_.beta;
  for (auto& v : ev.gradient.values) v = std::conj(v);
  return ev;
}

Model::Evaluation Model::evaluate_nonnegative(const ComplexField& u, bool with_gradient,
                                              bool with_diagnostics) {
  const double beta = params_.beta;
  const double dA = grid_.cell_area();
  const std::size_t n = u.values.size();

  const ScalarField rho = density(u);
  auto [dx, dy] = ops_.grad(u);
  bool warn = false;
  const VectorField A = ops_.grad_perp_convolve(rho, &warn);

  Evaluation ev;
  EnergyBreakdown& e = ev.energy;
  e.support_warning = warn;
  double grad2 = 0.0, aj = 0.0, a2rho = 0.0, pot = 0.0, l4 = 0.0, direct = 0.0;
  const std::vector<double>* V = params_.V ? &params_.V->values : nullptr;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ui = u.values[i];
    const cplx cu = std::conj(ui);
    const double jx = (cu * dx.values[i]).imag();
    const double jy = (cu * dy.values[i]).imag();
    grad2 += std::norm(dx.values[i]) + std::norm(dy.values[i]);
    aj += A.vx[i] * jx + A.vy[i] * jy;
    a2rho += (A.vx[i] * A.vx[i] + A.vy[i] * A.vy[i]) * rho.values[i];
    l4 += rho.values[i] * rho.values[i];
    if (V) pot += (*V)[i] * rho.values[i];
    const cplx wx = cplx(0.0, -1.0) * dx.values[i] + beta * A.vx[i] * ui;
    const cplx wy = cplx(0.0, -1.0) * dy.values[i] + beta * A.vy[i] * ui;
    direct += std::norm(wx) + std::norm(wy);
  }
  e.gradient = grad2 * dA;
  e.current_term = 2.0 * beta * aj * dA;
  e.field_term = beta * beta * a2rho * dA;
  e.potential = pot * dA;
  e.l4 = l4 * dA;
  e.direct_kinetic = direct * dA;
  check_finite(e.gradient, "gradient");
  check_finite(e.current_term, "current");
  check_finite(e.field_term, "field");
  check_finite(e.potential, "potential");
  check_finite(e.direct_kinetic, "kinetic");
  e.kinetic_magnetic = e.gradient + e.current_term + e.field_term;
  e.total = e.kinetic_magnetic + e.potential;
  if (std::abs(e.kinetic_magnetic - e.direct_kinetic) > 1e-8 * (1.0 + std::abs(e.direct_kinetic)))
    throw ModelError("expanded and direct kinetic energies disagree");

  if (with_diagnostics) {
    ScalarField modulus(grid_);
    for (std::size_t i = 0; i < n; ++i) modulus.values[i] = std::abs(u.values[i]);
    const VectorField dm = ops_.grad(modulus);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += dm.vx[i] * dm.vx[i] + dm.vy[i] * dm.vy[i];
    e.diamagnetic = s * dA;
    check_finite(e.diamagnetic, "diamagnetic");
  }

  if (with_gradient) {
    ComplexField wx(grid_), wy(grid_);
    VectorField F(grid_);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ui = u.values[i];
      const cplx cu = std::conj(ui);
      wx.values[i] = cplx(0.0, -1.0) * dx.values[i] + beta * A.vx[i] * ui;
      wy.values[i] = cplx(0.0, -1.0) * dy.values[i] + beta * A.vy[i] * ui;
      F.vx[i] = (cu * dx.values[i]).imag() + beta * A.vx[i] * rho.values[i];
      F.vy[i] = (cu * dy.values[i]).imag() + beta * A.vy[i] * rho.values[i];
    }
    // (-i D)^* w = i D^* w.
    ComplexField G = ops_.grad_adjoint(wx, wy);
    const ScalarField C = beta != 0.0 ? ops_.grad_perp_adjoint(F) : ScalarField(grid_);
    double udg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ui = u.values[i];
      cplx g = cplx(0.0, 1.0) * G.values[i] + beta * (A.vx[i] * wx.values[i] + A.vy[i] * wy.values[i]);
      if (V) g += (*V)[i] * ui;
      g += 2.0 * beta * C.values[i] * ui;
      G.values[i] = g;
      udg += ui.real() * g.real() + ui.imag() * g.imag();
    }
    ev.u_dot_gradient = udg * dA;
    for (const auto& v : G.values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ModelError("non-finite gradient");
    ev.gradient = std::move(G);
  }
  return ev;
}

EnergyBreakdown Model::energy(const ComplexField& u) { return evaluate(u, false, true).energy; }

ComplexField Model::residual(const ComplexField& u, double lambda) {
  Evaluation ev = evaluate(u, true, false);
  for (std::size_t i = 0; i < u.values.size(); ++i) ev.gradient.values[i] -= lambda * u.values[i];
  return std::move(ev.gradient);
}

double Model::multiplier(const ComplexField& u) {
  const double m = mass(u);
  if (std::abs(m - 1.0) > 1e-8) throw ModelError("multiplier requires a unit-mass state");
  const EnergyBreakdown e = evaluate(u, false, false).energy;
  return e.gradient + e.potential + 2.0 * e.current_term + 3.0 * e.field_term;
}

double Model::multiplier_from_energy(const ComplexField& u) {
  const double m = mass(u);
  if (std::abs(m - 1.0) > 1e-8) throw ModelError("multiplier requires a unit-mass state");
  const EnergyBreakdown e = evaluate(u, false, false).energy;
  return e.total + e.current_term + 2.0 * e.field_term;
}

double Model::multiplier_any_mass(const ComplexField& u) {
  const double m = mass(u);
  if (!(m > 0.0)) throw ModelError("multiplier of the zero state is undefined");
  const EnergyBreakdown e = evaluate(u, false, false).energy;
  return (e.gradient + e.potential + 2.0 * e.current_term + 3.0 * e.field_term) / m;
}

EnergyBreakdown energy(const ComplexField& u, const ModelParams& p) {
  Model m(u.grid, p);
  return m.energy(u);
}

ComplexField residual(const ComplexField& u, const ModelParams& p, double lambda) {
  Model m(u.grid, p);
  return m.residual(u, lambda);
}

double multiplier(const ComplexField& u, const ModelParams& p) {
  Model m(u.grid, p);
  return m.multiplier(u);
}

std::vector<Vortex> vortex_census(const ComplexField& u, double threshold) {
  const GridSpec& g = u.grid;
  double umax = 0.0;
  for (const auto& v : u.values) umax = std::max(umax, std::abs(v));
  std::vector<Vortex> out;
  if (umax == 0.0) return out;
  const double cut = threshold * umax;
  auto at = [&](int ix, int iy) { return u.values[g.index(ix, iy)]; };
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int iy = 1; iy + 2 < g.ny; ++iy) {
    for (int ix = 1; ix + 2 < g.nx; ++ix) {
      double mean = 0.0;
      for (int by = -1; by <= 2; ++by)
        for (int bx = -1; bx <= 2; ++bx) mean += std::abs(at(ix + bx, iy + by));
      if (mean / 16.0 < cut) continue;
      const cplx c[4] = {at(ix, iy), at(ix + 1, iy), at(ix + 1, iy + 1), at(ix, iy + 1)};
      double wind = 0.0;
      for (int k = 0; k < 4; ++k) wind += std::arg(c[(k + 1) % 4] * std::conj(c[k]));
      const int w = static_cast<int>(std::lround(wind / two_pi));
      if (w != 0) out.push_back({g.x(ix) + 0.5 * g.hx, g.y(iy) + 0.5 * g.hy, w});
    }
  }
  return out;
}

int total_winding(const std::vector<Vortex>& vs) {
  int s = 0;
  for (const auto& v : vs) s += v.winding;
  return s;
}

}  // namespace afgas
