#include "afgas/grid.hpp"

#include <algorithm>
#include <sstream>

namespace afgas {

std::string_view to_string(Boundary bc) {
  switch (bc) {
    case Boundary::dirichlet: return "dirichlet";
    case Boundary::neumann: return "neumann";
    case Boundary::plane: return "plane";
  }
  return "unknown";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "dirichlet") return Boundary::dirichlet;
  if (name == "neumann") return Boundary::neumann;
  if (name == "plane") return Boundary::plane;
  throw GridError("unknown boundary tag '" + std::string(name) + "'");
}

GridSpec GridSpec::dilated(double mu) const {
  GridSpec g = *this;
  g.x0 *= mu;
  g.y0 *= mu;
  g.hx *= mu;
  g.hy *= mu;
  return g;
}

GridSpec GridSpec::refined(int factor) const {
  GridSpec g = *this;
  g.nx *= factor;
  g.ny *= factor;
  g.hx /= factor;
  g.hy /= factor;
  return g;
}

void validate(const GridSpec& g) {
  if (g.nx < 8 || g.ny < 8) throw GridError("grid needs at least 8 points per axis");
  if (g.nx % 2 != 0 || g.ny % 2 != 0) throw GridError("grid point counts must be even");
  if (!(g.hx > 0.0) || !(g.hy > 0.0) || !std::isfinite(g.hx) || !std::isfinite(g.hy))
    throw GridError("grid spacing must be positive and finite");
  if (!std::isfinite(g.x0) || !std::isfinite(g.y0)) throw GridError("grid origin must be finite");
}

GridSpec make_square(double L, int n, Boundary bc) {
  if (!(L > 0.0)) throw GridError("square side must be positive");
  if (bc == Boundary::plane) throw GridError("make_square builds dirichlet/neumann domains only");
  GridSpec g{n, n, 0.0, 0.0, L / n, L / n, bc};
  validate(g);
  return g;
}

GridSpec make_plane_box(double half_width, int n) {
  if (!(half_width > 0.0)) throw GridError("box half width must be positive");
  GridSpec g{n, n, -half_width, -half_width, 2.0 * half_width / n, 2.0 * half_width / n,
             Boundary::plane};
  validate(g);
  return g;
}

ScalarField::ScalarField(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw GridError("scalar field size does not match grid");
}

ComplexField::ComplexField(const GridSpec& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw GridError("complex field size does not match grid");
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_area();
}

double mass(const ComplexField& u) {
  double s = 0.0;
  for (const cplx& v : u.values) s += std::norm(v);
  return s * u.grid.cell_area();
}

double l2_norm(const ComplexField& u) { return std::sqrt(mass(u)); }

double inner_re(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    s += a.values[i].real() * b.values[i].real() + a.values[i].imag() * b.values[i].imag();
  return s * a.grid.cell_area();
}

cplx inner(const ComplexField& a, const ComplexField& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
  return s * a.grid.cell_area();
}

double boundary_mass_fraction(const ScalarField& density, int ring) {
  const GridSpec& g = density.grid;
  double edge = 0.0;
  double total = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = std::abs(density.values[g.index(ix, iy)]);
      total += v;
      if (ix < ring || iy < ring || ix >= g.nx - ring || iy >= g.ny - ring) edge += v;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

namespace {

[[noreturn]] void throw_non_finite(const GridSpec& g, int ix, int iy) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite sample at grid point (" << ix << ", " << iy << ") = (" << g.x(ix) << ", "
     << g.y(iy) << ")";
  throw GridError(os.str());
}

}  // namespace

ScalarField sample(const ScalarFn& f, const GridSpec& g) {
  ScalarField out(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = f(g.x(ix), g.y(iy));
      if (!std::isfinite(v)) throw_non_finite(g, ix, iy);
      out.values[g.index(ix, iy)] = v;
    }
  return out;
}

ComplexField sample_complex(const ComplexFn& f, const GridSpec& g) {
  ComplexField out(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const cplx v = f(g.x(ix), g.y(iy));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw_non_finite(g, ix, iy);
      out.values[g.index(ix, iy)] = v;
    }
  return out;
}

VectorField sample_vector(const VectorFn& f, const GridSpec& g) {
  VectorField out(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const auto v = f(g.x(ix), g.y(iy));
      if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw_non_finite(g, ix, iy);
      out.vx[g.index(ix, iy)] = v[0];
      out.vy[g.index(ix, iy)] = v[1];
    }
  return out;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, std::string_view what) {
  if (!(a == b)) throw GridError(std::string(what) + ": fields live on different grids");
}

}  // namespace afgas
