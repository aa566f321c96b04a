#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace afgas {

using cplx = std::complex<double>;

// Numeric values are part of the .afd dump format; do not reorder.
enum class Boundary : std::uint8_t { dirichlet = 0, neumann = 1, plane = 2 };

std::string_view to_string(Boundary bc);
Boundary boundary_from_string(std::string_view name);

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cell-centred rectangular grid. Point (ix, iy) sits at
/// (x0 + (ix + 1/2) hx, y0 + (iy + 1/2) hy); storage is row-major,
/// index = iy * nx + ix.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  Boundary bc = Boundary::plane;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  [[nodiscard]] std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  [[nodiscard]] double x(int ix) const { return x0 + (ix + 0.5) * hx; }
  [[nodiscard]] double y(int iy) const { return y0 + (iy + 0.5) * hy; }
  [[nodiscard]] double extent_x() const { return nx * hx; }
  [[nodiscard]] double extent_y() const { return ny * hy; }
  [[nodiscard]] double cell_area() const { return hx * hy; }
  [[nodiscard]] double area() const { return extent_x() * extent_y(); }

  /// Same point counts and boundary tag, every length multiplied by mu.
  [[nodiscard]] GridSpec dilated(double mu) const;
  /// Same physical box with the point counts multiplied by factor.
  [[nodiscard]] GridSpec refined(int factor) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws GridError if the invariants (even counts >= 8, positive spacing) fail.
void validate(const GridSpec& g);

/// [0, L]^2 with n x n cells; bc must be dirichlet or neumann.
GridSpec make_square(double L, int n, Boundary bc);
/// [-half_width, half_width]^2 with n x n cells and plane boundary tag.
GridSpec make_plane_box(double half_width, int n);

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  ScalarField(const GridSpec& g, std::vector<double> v);

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

struct ComplexField {
  GridSpec grid;
  std::vector<cplx> values;

  ComplexField() = default;
  explicit ComplexField(const GridSpec& g, cplx fill = 0.0) : grid(g), values(g.size(), fill) {}
  ComplexField(const GridSpec& g, std::vector<cplx> v);

  cplx& operator[](std::size_t i) { return values[i]; }
  cplx operator[](std::size_t i) const { return values[i]; }
};

struct VectorField {
  GridSpec grid;
  std::vector<double> vx;
  std::vector<double> vy;

  VectorField() = default;
  explicit VectorField(const GridSpec& g) : grid(g), vx(g.size(), 0.0), vy(g.size(), 0.0) {}
};

// Midpoint quadrature over the grid cells.
double integrate(const ScalarField& f);
double mass(const ComplexField& u);
double l2_norm(const ComplexField& u);
/// Re <a, b> = Re sum conj(a) b dA.
double inner_re(const ComplexField& a, const ComplexField& b);
cplx inner(const ComplexField& a, const ComplexField& b);

/// Fraction of the total |u|^2 sitting in the outer `ring` cells of the box.
double boundary_mass_fraction(const ScalarField& density, int ring = 4);
inline constexpr double kBoundaryMassWarning = 1e-8;

using ScalarFn = std::function<double(double, double)>;
using ComplexFn = std::function<cplx(double, double)>;
using VectorFn = std::function<std::array<double, 2>(double, double)>;

// Pointwise evaluation at cell centres. A non-finite value throws GridError
// naming the offending point.
ScalarField sample(const ScalarFn& f, const GridSpec& g);
ComplexField sample_complex(const ComplexFn& f, const GridSpec& g);
VectorField sample_vector(const VectorFn& f, const GridSpec& g);

void require_same_grid(const GridSpec& a, const GridSpec& b, std::string_view what);

}  // namespace afgas
