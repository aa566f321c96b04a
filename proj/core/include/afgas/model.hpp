#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "afgas/grid.hpp"
#include "afgas/spectral_ops.hpp"

namespace afgas {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double beta = 0.0;
  std::optional<ScalarField> V;  // trap, present iff the grid is a plane box
};

struct EnergyBreakdown {
  double kinetic_magnetic = 0.0;  // int |(-i grad + beta A[|u|^2]) u|^2
  double potential = 0.0;         // int V |u|^2
  double total = 0.0;
  double l4 = 0.0;                // int |u|^4
  double diamagnetic = 0.0;       // int |grad |u||^2
  // Pieces of the expanded kinetic term.
  double gradient = 0.0;      // int |grad u|^2
  double current_term = 0.0;  // 2 beta int A . J[u]
  double field_term = 0.0;    // beta^2 int |A|^2 |u|^2
  double direct_kinetic = 0.0;  // kinetic term evaluated in the defining form
  bool support_warning = false;
};

ScalarField density(const ComplexField& u);

/// J[u] = (i/2)(u grad conj(u) - conj(u) grad u) = Im(conj(u) grad u).
VectorField current(SpectralOps& ops, const ComplexField& u);
VectorField current(const ComplexField& u);

/// A[rho] = grad-perp w0 * rho (free space), so that curl A = 2 pi rho.
VectorField vector_potential(SpectralOps& ops, const ScalarField& rho, bool* support_warning = nullptr);
VectorField vector_potential(const ScalarField& rho, bool* support_warning = nullptr);

/// Evaluation context for the average-field functional on one grid. A
/// negative beta is evaluated through the conjugation symmetry
/// E_beta[u] = E_{-beta}[conj u].
class Model {
 public:
  Model(const GridSpec& g, ModelParams p);

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] SpectralOps& ops() { return ops_; }

  struct Evaluation {
    EnergyBreakdown energy;
    /// Half the unconstrained L2 gradient: dE = 2 Re <G, du>.
    ComplexField gradient;
    /// Re <u, G>; equals the multiplier times the mass at a critical point.
    double u_dot_gradient = 0.0;
  };

  /// `with_diagnostics` adds the diamagnetic term; `with_gradient` the
  /// (expensive) nonlocal gradient.
  Evaluation evaluate(const ComplexField& u, bool with_gradient, bool with_diagnostics = true);

  EnergyBreakdown energy(const ComplexField& u);

  /// Left side minus right side of the variational equation:
  /// [(-i grad + beta A)^2 + V - 2 beta grad-perp w0 .* (beta A |u|^2 + J)] u - lambda u.
  ComplexField residual(const ComplexField& u, double lambda);

  /// lambda = int (|grad u|^2 + V|u|^2) + 4 beta int A.J + 3 beta^2 int |A|^2 |u|^2;
  /// requires unit mass.
  double multiplier(const ComplexField& u);
  /// Same quantity written as E[u] + int (2 beta A.J + 2 beta^2 |A|^2 |u|^2).
  double multiplier_from_energy(const ComplexField& u);

  /// Same value without the unit-mass precondition (divides by the mass).
  double multiplier_any_mass(const ComplexField& u);

 private:
  Evaluation evaluate_nonnegative(const ComplexField& u, bool with_gradient, bool with_diagnostics);

  GridSpec grid_;
  ModelParams params_;
  SpectralOps ops_;
};

// One-shot wrappers constructing a temporary evaluation context.
EnergyBreakdown energy(const ComplexField& u, const ModelParams& p);
ComplexField residual(const ComplexField& u, const ModelParams& p, double lambda);
double multiplier(const ComplexField& u, const ModelParams& p);

struct Vortex {
  double x = 0.0;
  double y = 0.0;
  int winding = 0;
};

inline constexpr double kDefaultVortexThreshold = 0.05;

/// Phase winding around each grid plaquette (sum of principal-value phase
/// differences / 2 pi). Plaquettes are only examined where the mean modulus
/// over the surrounding 4x4 block of points exceeds threshold * max|u|.
std::vector<Vortex> vortex_census(const ComplexField& u, double threshold = kDefaultVortexThreshold);
int total_winding(const std::vector<Vortex>& vs);

}  // namespace afgas
