#pragma once

#include <stdexcept>
#include <string>

#include "afgas/grid.hpp"

namespace afgas {

class TfError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Homogeneous trap of degree s: radial c |x|^s, or anisotropic
/// (c1 x^2 + c2 y^2)^{s/2} (the quadratic trap c1 x^2 + c2 y^2 for s = 2).
struct TrapSpec {
  enum class Kind { radial, anisotropic };
  Kind kind = Kind::radial;
  double s = 2.0;
  double c = 1.0;
  double c1 = 1.0, c2 = 1.0;

  static TrapSpec radial(double c, double s);
  static TrapSpec anisotropic(double c1, double c2, double s = 2.0);

  [[nodiscard]] double operator()(double x, double y) const;
  /// V on the unit circle: V(r cos t, r sin t) = r^s angular(t).
  [[nodiscard]] double angular(double theta) const;
  void validate() const;
};

ScalarField sample_trap(const TrapSpec& V, const GridSpec& g);

struct TfSolution {
  TrapSpec trap;
  double e11 = 0.0;
  double beta = 0.0;
  double lambda = 0.0;          // chemical potential
  double energy = 0.0;          // E_TF
  double l2sq = 0.0;            // int rho^2
  double support_radius = 0.0;  // max distance of the support boundary from 0
  double rho_max = 0.0;         // lambda / (2 beta e11)

  /// (lambda - V)_+ / (2 beta e11).
  [[nodiscard]] double density(double x, double y) const;
  /// Distance from 0 to the support boundary in direction theta.
  [[nodiscard]] double support_radius_at(double theta) const;
  [[nodiscard]] ScalarField sample(const GridSpec& g) const;
};

/// Unit-mass minimiser of int (beta e11 rho^2 + V rho): lambda by a root
/// find on the quadrature mass; E by quadrature, checked against
/// lambda = E + beta e11 int rho^2.
TfSolution tf_solve(const TrapSpec& V, double beta, double e11);

/// Exact rescaling of a solution to another beta.
TfSolution tf_scale(const TfSolution& sol, double beta);

struct TfDistance {
  double value = 0.0;          // max of the two parts below
  double dictionary = 0.0;     // sup over the test-function dictionary
  double mollified_l1 = 0.0;   // eps * || G_eps * (rho_rescaled - rho_TF) ||_{L1(B_R)}
  std::string argmax;          // dictionary element attaining the sup
  double R = 0.0;
};

/// Surrogate for the dual-Lipschitz distance on B_R between the rescaled
/// density b^2 rho(b x), b = beta^{1/(s+2)}, and the beta = 1 TF profile.
/// R <= 0 selects 1.25 times the beta = 1 support radius.
TfDistance tf_distance(const ScalarField& rho, const TfSolution& sol, double R = 0.0);

}  // namespace afgas
