#pragma once

#include <string>
#include <vector>

#include "afgas/grid.hpp"
#include "afgas/solver.hpp"

namespace afgas {

struct ThermoSample {
  double parameter = 0.0;       // beta (fixed-domain sweep) or L (size sweep)
  double effective_beta = 0.0;  // beta rho L^2, the coupling of the equivalent unit-square problem
  double energy = 0.0;          // E_0 of the solve
  double normalized = 0.0;      // E_0 / (beta rho^2 |Omega|)
  double l4_margin = 0.0;       // kinetic - 2 pi beta int |u|^4
  double cs_margin = 0.0;       // 2 pi beta int |u|^4 - 2 pi beta M^2 / |Omega|
  double l4_bound = 0.0;        // 2 pi int |u|^4 |Omega| / M^2, a lower bound of `normalized`
  bool lower_bound_ok = true;
  bool resolved = true;
  bool converged = false;
  int iterations = 0;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

struct ThermoEstimate {
  std::vector<ThermoSample> samples;
  /// Fit e(x) = c0 + c1 x with x = effective_beta^{-1/2}; e11 = c0.
  std::string fit_model = "c0 + c1/sqrt(beta)";
  double e11 = 0.0;
  double slope = 0.0;
  double fit_residual = 0.0;  // rms misfit of the trusted samples
  /// Reported error: fit standard error of c0 plus the extrapolation shift
  /// |c0 - top sample|, since the fit form itself is unproven.
  double e11_error = 0.0;
  /// Smallest per-sample magnetic L4 bound l4_bound over trusted samples;
  /// at least 2 pi by Cauchy-Schwarz.
  double lower_envelope = 0.0;
  double top_octave_variation = 0.0;  // relative change over the last doubling of effective beta
  bool partial = false;
  std::vector<std::string> failures;
  struct Gap {
    double L = 0.0;
    double dirichlet = 0.0;
    double neumann = 0.0;
    double gap = 0.0;  // (E_0 - E) / E_0
  };
  std::vector<Gap> neumann_gap;
};

/// Resolution guard: the vortex scale (beta rho)^{-1/2} must exceed 4 spacings.
bool resolves_vortices(double beta, double rho, const GridSpec& g);

/// E_0(Q, beta, 1) / beta over increasing betas on a Dirichlet unit square;
/// the sweep stops at the first beta failing the resolution guard.
ThermoEstimate estimate_e11(const std::vector<double>& betas, const GridSpec& g, const SolverConfig& cfg);

/// E_0(LQ, beta, rho L^2) / (beta rho^2 L^2) over increasing L, with n points per side.
ThermoEstimate estimate_e11_sizes(const std::vector<double>& Ls, int n, const SolverConfig& cfg,
                                  double beta = 1.0, double rho = 1.0);

struct ScalingConsistency {
  double beta = 0.0;
  double rho = 0.0;
  double e_beta_rho = 0.0;  // E_0(LQ, beta, rho L^2) / L^2
  double e_unit = 0.0;      // E_0(L'Q, 1, L'^2) / L'^2, L' = L sqrt(beta rho)
  double ratio = 0.0;       // e_beta_rho / e_unit, to be compared with beta rho^2
  double expected = 0.0;
  double relative_deviation = 0.0;
};

/// Compares e(beta, rho) on the square grid g with e(1, 1) on the size
/// matched through the scaling laws (same effective coupling, same n).
ScalingConsistency scaling_consistency(double beta, double rho, const GridSpec& g, const SolverConfig& cfg);

/// Points per axis for [0, L]^2 at density rho: at least points_per_length
/// per unit length, and enough that |beta| rho L h <= 1. The self-generated
/// potential grows linearly away from the centre of mass, so the phase of a
/// minimiser turns by about 2.2 |beta| rho L h per cell near the corners and
/// aliases once that passes pi.
int homogeneous_points(double L, double beta, double rho, double points_per_length);

/// Paired Dirichlet / Neumann solves on [0, L]^2 with mass rho L^2 on
/// homogeneous_points(L, beta, rho, points_per_length) points per axis. The Neumann solve is also
/// started from the Dirichlet minimiser and the lower energy is kept.
std::vector<ThermoEstimate::Gap> neumann_dirichlet_gap(const std::vector<double>& Ls, double beta, double rho,
                                                       const SolverConfig& cfg, double points_per_length = 8.0);

/// Relative change of E_0 / beta when the grid is refined by 2.
double refinement_change(double beta, const GridSpec& g, const SolverConfig& cfg);

}  // namespace afgas
