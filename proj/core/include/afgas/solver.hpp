#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afgas/grid.hpp"
#include "afgas/model.hpp"

namespace afgas {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Initializer { gaussian, trial_lattice, vortex_imprint, file };

std::string_view to_string(Initializer init);
Initializer initializer_from_string(std::string_view name);

/// Search directions: (preconditioned) projected gradient, Polak-Ribiere
/// conjugate gradient, or limited-memory BFGS seeded with the
/// preconditioner. All use the same backtracking line search and retraction.
enum class Method { gradient, cg, lbfgs };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct SolverConfig {
  int max_iters = 4000;
  /// Projected-residual L2 tolerance; defaults to 1e-6 sqrt(M).
  std::optional<double> grad_tol;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_halvings = 60;
  double step0 = 1.0;
  /// Sobolev preconditioner (shift - Laplacian)^{-1} on the residual.
  bool precondition = true;
  Method method = Method::lbfgs;
  int lbfgs_memory = 8;
  /// beta-continuation: solve at beta / 2^k first while the scale-invariant
  /// coupling |beta| M exceeds the threshold. An empty schedule means the
  /// geometric default.
  bool continuation = true;
  double continuation_threshold = 8.0;
  std::vector<double> schedule;
  /// Extra seeded restarts (in addition to the primary run) when |beta| M
  /// exceeds the continuation threshold.
  int restarts = 3;
  std::uint64_t seed = 1;
  Initializer initializer = Initializer::gaussian;
  std::optional<ComplexField> initial_state;  // for Initializer::file
  int threads = 1;
  /// Record kinetic / diamagnetic / L4 on every accepted iterate and check
  /// the magnetic inequalities.
  bool check_bounds = true;
};

void validate(const SolverConfig& cfg);

struct IterateRecord {
  int iteration = 0;
  double beta = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  double step = 0.0;
  double kinetic = 0.0;
  double diamagnetic = 0.0;
  double l4 = 0.0;
};

struct BoundStatus {
  int iterates_checked = 0;
  int diamagnetic_violations = 0;
  int l4_violations = 0;  // dirichlet only
  double worst_diamagnetic_margin = 0.0;  // min of kinetic - diamagnetic
  double worst_l4_margin = 0.0;           // min of kinetic - 2 pi beta l4
};

struct SolveReport {
  ComplexField state;
  EnergyBreakdown breakdown;
  double lambda = 0.0;
  int iterations = 0;  // all stages of the reported branch
  double projected_residual_norm = 0.0;
  double grad_tol = 0.0;
  bool converged = false;
  std::vector<IterateRecord> history;  // reported branch, final stage last
  std::vector<std::string> warnings;
  BoundStatus bounds;
  int branch = 0;                      // 0 = primary initializer, k = restart k
  std::vector<double> branch_energies;  // final energy per branch
  double mass_error = 0.0;              // |mass(state) - M| / M
};

/// Minimises the average-field energy over {mass(u) = M} on the grid.
SolveReport minimize(const GridSpec& g, const ModelParams& p, double M, const SolverConfig& cfg);

/// Descent at fixed beta from a given state (no continuation or restarts).
SolveReport descend(Model& model, ComplexField u0, double M, const SolverConfig& cfg);

/// Initial state for branch `branch` (0 = configured initializer, >0 restarts).
ComplexField initial_state(const GridSpec& g, const ModelParams& p, double M, const SolverConfig& cfg,
                           int branch = 0);

/// u_{lambda,mu}(x) = lambda u(x / mu) on the mu-dilated grid.
ComplexField scaling_transform(const ComplexField& u, double lambda, double mu);

/// beta values visited by continuation for mass M, ending with beta.
std::vector<double> continuation_schedule(double beta, const SolverConfig& cfg, double M = 1.0);

}  // namespace afgas
