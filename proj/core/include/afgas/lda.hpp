#pragma once

#include <string>
#include <vector>

#include "afgas/grid.hpp"
#include "afgas/solver.hpp"
#include "afgas/tf.hpp"

namespace afgas {

/// Box and resolution for a trapped solve at a given beta.
struct GridPolicy {
  double support_factor = 2.0;     // box half-width / TF support radius
  /// Floor on the half-width in units of the trap length c^{-1/(s+2)}: at
  /// small beta the density is close to the linear ground state, which is
  /// wider than the TF profile.
  double linear_lengths = 5.0;
  double points_per_vortex = 5.0;  // target grid points per vortex scale
  int min_n = 64;
  int max_n = 1024;
  int fixed_n = 0;                 // > 0 overrides the resolution target
};

struct LdaRecord {
  double beta = 0.0;
  GridSpec grid;
  double energy_af = 0.0;        // best over restarts
  double lambda_af = 0.0;
  double energy_tf = 0.0;        // measured e11
  double energy_tf_2pi = 0.0;    // e11 = 2 pi
  double ratio = 0.0;            // energy_af / energy_tf
  double ratio_2pi = 0.0;
  double tf_distance = 0.0;      // surrogate metric, measured-e11 profile
  std::string distance_argmax;
  int vortex_count = 0;
  int winding = 0;
  double vortex_scale = 0.0;       // beta^{-s/(2(s+2))}
  double resolution_margin = 0.0;  // vortex_scale / h
  bool under_resolved = false;
  double boundary_mass = 0.0;
  bool converged = false;
  int iterations = 0;
  double seconds = 0.0;
  ComplexField state;
  std::vector<std::string> warnings;
};

struct SweepResult {
  TrapSpec trap;
  double e11 = 0.0;  // coupling used for energy_tf
  std::vector<LdaRecord> records;
  /// d log E_af / d log beta between the last two records.
  double top_slope = 0.0;
};

inline constexpr double kMinResolutionMargin = 4.0;

/// Grid for a trapped solve: half-width support_factor * R_TF(beta) (the
/// larger of the two couplings, floored by the linear length) and n from
/// the vortex scale.
GridSpec lda_grid(const TrapSpec& trap, double beta, double e11, const GridPolicy& policy);

/// Unit-mass plane solves in the trap for each beta in increasing order.
SweepResult lda_sweep(const TrapSpec& trap, const std::vector<double>& betas, double e11, const GridPolicy& policy,
                      const SolverConfig& cfg);

struct ResolutionAudit {
  double beta = 0.0;
  double coarse_energy = 0.0;
  double fine_energy = 0.0;
  double relative_change = 0.0;
  bool passed = false;  // change below 1%
  bool under_resolved = false;
};

/// Re-solves a record on the same box with twice the points per axis.
ResolutionAudit resolution_audit(const LdaRecord& record, const TrapSpec& trap, const SolverConfig& cfg);

}  // namespace afgas
