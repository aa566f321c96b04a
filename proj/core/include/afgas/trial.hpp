#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "afgas/grid.hpp"
#include "afgas/model.hpp"

namespace afgas {

class TrialError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Point = std::array<double, 2>;

/// Disks B(center, bump_radius) each carrying mass omega with the radial
/// profile c (1 - r^2/R^2)^p. The profile vanishes to order p at the rim.
struct BumpLattice {
  std::vector<Point> centers;
  double bump_radius = 1.0;
  double omega = 1.0;
  int profile_power = 8;
};

inline constexpr int kDefaultProfilePower = 8;

/// Continuum profile with unit L2 norm over the plane.
double bump_profile(double r, double radius, int power);

/// Throws TrialError when disks overlap, leave the domain (or, for plane
/// grids, the box) or are under-resolved.
void validate_lattice(const BumpLattice& lat, const GridSpec& g);

/// Square lattice of m x m disks filling a square grid; radius = fill * spacing / 2.
BumpLattice square_packing(const GridSpec& g, int m, double total_mass, double fill = 0.98,
                           int power = kDefaultProfilePower);

/// One bump u_j = sqrt(omega) f(x - x_j), discretely normalised to omega.
ComplexField single_bump(const BumpLattice& lat, std::size_t j, const GridSpec& g);

/// sum_j u_j exp(-i beta omega sum_{k != j} arg(x - x_k)).
ComplexField build_trial(const BumpLattice& lat, double beta, const GridSpec& g);

/// max over the disk of bump j of |beta sum_{k!=j} A[|u_k|^2] - beta omega sum_{k!=j} grad arg(x - x_k)|,
/// relative to max |beta omega sum grad arg| on that disk.
double gauge_cancellation_error(const BumpLattice& lat, double beta, const GridSpec& g, std::size_t j);

struct Certificate {
  double energy = 0.0;
  ComplexField state;
  BumpLattice lattice;
  EnergyBreakdown breakdown;
  /// (bump count per side, energy) for every packing tried.
  std::vector<std::pair<int, double>> candidates;
};

/// Energy of the best square packing among a few lattice spacings. The
/// returned state lies in the discrete admissible set (mass M, projected).
Certificate upper_bound_certificate(const GridSpec& g, double beta, double M);

}  // namespace afgas
