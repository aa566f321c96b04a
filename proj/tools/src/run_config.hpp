#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afgas/grid.hpp"
#include "afgas/lda.hpp"
#include "afgas/solver.hpp"
#include "afgas/tf.hpp"
#include "json.hpp"

namespace afgas::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSection {
  Boundary bc = Boundary::dirichlet;
  double L = 1.0;           // squares: side length
  double half_width = 6.0;  // plane: box [-hw, hw]^2
  int n = 64;
  bool operator==(const GridSection&) const = default;
};

struct TrapSection {
  std::string kind = "radial";  // radial | anisotropic
  double s = 2.0;
  double c = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  bool operator==(const TrapSection&) const = default;
};

struct SolverSection {
  int max_iters = 4000;
  std::optional<double> grad_tol;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_halvings = 60;
  double step0 = 1.0;
  bool precondition = true;
  std::string method = "lbfgs";
  int lbfgs_memory = 8;
  bool continuation = true;
  double continuation_threshold = 8.0;
  std::vector<double> schedule;
  int restarts = 3;
  std::string initializer = "gaussian";
  std::string initial_state;  // .afd path for initializer "file"
  bool check_bounds = true;
  bool operator==(const SolverSection&) const = default;
};

struct ThermoSection {
  std::vector<double> betas = {16.0, 32.0, 64.0};
  int n = 256;
  std::vector<double> sizes = {4.0, 5.656854249492381, 8.0};
  int size_n = 256;
  std::vector<double> gap_sizes = {4.0, 8.0, 16.0};
  double gap_beta = 1.0;
  double gap_rho = 1.0;
  double gap_points_per_length = 8.0;
  bool operator==(const ThermoSection&) const = default;
};

struct TfSection {
  std::vector<double> betas = {1.0, 16.0};
  double e11 = 6.283185307179586;
  int n = 0;  // > 0: also write the sampled density at the largest beta
  bool operator==(const TfSection&) const = default;
};

struct LdaSection {
  std::vector<double> betas = {8.0, 32.0, 128.0};
  double e11 = 6.283185307179586;
  double support_factor = 2.0;
  double linear_lengths = 5.0;
  double points_per_vortex = 5.0;
  int min_n = 64;
  int max_n = 1024;
  int fixed_n = 0;
  bool audit = false;
  bool operator==(const LdaSection&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";
  double beta = 1.0;
  double mass = 1.0;
  GridSection grid;
  TrapSection trap;
  SolverSection solver;
  ThermoSection thermo;
  TfSection tf;
  LdaSection lda;
  bool operator==(const RunConfig&) const = default;
};

/// Strict parse: unknown keys and ill-typed values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& c);

GridSpec make_grid(const RunConfig& c);
TrapSpec make_trap(const RunConfig& c);
/// Reads the initial state file when the initializer asks for one.
SolverConfig make_solver_config(const RunConfig& c);
GridPolicy make_grid_policy(const RunConfig& c);

}  // namespace afgas::cli
