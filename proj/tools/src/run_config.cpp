#include "run_config.hpp"

#include <fstream>
#include <set>

#include "afgas/field_io.hpp"

namespace afgas::cli {

using nlohmann::json;

namespace {

// Reads members of one JSON object, remembering which keys were used so
// that leftovers can be reported.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    out = convert<T>(*it, key);
  }

  void get_optional(const char* key, std::optional<double>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) out.reset();
    else out = convert<double>(*it, key);
  }

  const json* section(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where_);
  }

 private:
  template <class T>
  T convert(const json& v, const char* key) const {
    const std::string name = where_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(name + " must be a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(name + " must be a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(name + " must be a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(name + " must be an integer");
      const auto x = v.get<long long>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError(name + " is out of range");
      return static_cast<int>(x);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError(name + " must be a non-negative integer");
      return v.get<std::uint64_t>();
    } else {
      static_assert(std::is_same_v<T, std::vector<double>>);
      if (!v.is_array()) throw ConfigError(name + " must be an array of numbers");
      std::vector<double> out;
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(name + " must be an array of numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader r(j, "config");
  r.get("seed", c.seed);
  r.get("threads", c.threads);
  r.get("out", c.out);
  r.get("beta", c.beta);
  r.get("mass", c.mass);
  if (const json* s = r.section("grid")) {
    Reader g(*s, "grid");
    std::string bc = std::string(to_string(c.grid.bc));
    g.get("bc", bc);
    try {
      c.grid.bc = boundary_from_string(bc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid.bc: ") + e.what());
    }
    g.get("L", c.grid.L);
    g.get("half_width", c.grid.half_width);
    g.get("n", c.grid.n);
    g.finish();
  }
  if (const json* s = r.section("trap")) {
    Reader t(*s, "trap");
    t.get("kind", c.trap.kind);
    t.get("s", c.trap.s);
    t.get("c", c.trap.c);
    t.get("c1", c.trap.c1);
    t.get("c2", c.trap.c2);
    t.finish();
  }
  if (const json* s = r.section("solver")) {
    Reader v(*s, "solver");
    SolverSection& o = c.solver;
    v.get("max_iters", o.max_iters);
    v.get_optional("grad_tol", o.grad_tol);
    v.get("shrink", o.shrink);
    v.get("sufficient_decrease", o.sufficient_decrease);
    v.get("max_halvings", o.max_halvings);
    v.get("step0", o.step0);
    v.get("precondition", o.precondition);
    v.get("method", o.method);
    v.get("lbfgs_memory", o.lbfgs_memory);
    v.get("continuation", o.continuation);
    v.get("continuation_threshold", o.continuation_threshold);
    v.get("schedule", o.schedule);
    v.get("restarts", o.restarts);
    v.get("initializer", o.initializer);
    v.get("initial_state", o.initial_state);
    v.get("check_bounds", o.check_bounds);
    v.finish();
  }
  if (const json* s = r.section("thermo")) {
    Reader t(*s, "thermo");
    ThermoSection& o = c.thermo;
    t.get("betas", o.betas);
    t.get("n", o.n);
    t.get("sizes", o.sizes);
    t.get("size_n", o.size_n);
    t.get("gap_sizes", o.gap_sizes);
    t.get("gap_beta", o.gap_beta);
    t.get("gap_rho", o.gap_rho);
    t.get("gap_points_per_length", o.gap_points_per_length);
    t.finish();
  }
  if (const json* s = r.section("tf")) {
    Reader t(*s, "tf");
    t.get("betas", c.tf.betas);
    t.get("e11", c.tf.e11);
    t.get("n", c.tf.n);
    t.finish();
  }
  if (const json* s = r.section("lda")) {
    Reader t(*s, "lda");
    LdaSection& o = c.lda;
    t.get("betas", o.betas);
    t.get("e11", o.e11);
    t.get("support_factor", o.support_factor);
    t.get("linear_lengths", o.linear_lengths);
    t.get("points_per_vortex", o.points_per_vortex);
    t.get("min_n", o.min_n);
    t.get("max_n", o.max_n);
    t.get("fixed_n", o.fixed_n);
    t.get("audit", o.audit);
    t.finish();
  }
  r.finish();
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (!(c.mass > 0.0)) throw ConfigError("mass must be positive");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["beta"] = c.beta;
  j["mass"] = c.mass;
  j["grid"] = {{"bc", std::string(to_string(c.grid.bc))}, {"L", c.grid.L}, {"half_width", c.grid.half_width},
               {"n", c.grid.n}};
  j["trap"] = {{"kind", c.trap.kind}, {"s", c.trap.s}, {"c", c.trap.c}, {"c1", c.trap.c1}, {"c2", c.trap.c2}};
  const SolverSection& s = c.solver;
  j["solver"] = {{"max_iters", s.max_iters},
                 {"grad_tol", s.grad_tol ? json(*s.grad_tol) : json(nullptr)},
                 {"shrink", s.shrink},
                 {"sufficient_decrease", s.sufficient_decrease},
                 {"max_halvings", s.max_halvings},
                 {"step0", s.step0},
                 {"precondition", s.precondition},
                 {"method", s.method},
                 {"lbfgs_memory", s.lbfgs_memory},
                 {"continuation", s.continuation},
                 {"continuation_threshold", s.continuation_threshold},
                 {"schedule", s.schedule},
                 {"restarts", s.restarts},
                 {"initializer", s.initializer},
                 {"initial_state", s.initial_state},
                 {"check_bounds", s.check_bounds}};
  const ThermoSection& t = c.thermo;
  j["thermo"] = {{"betas", t.betas},
                 {"n", t.n},
                 {"sizes", t.sizes},
                 {"size_n", t.size_n},
                 {"gap_sizes", t.gap_sizes},
                 {"gap_beta", t.gap_beta},
                 {"gap_rho", t.gap_rho},
                 {"gap_points_per_length", t.gap_points_per_length}};
  j["tf"] = {{"betas", c.tf.betas}, {"e11", c.tf.e11}, {"n", c.tf.n}};
  const LdaSection& l = c.lda;
  j["lda"] = {{"betas", l.betas},
              {"e11", l.e11},
              {"support_factor", l.support_factor},
              {"linear_lengths", l.linear_lengths},
              {"points_per_vortex", l.points_per_vortex},
              {"min_n", l.min_n},
              {"max_n", l.max_n},
              {"fixed_n", l.fixed_n},
              {"audit", l.audit}};
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const RunConfig& c) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << config_to_json(c).dump(2) << '\n';
}

GridSpec make_grid(const RunConfig& c) {
  try {
    if (c.grid.bc == Boundary::plane) return make_plane_box(c.grid.half_width, c.grid.n);
    return make_square(c.grid.L, c.grid.n, c.grid.bc);
  } catch (const GridError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

TrapSpec make_trap(const RunConfig& c) {
  try {
    if (c.trap.kind == "radial") return TrapSpec::radial(c.trap.c, c.trap.s);
    if (c.trap.kind == "anisotropic") return TrapSpec::anisotropic(c.trap.c1, c.trap.c2, c.trap.s);
  } catch (const TfError& e) {
    throw ConfigError(std::string("trap: ") + e.what());
  }
  throw ConfigError("trap.kind must be 'radial' or 'anisotropic'");
}

SolverConfig make_solver_config(const RunConfig& c) {
  const SolverSection& s = c.solver;
  SolverConfig o;
  try {
    o.max_iters = s.max_iters;
    o.grad_tol = s.grad_tol;
    o.shrink = s.shrink;
    o.sufficient_decrease = s.sufficient_decrease;
    o.max_halvings = s.max_halvings;
    o.step0 = s.step0;
    o.precondition = s.precondition;
    o.method = method_from_string(s.method);
    o.lbfgs_memory = s.lbfgs_memory;
    o.continuation = s.continuation;
    o.continuation_threshold = s.continuation_threshold;
    o.schedule = s.schedule;
    o.restarts = s.restarts;
    o.seed = c.seed;
    o.initializer = initializer_from_string(s.initializer);
    o.threads = c.threads;
    o.check_bounds = s.check_bounds;
    if (o.initializer == Initializer::file) {
      if (s.initial_state.empty()) throw ConfigError("solver.initial_state is required for initializer 'file'");
      o.initial_state = read_afd_complex(s.initial_state);
    }
    validate(o);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  return o;
}

GridPolicy make_grid_policy(const RunConfig& c) {
  GridPolicy p;
  p.support_factor = c.lda.support_factor;
  p.linear_lengths = c.lda.linear_lengths;
  p.points_per_vortex = c.lda.points_per_vortex;
  p.min_n = c.lda.min_n;
  p.max_n = c.lda.max_n;
  p.fixed_n = c.lda.fixed_n;
  return p;
}

}  // namespace afgas::cli
