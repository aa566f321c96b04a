#include "afgas/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "afgas/parallel.hpp"
#include "afgas/trial.hpp"

namespace afgas {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void renormalize(ComplexField& u, double M) {
  const double m = mass(u);
  if (!(m > 0.0) || !std::isfinite(m)) throw SolverError("state lost all mass");
  const double s = std::sqrt(M / m);
  for (auto& v : u.values) v *= s;
}

// Smooth complex perturbation built from a few low Fourier modes.
ComplexField low_mode_noise(const GridSpec& g, std::mt19937_64& rng, int modes = 6) {
  struct Mode {
    double kx, ky, phase;
    cplx amp;
  };
  std::vector<Mode> ms;
  for (int m = 0; m < modes; ++m) {
    Mode md;
    md.kx = 2.0 * std::numbers::pi * (1.0 + 2.0 * uniform01(rng)) / g.extent_x() * (uniform01(rng) < 0.5 ? -1 : 1);
    md.ky = 2.0 * std::numbers::pi * (1.0 + 2.0 * uniform01(rng)) / g.extent_y() * (uniform01(rng) < 0.5 ? -1 : 1);
    md.phase = 2.0 * std::numbers::pi * uniform01(rng);
    md.amp = std::polar(1.0 / modes, 2.0 * std::numbers::pi * uniform01(rng));
    ms.push_back(md);
  }
  ComplexField n(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      cplx v = 0.0;
      for (const Mode& md : ms) v += md.amp * std::cos(md.kx * g.x(ix) + md.ky * g.y(iy) + md.phase);
      n.values[g.index(ix, iy)] = v;
    }
  return n;
}

double centre_x(const GridSpec& g) { return g.x0 + 0.5 * g.extent_x(); }
double centre_y(const GridSpec& g) { return g.y0 + 0.5 * g.extent_y(); }

ComplexField base_profile(const GridSpec& g) {
  const double cx = centre_x(g), cy = centre_y(g);
  switch (g.bc) {
    case Boundary::dirichlet:
      return sample_complex(
          [&](double x, double y) {
            return cplx(std::sin(std::numbers::pi * (x - g.x0) / g.extent_x()) *
                            std::sin(std::numbers::pi * (y - g.y0) / g.extent_y()),
                        0.0);
          },
          g);
    case Boundary::neumann:
      return ComplexField(g, cplx(1.0, 0.0));
    case Boundary::plane:
      break;
  }
  const double s = 0.25 * std::min(g.extent_x(), g.extent_y()) / 2.0;
  return sample_complex(
      [&](double x, double y) {
        const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        return cplx(std::exp(-r2 / (2.0 * s * s)), 0.0);
      },
      g);
}

ComplexField gaussian_init(const GridSpec& g, std::mt19937_64& rng) {
  ComplexField u = base_profile(g);
  const ComplexField n = low_mode_noise(g, rng);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= 1.0 + 0.1 * n.values[i];
  return u;
}

ComplexField vortex_init(const GridSpec& g, double beta, double M, std::mt19937_64& rng) {
  ComplexField u = base_profile(g);
  const int count = std::min(400, static_cast<int>(std::lround(std::abs(beta) * M)));
  if (count == 0) return u;
  const double cx = centre_x(g), cy = centre_y(g);
  // Region holding the vortices: the bulk of the square, or the central disk of the box.
  const bool disk = g.bc == Boundary::plane;
  const double half = disk ? 0.4 * std::min(g.extent_x(), g.extent_y()) / 2.0
                           : 0.42 * std::min(g.extent_x(), g.extent_y());
  const double area = disk ? std::numbers::pi * half * half : 4.0 * half * half;
  const double a = std::sqrt(2.0 * area / (std::sqrt(3.0) * count));
  std::vector<Point> pts;
  const int span = static_cast<int>(std::ceil(half / a)) + 2;
  for (int j = -span; j <= span; ++j)
    for (int i = -span; i <= span; ++i) {
      const double x = (i + 0.5 * (j & 1)) * a + 0.15 * a * (uniform01(rng) - 0.5);
      const double y = j * a * std::sqrt(3.0) / 2.0 + 0.15 * a * (uniform01(rng) - 0.5);
      const bool inside = disk ? std::hypot(x, y) <= half : std::max(std::abs(x), std::abs(y)) <= half;
      if (inside) pts.push_back({cx + x, cy + y});
    }
  std::stable_sort(pts.begin(), pts.end(), [&](const Point& p, const Point& q) {
    return std::hypot(p[0] - cx, p[1] - cy) < std::hypot(q[0] - cx, q[1] - cy);
  });
  if (static_cast<int>(pts.size()) > count) pts.resize(count);
  const double xi = 0.3 * a;
  const double w = beta > 0.0 ? -1.0 : 1.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double phase = 0.0, core = 1.0;
      for (const Point& p : pts) {
        const double dx = g.x(ix) - p[0], dy = g.y(iy) - p[1];
        const double r2 = dx * dx + dy * dy;
        phase += std::atan2(dy, dx);
        core *= std::sqrt(r2 / (r2 + xi * xi));
      }
      u.values[g.index(ix, iy)] *= core * std::polar(1.0, w * phase);
    }
  return u;
}

ComplexField lattice_init(const GridSpec& g, double beta, double M) {
  if (g.bc == Boundary::plane) {
    GridSpec inner = g;
    const double a = 0.35 * std::min(g.extent_x(), g.extent_y()) / 2.0;
    inner.x0 = centre_x(g) - a;
    inner.y0 = centre_y(g) - a;
    inner.nx = inner.ny = 8;
    inner.hx = inner.hy = 2.0 * a / 8.0;
    BumpLattice lat = square_packing(inner, 4, M, 0.9);
    return build_trial(lat, beta, g);
  }
  GridSpec d = g;
  d.bc = Boundary::dirichlet;
  Certificate c = upper_bound_certificate(d, beta, M);
  return ComplexField(g, std::move(c.state.values));
}

}  // namespace

std::string_view to_string(Initializer init) {
  switch (init) {
    case Initializer::gaussian: return "gaussian";
    case Initializer::trial_lattice: return "trial_lattice";
    case Initializer::vortex_imprint: return "vortex_imprint";
    case Initializer::file: return "file";
  }
  return "gaussian";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::gradient: return "gradient";
    case Method::cg: return "cg";
    case Method::lbfgs: return "lbfgs";
  }
  return "lbfgs";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::gradient, Method::cg, Method::lbfgs})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

Initializer initializer_from_string(std::string_view name) {
  for (Initializer i : {Initializer::gaussian, Initializer::trial_lattice, Initializer::vortex_imprint, Initializer::file})
    if (to_string(i) == name) return i;
  throw std::invalid_argument("unknown initializer '" + std::string(name) + "'");
}

void validate(const SolverConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (cfg.grad_tol && !(*cfg.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (!(cfg.sufficient_decrease > 0.0 && cfg.sufficient_decrease < 1.0))
    throw std::invalid_argument("sufficient_decrease must lie in (0, 1)");
  if (cfg.max_halvings < 1) throw std::invalid_argument("max_halvings must be positive");
  if (!(cfg.step0 > 0.0)) throw std::invalid_argument("step0 must be positive");
  if (!(cfg.continuation_threshold > 0.0)) throw std::invalid_argument("continuation_threshold must be positive");
  if (cfg.lbfgs_memory < 1) throw std::invalid_argument("lbfgs_memory must be positive");
  if (cfg.restarts < 0) throw std::invalid_argument("restarts must be non-negative");
  for (std::size_t i = 1; i < cfg.schedule.size(); ++i)
    if (!(cfg.schedule[i] > cfg.schedule[i - 1])) throw std::invalid_argument("continuation schedule must increase");
  if (cfg.initializer == Initializer::file && !cfg.initial_state)
    throw std::invalid_argument("file initializer needs an initial state");
}

std::vector<double> continuation_schedule(double beta, const SolverConfig& cfg, double M) {
  std::vector<double> s;
  const double b = std::abs(beta);
  if (cfg.continuation && b * M > cfg.continuation_threshold) {
    if (!cfg.schedule.empty()) {
      for (double v : cfg.schedule)
        if (v > 0.0 && v < b) s.push_back(std::copysign(v, beta));
    } else {
      double v = b;
      while (v * M > cfg.continuation_threshold) {
        v *= 0.5;
        s.push_back(std::copysign(v, beta));
      }
      std::reverse(s.begin(), s.end());
    }
  }
  s.push_back(beta);
  return s;
}

ComplexField initial_state(const GridSpec& g, const ModelParams& p, double M, const SolverConfig& cfg, int branch) {
  std::mt19937_64 rng(cfg.seed + 7919ULL * static_cast<std::uint64_t>(branch));
  Initializer kind = cfg.initializer;
  if (branch > 0) {
    static constexpr Initializer cycle[] = {Initializer::vortex_imprint, Initializer::gaussian,
                                            Initializer::trial_lattice};
    kind = cycle[(branch - 1) % 3];
  }
  ComplexField u;
  switch (kind) {
    case Initializer::gaussian: u = gaussian_init(g, rng); break;
    case Initializer::vortex_imprint: u = vortex_init(g, p.beta, M, rng); break;
    case Initializer::trial_lattice:
      try {
        u = lattice_init(g, p.beta, M);
      } catch (const TrialError&) {
        u = gaussian_init(g, rng);  // grid too coarse for a packing
      }
      break;
    case Initializer::file:
      require_same_grid(cfg.initial_state->grid, g, "initial state");
      u = *cfg.initial_state;
      break;
  }
  if (branch > 0 && kind != Initializer::gaussian) {
    const ComplexField n = low_mode_noise(g, rng);
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= 1.0 + 0.05 * n.values[i];
  }
  renormalize(u, M);
  return u;
}

ComplexField scaling_transform(const ComplexField& u, double lambda, double mu) {
  if (!(mu > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("scaling needs mu > 0 and finite lambda");
  ComplexField out(u.grid.dilated(mu));
  for (std::size_t i = 0; i < u.values.size(); ++i) out.values[i] = lambda * u.values[i];
  return out;
}

SolveReport descend(Model& model, ComplexField u, double M, const SolverConfig& cfg) {
  const GridSpec& g = model.grid();
  require_same_grid(u.grid, g, "descent start");
  SpectralOps& ops = model.ops();
  const double beta = model.params().beta;
  const double tol = cfg.grad_tol.value_or(1e-6 * std::sqrt(M));
  const bool dirichlet = g.bc == Boundary::dirichlet;
  const double min_shift = std::pow(std::numbers::pi / std::max(g.extent_x(), g.extent_y()), 2);
  const std::size_t N = u.values.size();

  SolveReport rep;
  rep.grad_tol = tol;
  ops.project(u);
  renormalize(u, M);

  auto noise_floor = [](const EnergyBreakdown& e) {
    return 1e-13 * (1.0 + std::abs(e.total) + std::abs(e.current_term) + e.field_term);
  };
  auto record_bounds = [&](const EnergyBreakdown& e) {
    if (!cfg.check_bounds) return;
    const double tolb = 1e-8 * (1.0 + std::abs(e.total));
    const double dm = e.kinetic_magnetic - e.diamagnetic;
    BoundStatus& b = rep.bounds;
    if (b.iterates_checked == 0 || dm < b.worst_diamagnetic_margin) b.worst_diamagnetic_margin = dm;
    if (dm < -tolb) ++b.diamagnetic_violations;
    if (dirichlet) {
      const double lm = e.kinetic_magnetic - 2.0 * std::numbers::pi * std::abs(beta) * e.l4;
      if (b.iterates_checked == 0 || lm < b.worst_l4_margin) b.worst_l4_margin = lm;
      if (lm < -tolb) ++b.l4_violations;
    }
    ++b.iterates_checked;
  };
  // Removes the component along u (tangent space of the mass sphere).
  auto tangent = [&](ComplexField& v) {
    const double c = inner_re(u, v) / M;
    for (std::size_t i = 0; i < N; ++i) v.values[i] -= c * u.values[i];
  };
  auto precond = [&](const ComplexField& v, double lam) {
    ComplexField z = cfg.precondition ? ops.precondition(v, std::max(lam, min_shift)) : v;
    ops.project(z);
    return z;
  };

  Model::Evaluation ev = model.evaluate(u, true, cfg.check_bounds);
  record_bounds(ev.energy);
  ComplexField r(g), r_prev(g), z_prev(g), d(g), u_prev(g);
  bool have_prev = false;
  double t = cfg.step0;
  struct Pair {
    ComplexField s, y;
    double rho;
  };
  std::vector<Pair> pairs;

  for (int it = 0;; ++it) {
    const EnergyBreakdown& e = ev.energy;
    const double lam = ev.u_dot_gradient / M;
    for (std::size_t i = 0; i < N; ++i) r.values[i] = ev.gradient.values[i] - lam * u.values[i];
    ops.project(r);
    const double res = l2_norm(r);
    rep.history.push_back({it, beta, e.total, res, it == 0 ? 0.0 : t, e.kinetic_magnetic, e.diamagnetic, e.l4});
    rep.lambda = lam;
    rep.projected_residual_norm = res;
    rep.iterations = it;
    if (!std::isfinite(res)) throw SolverError("non-finite residual");
    if (res <= tol) {
      rep.converged = true;
      break;
    }
    if (it >= cfg.max_iters) break;

    if (cfg.method == Method::lbfgs && have_prev) {
      // New curvature pair from the last accepted step, transported by projection.
      Pair pr{u, r, 0.0};
      for (std::size_t i = 0; i < N; ++i) pr.s.values[i] -= u_prev.values[i];
      tangent(pr.s);
      ComplexField rp = r_prev;
      tangent(rp);
      for (std::size_t i = 0; i < N; ++i) pr.y.values[i] -= rp.values[i];
      const double sy = inner_re(pr.s, pr.y);
      if (sy > 1e-12 * l2_norm(pr.s) * l2_norm(pr.y)) {
        pr.rho = 1.0 / sy;
        pairs.push_back(std::move(pr));
        if (static_cast<int>(pairs.size()) > cfg.lbfgs_memory) pairs.erase(pairs.begin());
      }
      for (Pair& q : pairs) {
        tangent(q.s);
        tangent(q.y);
      }
    }

    ComplexField z(g);
    bool fresh = true;  // steepest (preconditioned) direction
    if (cfg.method == Method::lbfgs && !pairs.empty()) {
      ComplexField q = r;
      std::vector<double> alpha(pairs.size());
      for (std::size_t k = pairs.size(); k-- > 0;) {
        alpha[k] = pairs[k].rho * inner_re(pairs[k].s, q);
        for (std::size_t i = 0; i < N; ++i) q.values[i] -= alpha[k] * pairs[k].y.values[i];
      }
      const Pair& last = pairs.back();
      const ComplexField py = precond(last.y, lam);
      const double gamma = (1.0 / last.rho) / inner_re(last.y, py);
      z = precond(q, lam);
      for (auto& v : z.values) v *= gamma;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double b = pairs[k].rho * inner_re(pairs[k].y, z);
        for (std::size_t i = 0; i < N; ++i) z.values[i] += (alpha[k] - b) * pairs[k].s.values[i];
      }
      ops.project(z);
      tangent(z);
      for (std::size_t i = 0; i < N; ++i) d.values[i] = -z.values[i];
      fresh = false;
    } else {
      z = precond(r, lam);
      tangent(z);
      double mix = 0.0;
      if (cfg.method == Method::cg && have_prev) {
        const double den = inner_re(z_prev, r_prev);
        if (den > 0.0) mix = std::max(0.0, (inner_re(z, r) - inner_re(z, r_prev)) / den);
      }
      if (mix > 0.0) {
        tangent(d);
        for (std::size_t i = 0; i < N; ++i) d.values[i] = -z.values[i] + mix * d.values[i];
        fresh = false;
      } else {
        for (std::size_t i = 0; i < N; ++i) d.values[i] = -z.values[i];
      }
      z_prev = z;
    }
    double slope = 2.0 * inner_re(r, d);
    if (!(slope < 0.0)) {
      z = precond(r, lam);
      tangent(z);
      for (std::size_t i = 0; i < N; ++i) d.values[i] = -z.values[i];
      slope = 2.0 * inner_re(r, d);
      pairs.clear();
      fresh = true;
    }
    if (cfg.method == Method::lbfgs && !fresh) t = 1.0;

    const double floor = noise_floor(e);
    bool accepted = false, noisy = false;
    ComplexField trial(g);
    Model::Evaluation tev;
    int halvings = 0;
    for (; halvings <= cfg.max_halvings; ++halvings) {
      for (std::size_t i = 0; i < N; ++i) trial.values[i] = u.values[i] + t * d.values[i];
      renormalize(trial, M);
      tev = model.evaluate(trial, halvings == 0, halvings == 0 && cfg.check_bounds);
      const double Et = tev.energy.total;
      if (Et <= e.total + cfg.sufficient_decrease * t * slope) {
        accepted = true;
        break;
      }
      // Below the rounding floor the sufficient-decrease test cannot
      // discriminate; accept any step that does not rise above it.
      if (std::abs(t * slope) < floor && Et <= e.total + floor) {
        accepted = true;
        noisy = true;
        break;
      }
      t *= cfg.shrink;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "line search failed after " << cfg.max_halvings << " halvings at iteration " << it
          << " (energy " << e.total << ", residual " << res << ")";
      if (std::abs(t * slope) < floor) {
        rep.warnings.push_back("stalled at the rounding floor: " + msg.str());
        break;
      }
      throw SolverError(msg.str());
    }
    if (halvings > 0) tev = model.evaluate(trial, true, cfg.check_bounds);
    if (tev.energy.total > e.total + floor) throw SolverError("energy increased on an accepted step");
    u_prev = u;
    r_prev = r;
    have_prev = true;
    u = std::move(trial);
    ev = std::move(tev);
    record_bounds(ev.energy);
    if (halvings == 0 && !noisy) t = std::min(t * 2.0, 64.0 * cfg.step0);
  }

  rep.breakdown = ev.energy;
  rep.state = std::move(u);
  rep.mass_error = std::abs(mass(rep.state) - M) / M;
  if (ev.energy.support_warning) rep.warnings.push_back("density reaches the box edge");
  if (!rep.converged && rep.warnings.empty()) rep.warnings.push_back("max_iters reached before grad_tol");
  return rep;
}

SolveReport minimize(const GridSpec& g, const ModelParams& p, double M, const SolverConfig& cfg) {
  validate(g);
  validate(cfg);
  if (!(M > 0.0) || !std::isfinite(M)) throw SolverError("mass must be positive");
  if ((g.bc == Boundary::plane) != p.V.has_value())
    throw SolverError("a trap potential is required on plane grids and not allowed on squares");

  const std::vector<double> schedule = continuation_schedule(p.beta, cfg, M);
  const int branches = 1 + (std::abs(p.beta) * M > cfg.continuation_threshold ? cfg.restarts : 0);
  const double tol = cfg.grad_tol.value_or(1e-6 * std::sqrt(M));
  std::vector<SolveReport> results(branches);
  std::vector<std::string> failures(branches);

  parallel_for(branches, cfg.threads, [&](std::size_t b) {
    try {
      ComplexField u = initial_state(g, ModelParams{schedule.front(), p.V}, M, cfg, static_cast<int>(b));
      SolveReport acc;
      for (std::size_t s = 0; s < schedule.size(); ++s) {
        Model model(g, ModelParams{schedule[s], p.V});
        SolverConfig stage = cfg;
        const bool last = s + 1 == schedule.size();
        stage.grad_tol = last ? tol : 10.0 * tol;
        SolveReport r = descend(model, std::move(u), M, stage);
        for (auto& h : r.history) h.iteration += acc.iterations + (s > 0 ? 1 : 0);
        const int before = acc.iterations + (s > 0 ? 1 : 0);
        acc.history.insert(acc.history.end(), r.history.begin(), r.history.end());
        acc.bounds.iterates_checked += r.bounds.iterates_checked;
        acc.bounds.diamagnetic_violations += r.bounds.diamagnetic_violations;
        acc.bounds.l4_violations += r.bounds.l4_violations;
        if (s == 0 || r.bounds.worst_diamagnetic_margin < acc.bounds.worst_diamagnetic_margin)
          acc.bounds.worst_diamagnetic_margin = r.bounds.worst_diamagnetic_margin;
        if (s == 0 || r.bounds.worst_l4_margin < acc.bounds.worst_l4_margin)
          acc.bounds.worst_l4_margin = r.bounds.worst_l4_margin;
        for (auto& w : r.warnings)
          if (!last && w.rfind("max_iters", 0) == 0) continue;
          else acc.warnings.push_back(w);
        acc.iterations = before + r.iterations;
        u = r.state;
        if (last) {
          acc.state = std::move(r.state);
          acc.breakdown = r.breakdown;
          acc.lambda = r.lambda;
          acc.projected_residual_norm = r.projected_residual_norm;
          acc.grad_tol = r.grad_tol;
          acc.converged = r.converged;
          acc.mass_error = r.mass_error;
        }
      }
      acc.branch = static_cast<int>(b);
      results[b] = std::move(acc);
    } catch (const SolverError& e) {
      failures[b] = e.what();
    }
  });

  int best = -1;
  for (int b = 0; b < branches; ++b) {
    if (!failures[b].empty()) continue;
    if (best < 0) {
      best = b;
      continue;
    }
    const SolveReport& x = results[b];
    const SolveReport& y = results[best];
    if (x.breakdown.total < y.breakdown.total) best = b;
  }
  if (best < 0) throw SolverError("all branches failed: " + failures[0]);
  SolveReport out = std::move(results[best]);
  out.branch_energies.assign(branches, std::numeric_limits<double>::quiet_NaN());
  for (int b = 0; b < branches; ++b) {
    if (b == best) out.branch_energies[b] = out.breakdown.total;
    else if (failures[b].empty()) out.branch_energies[b] = results[b].breakdown.total;
    else out.warnings.push_back("branch " + std::to_string(b) + " failed: " + failures[b]);
  }
  if (g.bc != Boundary::plane) {
    const double L = std::max(g.extent_x(), g.extent_y());
    if (std::abs(p.beta) * M / g.area() * L * std::max(g.hx, g.hy) > 1.0 + 1e-9)
      out.warnings.push_back("grid under-resolves the self-generated phase; use at least |beta| M points per axis");
  }
  // Nearly tied branches are reported, not resolved.
  for (int b = 0; b < branches; ++b)
    if (b != best && std::isfinite(out.branch_energies[b]) &&
        std::abs(out.branch_energies[b] - out.breakdown.total) < 1e-6 * std::abs(out.breakdown.total))
      out.warnings.push_back("branch " + std::to_string(b) + " is degenerate with the reported branch");
  return out;
}

}  // namespace afgas
