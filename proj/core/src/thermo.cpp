#include "afgas/thermo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "afgas/parallel.hpp"

namespace afgas {

namespace {

struct Job {
  double parameter;
  GridSpec grid;
  double beta;
  double rho;
};

ThermoSample run_sample(const Job& job, const SolverConfig& cfg) {
  const double area = job.grid.area();
  const double M = job.rho * area;
  SolverConfig c = cfg;
  c.threads = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport r = minimize(job.grid, ModelParams{job.beta, {}}, M, c);
  ThermoSample s;
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.parameter = job.parameter;
  s.effective_beta = std::abs(job.beta) * job.rho * area;
  s.energy = r.breakdown.total;
  s.normalized = r.breakdown.total / (std::abs(job.beta) * job.rho * job.rho * area);
  const double two_pi_beta = 2.0 * std::numbers::pi * std::abs(job.beta);
  s.l4_margin = r.breakdown.kinetic_magnetic - two_pi_beta * r.breakdown.l4;
  s.cs_margin = two_pi_beta * (r.breakdown.l4 - M * M / area);
  s.l4_bound = 2.0 * std::numbers::pi * r.breakdown.l4 * area / (M * M);
  const double tol = 1e-8 * (1.0 + std::abs(s.energy));
  s.lower_bound_ok = s.l4_margin >= -tol && s.cs_margin >= -tol;
  s.converged = r.converged;
  s.iterations = r.iterations;
  s.warnings = r.warnings;
  return s;
}

void fit(ThermoEstimate& est) {
  std::vector<const ThermoSample*> t;
  for (const auto& s : est.samples)
    if (s.resolved) t.push_back(&s);
  if (t.size() < 3) {
    est.partial = true;
    est.failures.push_back("fewer than 3 trusted samples; no extrapolation");
    if (!t.empty()) est.e11 = t.back()->normalized;
    for (const ThermoSample* s : t)
      est.lower_envelope = s == t.front() ? s->l4_bound : std::min(est.lower_envelope, s->l4_bound);
    return;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (const ThermoSample* s : t) {
    const double x = 1.0 / std::sqrt(s->effective_beta);
    sx += x;
    sy += s->normalized;
    sxx += x * x;
    sxy += x * s->normalized;
  }
  const double det = n * sxx - sx * sx;
  est.slope = (n * sxy - sx * sy) / det;
  est.e11 = (sy - est.slope * sx) / n;
  double ss = 0.0;
  for (const ThermoSample* s : t) {
    const double r = s->normalized - (est.e11 + est.slope / std::sqrt(s->effective_beta));
    ss += r * r;
  }
  est.fit_residual = std::sqrt(ss / n);
  const double sigma2 = ss / (n - 2.0);
  const double se_c0 = std::sqrt(sigma2 * sxx / det);
  const ThermoSample& top = *t.back();
  est.e11_error = se_c0 + std::abs(est.e11 - top.normalized);
  est.lower_envelope = t.front()->l4_bound;
  for (const ThermoSample* s : t) est.lower_envelope = std::min(est.lower_envelope, s->l4_bound);
  // Last doubling: the sample nearest to half the top effective coupling.
  const ThermoSample* half = nullptr;
  for (const ThermoSample* s : t)
    if (s != &top && (!half || std::abs(std::log(s->effective_beta * 2.0 / top.effective_beta)) <
                                   std::abs(std::log(half->effective_beta * 2.0 / top.effective_beta))))
      half = s;
  if (half) est.top_octave_variation = std::abs(top.normalized - half->normalized) / top.normalized;
}

ThermoEstimate run_sweep(const std::vector<Job>& jobs, const SolverConfig& cfg) {
  ThermoEstimate est;
  std::vector<ThermoSample> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    try {
      out[i] = run_sample(jobs[i], cfg);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      est.partial = true;
      est.failures.push_back("sample " + std::to_string(jobs[i].parameter) + ": " + errors[i]);
      continue;
    }
    est.samples.push_back(std::move(out[i]));
  }
  fit(est);
  return est;
}

void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.size() < 3) throw std::invalid_argument(std::string(what) + " needs at least 3 values");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) throw std::invalid_argument(std::string(what) + " must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) throw std::invalid_argument(std::string(what) + " must increase");
  }
}

}  // namespace

bool resolves_vortices(double beta, double rho, const GridSpec& g) {
  const double scale = 1.0 / std::sqrt(std::abs(beta) * rho);
  return scale > 4.0 * std::max(g.hx, g.hy);
}

ThermoEstimate estimate_e11(const std::vector<double>& betas, const GridSpec& g, const SolverConfig& cfg) {
  validate(g);
  if (g.bc != Boundary::dirichlet || std::abs(g.extent_x() - 1.0) > 1e-12 || std::abs(g.extent_y() - 1.0) > 1e-12)
    throw std::invalid_argument("the beta sweep runs on the Dirichlet unit square");
  require_increasing(betas, "betas");
  std::vector<Job> jobs;
  bool stopped = false;
  for (double b : betas) {
    if (!resolves_vortices(b, 1.0, g)) {
      stopped = true;
      break;
    }
    jobs.push_back({b, g, b, 1.0});
  }
  ThermoEstimate est = run_sweep(jobs, cfg);
  if (stopped) est.failures.push_back("sweep stopped at the resolution guard");
  return est;
}

ThermoEstimate estimate_e11_sizes(const std::vector<double>& Ls, int n, const SolverConfig& cfg, double beta,
                                  double rho) {
  require_increasing(Ls, "sizes");
  if (!(beta > 0.0) || !(rho > 0.0)) throw std::invalid_argument("size sweep needs beta, rho > 0");
  std::vector<Job> jobs;
  bool stopped = false;
  for (double L : Ls) {
    const GridSpec g = make_square(L, n, Boundary::dirichlet);
    if (!resolves_vortices(beta, rho, g)) {
      stopped = true;
      break;
    }
    jobs.push_back({L, g, beta, rho});
  }
  ThermoEstimate est = run_sweep(jobs, cfg);
  if (stopped) est.failures.push_back("sweep stopped at the resolution guard");
  return est;
}

ScalingConsistency scaling_consistency(double beta, double rho, const GridSpec& g, const SolverConfig& cfg) {
  validate(g);
  if (!(beta > 0.0) || !(rho > 0.0)) throw std::invalid_argument("scaling consistency needs beta, rho > 0");
  if (g.bc == Boundary::plane) throw std::invalid_argument("scaling consistency runs on squares");
  ScalingConsistency out;
  out.beta = beta;
  out.rho = rho;
  out.expected = beta * rho * rho;
  SolverConfig c = cfg;
  c.threads = 1;
  const double area = g.area();
  out.e_beta_rho = minimize(g, ModelParams{beta, {}}, rho * area, c).breakdown.total / area;
  if (beta == 1.0 && rho == 1.0) {
    out.e_unit = out.e_beta_rho;
  } else {
    const GridSpec gu = g.dilated(std::sqrt(beta * rho));
    out.e_unit = minimize(gu, ModelParams{1.0, {}}, gu.area(), c).breakdown.total / gu.area();
  }
  out.ratio = out.e_beta_rho / out.e_unit;
  out.relative_deviation = std::abs(out.ratio - out.expected) / out.expected;
  return out;
}

int homogeneous_points(double L, double beta, double rho, double points_per_length) {
  const double need = std::max(points_per_length * L, std::abs(beta) * rho * L * L);
  return std::max(8, 2 * static_cast<int>(std::ceil(0.5 * need - 1e-9)));
}

std::vector<ThermoEstimate::Gap> neumann_dirichlet_gap(const std::vector<double>& Ls, double beta, double rho,
                                                       const SolverConfig& cfg, double points_per_length) {
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    if (!(Ls[i] > 0.0)) throw std::invalid_argument("sizes must be positive");
    if (i > 0 && !(Ls[i] > Ls[i - 1])) throw std::invalid_argument("sizes must increase");
  }
  if (!(points_per_length > 0.0)) throw std::invalid_argument("points_per_length must be positive");
  std::vector<ThermoEstimate::Gap> out(Ls.size());
  parallel_for(Ls.size(), cfg.threads, [&](std::size_t i) {
    const double L = Ls[i];
    const int n = homogeneous_points(L, beta, rho, points_per_length);
    const GridSpec gd = make_square(L, n, Boundary::dirichlet);
    const GridSpec gn = make_square(L, n, Boundary::neumann);
    const double M = rho * L * L;
    SolverConfig c = cfg;
    c.threads = 1;
    const SolveReport d = minimize(gd, ModelParams{beta, {}}, M, c);
    double en = minimize(gn, ModelParams{beta, {}}, M, c).breakdown.total;
    // The Dirichlet minimiser is an admissible Neumann state.
    SolverConfig from = c;
    from.initializer = Initializer::file;
    from.initial_state = ComplexField(gn, d.state.values);
    from.restarts = 0;
    from.continuation = false;
    en = std::min(en, minimize(gn, ModelParams{beta, {}}, M, from).breakdown.total);
    out[i] = {L, d.breakdown.total, en, (d.breakdown.total - en) / d.breakdown.total};
  });
  return out;
}

double refinement_change(double beta, const GridSpec& g, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  const double M = g.area();
  const double coarse = minimize(g, ModelParams{beta, {}}, M, c).breakdown.total;
  const double fine = minimize(g.refined(2), ModelParams{beta, {}}, M, c).breakdown.total;
  return std::abs(fine - coarse) / std::abs(fine);
}

}  // namespace afgas
