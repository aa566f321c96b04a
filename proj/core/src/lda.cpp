#include "afgas/lda.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "afgas/model.hpp"
#include "afgas/parallel.hpp"

namespace afgas {

namespace {

double vortex_scale(const TrapSpec& trap, double beta) {
  return std::pow(std::abs(beta), -trap.s / (2.0 * (trap.s + 2.0)));
}

}  // namespace

GridSpec lda_grid(const TrapSpec& trap, double beta, double e11, const GridPolicy& policy) {
  trap.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("trapped sweeps need beta > 0");
  if (!(policy.support_factor > 1.0)) throw std::invalid_argument("support_factor must exceed 1");
  if (!(policy.points_per_vortex > 0.0)) throw std::invalid_argument("points_per_vortex must be positive");
  const double R = std::max(tf_solve(trap, beta, e11).support_radius,
                            tf_solve(trap, beta, 2.0 * std::numbers::pi).support_radius);
  const double c = trap.kind == TrapSpec::Kind::radial ? trap.c : std::min(trap.c1, trap.c2);
  const double hw = std::max(policy.support_factor * R, policy.linear_lengths * std::pow(c, -1.0 / (trap.s + 2.0)));
  int n = policy.fixed_n;
  if (n <= 0) {
    const double h = vortex_scale(trap, beta) / policy.points_per_vortex;
    n = static_cast<int>(std::ceil(2.0 * hw / h));
    n = std::clamp(n + (n & 1), policy.min_n, policy.max_n);
    n += n & 1;
  }
  return make_plane_box(hw, n);
}

SweepResult lda_sweep(const TrapSpec& trap, const std::vector<double>& betas, double e11, const GridPolicy& policy,
                      const SolverConfig& cfg) {
  trap.validate();
  if (!(e11 > 0.0)) throw std::invalid_argument("e11 must be positive");
  for (std::size_t i = 0; i < betas.size(); ++i)
    if (i > 0 && !(betas[i] > betas[i - 1])) throw std::invalid_argument("betas must increase");
  SweepResult out;
  out.trap = trap;
  out.e11 = e11;
  out.records.resize(betas.size());
  parallel_for(betas.size(), cfg.threads, [&](std::size_t i) {
    const double beta = betas[i];
    LdaRecord& rec = out.records[i];
    rec.beta = beta;
    rec.grid = lda_grid(trap, beta, e11, policy);
    rec.vortex_scale = vortex_scale(trap, beta);
    rec.resolution_margin = rec.vortex_scale / std::max(rec.grid.hx, rec.grid.hy);
    rec.under_resolved = rec.resolution_margin < kMinResolutionMargin;
    if (rec.under_resolved) rec.warnings.push_back("under-resolved");

    SolverConfig c = cfg;
    c.threads = 1;
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport r = minimize(rec.grid, ModelParams{beta, sample_trap(trap, rec.grid)}, 1.0, c);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.energy_af = r.breakdown.total;
    rec.lambda_af = r.lambda;
    rec.converged = r.converged;
    rec.iterations = r.iterations;
    rec.warnings.insert(rec.warnings.end(), r.warnings.begin(), r.warnings.end());

    const TfSolution tf = tf_solve(trap, beta, e11);
    const TfSolution tf2 = tf_solve(trap, beta, 2.0 * std::numbers::pi);
    rec.energy_tf = tf.energy;
    rec.energy_tf_2pi = tf2.energy;
    rec.ratio = rec.energy_af / tf.energy;
    rec.ratio_2pi = rec.energy_af / tf2.energy;

    const ScalarField rho = density(r.state);
    rec.boundary_mass = boundary_mass_fraction(rho);
    if (rec.boundary_mass > kBoundaryMassWarning) rec.warnings.push_back("mass near the box edge");
    const TfDistance d = tf_distance(rho, tf);
    rec.tf_distance = d.value;
    rec.distance_argmax = d.argmax;
    const std::vector<Vortex> vs = vortex_census(r.state);
    rec.vortex_count = static_cast<int>(vs.size());
    rec.winding = total_winding(vs);
    rec.state = std::move(r.state);
  });
  if (out.records.size() >= 2) {
    const LdaRecord& a = out.records[out.records.size() - 2];
    const LdaRecord& b = out.records.back();
    out.top_slope = std::log(b.energy_af / a.energy_af) / std::log(b.beta / a.beta);
  }
  return out;
}

ResolutionAudit resolution_audit(const LdaRecord& record, const TrapSpec& trap, const SolverConfig& cfg) {
  ResolutionAudit a;
  a.beta = record.beta;
  a.coarse_energy = record.energy_af;
  a.under_resolved = record.under_resolved;
  const GridSpec fine = record.grid.refined(2);
  SolverConfig c = cfg;
  a.fine_energy = minimize(fine, ModelParams{record.beta, sample_trap(trap, fine)}, 1.0, c).breakdown.total;
  a.relative_change = std::abs(a.fine_energy - a.coarse_energy) / std::abs(a.fine_energy);
  a.passed = a.relative_change < 0.01;
  return a;
}

}  // namespace afgas
