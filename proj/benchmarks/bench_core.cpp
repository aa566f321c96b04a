#include <benchmark/benchmark.h>

#include <cmath>

#include "afgas/model.hpp"
#include "afgas/spectral_ops.hpp"
#include "afgas/tf.hpp"

using namespace afgas;

namespace {

ComplexField test_state(const GridSpec& g) {
  const double cx = g.x0 + 0.5 * g.extent_x(), cy = g.y0 + 0.5 * g.extent_y();
  const double s = 0.15 * g.extent_x();
  ComplexField u = sample_complex(
      [&](double x, double y) {
        const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (s * s);
        return std::exp(-r2) * std::polar(1.0, 3.0 * (x - cx) / s);
      },
      g);
  const double k = 1.0 / std::sqrt(mass(u));
  for (auto& v : u.values) v *= k;
  return u;
}

void BM_Convolution(benchmark::State& st) {
  const GridSpec g = make_plane_box(6.0, static_cast<int>(st.range(0)));
  SpectralOps ops(g);
  const ScalarField rho = density(test_state(g));
  for (auto _ : st) benchmark::DoNotOptimize(ops.grad_perp_convolve(rho));
}
BENCHMARK(BM_Convolution)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EnergyOnly(benchmark::State& st) {
  const GridSpec g = make_square(1.0, static_cast<int>(st.range(0)), Boundary::dirichlet);
  Model m(g, ModelParams{16.0, {}});
  const ComplexField u = test_state(g);
  for (auto _ : st) benchmark::DoNotOptimize(m.evaluate(u, false, false));
}
BENCHMARK(BM_EnergyOnly)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EvaluateWithGradient(benchmark::State& st) {
  const GridSpec g = make_square(1.0, static_cast<int>(st.range(0)), Boundary::dirichlet);
  Model m(g, ModelParams{16.0, {}});
  const ComplexField u = test_state(g);
  for (auto _ : st) benchmark::DoNotOptimize(m.evaluate(u, true, true));
}
BENCHMARK(BM_EvaluateWithGradient)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Precondition(benchmark::State& st) {
  const GridSpec g = make_square(1.0, static_cast<int>(st.range(0)), Boundary::neumann);
  SpectralOps ops(g);
  const ComplexField u = test_state(g);
  for (auto _ : st) benchmark::DoNotOptimize(ops.precondition(u, 10.0));
}
BENCHMARK(BM_Precondition)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_TfSolve(benchmark::State& st) {
  const TrapSpec V = TrapSpec::anisotropic(1.0, 2.0, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(tf_solve(V, 8.0, 2.0 * M_PI));
}
BENCHMARK(BM_TfSolve)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
