// Microbenchmarks for the hot paths: kernel assembly, symmetric
// eigendecomposition, spectral application, and the Chebyshev recurrence.
//
// Run: ./geowave_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "geowave/chebyshev.hpp"
#include "geowave/coherent_state.hpp"
#include "geowave/graph_laplacian.hpp"
#include "geowave/sampling.hpp"
#include "geowave/spectral.hpp"

namespace {

using namespace geowave;

KernelConfig kernel_for(double epsilon, double lambda = 1.0) {
  KernelConfig config;
  config.epsilon = epsilon;
  config.lambda = lambda;
  config.intrinsic_dim = 2;
  return config;
}

void BM_KernelAssembly(benchmark::State& state) {
  const Index n = state.range(0);
  const PointCloud cloud = sample_sphere(n, SphereDensity::Uniform, 7);
  const KernelConfig config = kernel_for(0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_kernel_matrix(cloud, config));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_KernelAssembly)->Arg(250)->Arg(500)->Arg(1000)->Complexity();

void BM_EigSym(benchmark::State& state) {
  const Index n = state.range(0);
  const PointCloud cloud = sample_sphere(n, SphereDensity::Uniform, 7);
  const GraphOperators ops = GraphOperators::build(cloud, kernel_for(0.02));
  auto [a_sym, weight] = symmetrize(ops.averaging, ops.p_lambda);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eig_sym(a_sym, weight));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_EigSym)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_WavePropagate(benchmark::State& state) {
  const Index n = state.range(0);
  const PointCloud cloud = sample_sphere(n, SphereDensity::Uniform, 7);
  const GraphOperators ops = GraphOperators::build(cloud, kernel_for(0.02));
  const SpectralDecomposition decomp = decompose(ops);
  const CoherentState psi = make_state_neighbor(cloud, 0, pick_neighbor(cloud, 0, cloud.points.row(1)), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wave_propagate(decomp, 0.4, ops.epsilon, 0.0, ops.c20(), psi.amplitudes));
  }
}
BENCHMARK(BM_WavePropagate)->Arg(500)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_ChebyshevApply(benchmark::State& state) {
  const Index n = 500;
  const int degree = static_cast<int>(state.range(0));
  const PointCloud cloud = sample_sphere(n, SphereDensity::Uniform, 7);
  const GraphOperators ops = GraphOperators::build(cloud, kernel_for(0.02));
  const CoherentState psi = make_state_neighbor(cloud, 0, pick_neighbor(cloud, 0, cloud.points.row(1)), 0.2);
  const ScalarFunction f = ScalarFunction::propagator(0.4, ops.epsilon, 1e-3, ops.c20());
  auto [a_sym, weight] = symmetrize(ops.averaging, ops.p_lambda);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chebyshev_apply(ops.averaging, weight, f, psi.amplitudes, degree));
  }
}
BENCHMARK(BM_ChebyshevApply)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
