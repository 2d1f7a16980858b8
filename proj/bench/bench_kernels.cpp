// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include "holo/cylinder.hpp"
#include "holo/propagator.hpp"

using namespace holo;

namespace {
Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void BM_QuadratureGram(benchmark::State& state) {
  const BasisSpec b = cylinder_basis(8);
  const QuadratureRule rule(kDefaultQuadOrder, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(quadrature_gram(b, cylinder_chart(), rule, Precision::extended, exec_of(state)));
}
BENCHMARK(BM_QuadratureGram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StepMatrix(benchmark::State& state) {
  const BasisSpec b = cylinder_basis(8);
  const KernelRep K = reproducing_kernel(gram_matrix(b, cylinder_chart(), QuadratureRule(1, 2)), b);
  PropagatorConfig c;
  c.H = hamiltonian_free(8);
  c.t = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(StepOperator(c, K, 0.1, exec_of(state)).matrix());
}
BENCHMARK(BM_StepMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HeatGrid(benchmark::State& state) {
  HeatKernelParams p;
  const Eigen::VectorXcd pts = periodic_grid(16).cast<cplx>();
  for (auto _ : state) benchmark::DoNotOptimize(heat_kernel_grid(p, pts, pts, exec_of(state)));
}
BENCHMARK(BM_HeatGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KernelGrid(benchmark::State& state) {
  const BasisSpec b = cylinder_basis(8);
  const KernelRep K = reproducing_kernel(gram_matrix(b, cylinder_chart(), QuadratureRule(1, 2)), b);
  const Eigen::MatrixXcd zs = periodic_grid(64).cast<cplx>().transpose();
  for (auto _ : state) benchmark::DoNotOptimize(K.grid(zs, zs, exec_of(state)));
}
BENCHMARK(BM_KernelGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
}  // namespace

BENCHMARK_MAIN();
