// Serial reference vs OpenMP kernels. Arg 0 is the serial path; Arg n > 0 runs with n threads.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>

#include "valcalc/bodies.hpp"
#include "valcalc/kinematic.hpp"
#include "valcalc/su2.hpp"

using namespace valcalc;

namespace {

int parallel_threads() { return std::max(2, omp_get_num_procs()); }

const Box& sample_box() {
  static const Box b = make_box({0, 0, 0, 0}, {0.6, 0.4, 0.3, 0.5});
  return b;
}

void BM_MonteCarloKinematic(benchmark::State& state) {
  const ConvexBody K = Ball{{0, 0, 0, 0}, 0.8};
  const ConvexBody L = sample_box();
  const double exact = rhs_kinematic(K, L);
  const uint64_t N = 1u << 16;
  for (auto _ : state) {
    MCReport r = state.range(0) == 0
                     ? mc_principal_kinematic_serial(K, L, N, 7, exact)
                     : mc_principal_kinematic(K, L, N, 7, exact, {.threads = int(state.range(0))});
    benchmark::DoNotOptimize(r.estimate);
  }
  state.SetItemsProcessed(state.iterations() * N);
}

void BM_MonteCarloPoincare(benchmark::State& state) {
  const PlanarPolygon M1 = regular_polygon({Vec{1, 0, 0, 0}, Vec{0, 1, 0, 0}}, 6);
  const PlanarPolygon M2 = regular_polygon({Vec{1, 0, 0, 0}, Vec{0, 0, 1, 0}}, 5, 0.8);
  const uint64_t N = 1u << 16;
  for (auto _ : state) {
    MCReport r = state.range(0) == 0 ? mc_poincare_serial(M1, M2, N, 7)
                                     : mc_poincare(M1, M2, N, 7, {.threads = int(state.range(0))});
    benchmark::DoNotOptimize(r.estimate);
  }
  state.SetItemsProcessed(state.iterations() * N);
}

void BM_Quadrature(benchmark::State& state) {
  const ValuationRep Z = z_rep(ImDirection::along(1, 2, 2));
  const NumericValuation mu(Z);
  EvalOptions opt;
  opt.threads = state.range(0) == 0 ? 1 : int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(mu, sample_box(), opt));
}

void BM_Gram(benchmark::State& state) {
  const ValuationBasis basis = su2_basis(Su2BasisChoice::Alesker);
  const int threads = state.range(0) == 0 ? 1 : int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(basis, threads));
}

void thread_args(benchmark::internal::Benchmark* b) {
  b->Arg(0)->Arg(parallel_threads())->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_MonteCarloKinematic)->Apply(thread_args);
BENCHMARK(BM_MonteCarloPoincare)->Apply(thread_args);
BENCHMARK(BM_Quadrature)->Apply(thread_args);
BENCHMARK(BM_Gram)->Apply(thread_args);

BENCHMARK_MAIN();
