// Serial reference against the OpenMP kernels: Monte Carlo replication and
// the quadrature grid scan.

#include <benchmark/benchmark.h>

#include "stochmatch/generators.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/oracles.hpp"

using namespace stochmatch;

namespace {

const AnyInstance& hard_instance() {
  static const AnyInstance inst = gen_hard_stochastic({50, kHardEps, std::nullopt});
  return inst;
}

void BM_ReplicateSerial(benchmark::State& state) {
  const ReplicationRunner runner(AlgorithmId::kPerturbedGreedy, hard_instance());
  for (auto _ : state) {
    benchmark::DoNotOptimize(replicate_serial(runner, state.range(0), 1, Accounting::kExpected));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicateSerial)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ReplicateParallel(benchmark::State& state) {
  const ReplicationRunner runner(AlgorithmId::kPerturbedGreedy, hard_instance());
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        replicate(runner, state.range(0), 1, Accounting::kExpected, workers));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicateParallel)->Args({2000, 2})->Args({2000, 4})->Args({2000, 8})
    ->Unit(benchmark::kMillisecond);

const StochasticInstance& decomposable_instance() {
  static const StochasticInstance inst = [] {
    RandomFamily f;
    f.n = 4;
    f.m = 5;
    f.prob_class = ProbClass::kDecomposable;
    return gen_random(f, 7);
  }();
  return inst;
}

void BM_Quadrature(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_pg_value(decomposable_instance(), PgValueMode::kQuadrature,
                                            static_cast<int>(state.range(0)), workers));
  }
}
BENCHMARK(BM_Quadrature)->Args({32, 1})->Args({32, 2})->Args({32, 4})->Args({32, 8})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
