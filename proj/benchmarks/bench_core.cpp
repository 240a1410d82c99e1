#include <benchmark/benchmark.h>

#include "bmatch/classify.hpp"
#include "bmatch/dynamics.hpp"
#include "bmatch/generators.hpp"
#include "bmatch/graph_metrics.hpp"
#include "bmatch/preferences.hpp"
#include "bmatch/solver.hpp"

namespace {

using namespace bmatch;

void BM_PreferencesFromMarks(benchmark::State& state) {
  const PeerId n = static_cast<PeerId>(state.range(0));
  const MarkMatrix m = random_symmetric_marks(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(preferences_from_marks(m));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_PreferencesFromMarks)->Arg(64)->Arg(256)->Arg(512)->Complexity();

void BM_FindPreferenceCycle(benchmark::State& state) {
  const PeerId n = static_cast<PeerId>(state.range(0));
  const auto L = preferences_from_marks(random_symmetric_marks(n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_preference_cycle(L));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_FindPreferenceCycle)->Arg(64)->Arg(256)->Arg(512)->Complexity();

void BM_SymmetrizeAcyclic(benchmark::State& state) {
  const PeerId n = static_cast<PeerId>(state.range(0));
  const auto L = preferences_from_marks(random_symmetric_marks(n, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetrize_acyclic(L));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SymmetrizeAcyclic)->Arg(64)->Arg(256)->Arg(512)->Complexity();

void BM_StableConfiguration(benchmark::State& state) {
  const PeerId n = static_cast<PeerId>(state.range(0));
  const auto L = preferences_from_marks(metric_marks(n, 3, 4));
  const QuotaVector b = QuotaVector::uniform(n, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stable_configuration(L, b));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_StableConfiguration)->Arg(128)->Arg(256)->Arg(512)->Complexity();

void BM_RunDynamics(benchmark::State& state) {
  const PeerId n = static_cast<PeerId>(state.range(0));
  const auto L = preferences_from_marks(random_symmetric_marks(n, 5));
  const QuotaVector b = QuotaVector::uniform(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_dynamics(L, b, Configuration(), ActivationPolicy::uniform(9), 0));
  }
}
BENCHMARK(BM_RunDynamics)->Arg(32)->Arg(64)->Arg(128);

void BM_Metrics(benchmark::State& state) {
  const PeerId n = static_cast<PeerId>(state.range(0));
  const auto L = preferences_from_marks(metric_marks(n, 3, 6));
  const Configuration c = stable_configuration(L, QuotaVector::uniform(n, 10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_metrics(c, n));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Metrics)->Arg(128)->Arg(256)->Arg(512)->Complexity();

}  // namespace

BENCHMARK_MAIN();
