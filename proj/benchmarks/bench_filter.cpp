#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "ularma/estimation.hpp"
#include "ularma/filter.hpp"

namespace {

void BM_FilterForward(benchmark::State& state) {
  const auto p = bench::path(static_cast<std::size_t>(state.range(0)));
  const auto spec = ularma::ModelSpec::make(1, 1, 1);
  const auto g = ularma::ParamVector::from_flat(spec, std::vector<double>{0.5, 0.5, 0.2, -0.4});
  for (auto _ : state) benchmark::DoNotOptimize(ularma::filter_forward(spec, g, p.data));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FilterForward)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_ScoreAndInfo(benchmark::State& state) {
  const auto p = bench::path(static_cast<std::size_t>(state.range(0)));
  const auto spec = ularma::ModelSpec::make(1, 1, 1);
  const auto g = ularma::ParamVector::from_flat(spec, std::vector<double>{0.5, 0.5, 0.2, -0.4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ularma::score(spec, g, p.data));
    benchmark::DoNotOptimize(ularma::cond_info(spec, g, p.data));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScoreAndInfo)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
