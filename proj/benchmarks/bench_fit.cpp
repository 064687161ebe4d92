#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "ularma/estimation.hpp"
#include "ularma/inference.hpp"

namespace {

void BM_Fit(benchmark::State& state) {
  const auto p = bench::path(static_cast<std::size_t>(state.range(0)));
  const auto spec = ularma::ModelSpec::make(1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ularma::fit(spec, p.data));
}
BENCHMARK(BM_Fit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Stepwise(benchmark::State& state) {
  const auto p = bench::path(500);
  for (auto _ : state) benchmark::DoNotOptimize(ularma::stepwise_select(p.data, 2, 2, ularma::Link::logit));
}
BENCHMARK(BM_Stepwise)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
