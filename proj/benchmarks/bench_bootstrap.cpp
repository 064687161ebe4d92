#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "ularma/forecast.hpp"

namespace {

void BM_BootstrapPi(benchmark::State& state) {
  const std::size_t h = 12;
  const auto full = bench::path(500 + h);
  ularma::SeriesData train{std::vector<double>(full.data.y.begin(), full.data.y.begin() + 500),
                           full.data.X.topRows(500)};
  const ularma::RowMatrix nx = full.data.X.bottomRows(h);
  const auto fm = ularma::fit(ularma::ModelSpec::make(1, 1, 1), train);
  const auto B = static_cast<std::size_t>(state.range(0));
  const auto jobs = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ularma::bootstrap_pi(fm, train, h, B, 0.1, 7, nx, jobs));
}
BENCHMARK(BM_BootstrapPi)->Args({1000, 1})->Args({10000, 1})->Args({10000, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
