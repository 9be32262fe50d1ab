#include <benchmark/benchmark.h>

#include "motifgrid/ensemble.hpp"

namespace {

using namespace motifgrid;

NullSpec paper_scale_spec(std::size_t samples) {
  return NullSpec{{10, 400, 400, 400, 16, 7}, {1165, 1983, 1845, 1382, 69}, 1, samples};
}

void BM_Generate(benchmark::State& state) {
  const NullSpec spec = paper_scale_spec(1000);
  std::size_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec, index++ % spec.sample_count));
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMicrosecond);

void BM_SamplePositions(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto k = static_cast<std::uint64_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_positions(n, k, seed++));
}
BENCHMARK(BM_SamplePositions)->Args({160000, 3200})->Args({6400, 4000})->Unit(benchmark::kMicrosecond);

void BM_CensusBatch(benchmark::State& state) {
  const NullSpec spec = paper_scale_spec(100);
  for (auto _ : state) benchmark::DoNotOptimize(census_batch(spec, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * spec.sample_count));
}
BENCHMARK(BM_CensusBatch)->Unit(benchmark::kMillisecond);

}  // namespace
