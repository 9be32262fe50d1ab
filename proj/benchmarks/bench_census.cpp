#include <benchmark/benchmark.h>

#include "motifgrid/motif.hpp"
#include "motifgrid/trainer.hpp"

namespace {

using namespace motifgrid;

MaskStack paper_scale_stack(double sparsity) {
  const auto net = trainer::DenseNet::init({10, 400, 400, 400, 16, 7}, 98);
  return trainer::prune_step(net, sparsity).mask_stack();
}

void BM_CountAll(benchmark::State& state) {
  const MaskStack stack = paper_scale_stack(static_cast<double>(state.range(0)) / 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(count_all(stack));
  state.counters["edges"] = static_cast<double>(sparsity_profile(stack).total_edges);
}
BENCHMARK(BM_CountAll)->Arg(90)->Arg(95)->Arg(98)->Unit(benchmark::kMillisecond);

void BM_CountSingle(benchmark::State& state) {
  const MaskStack stack = paper_scale_stack(0.98);
  const auto kind = kAllMotifs[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(count_motif(stack, kind));
  state.SetLabel(std::string(motif_name(kind)));
}
BENCHMARK(BM_CountSingle)->DenseRange(0, 7)->Unit(benchmark::kMicrosecond);

void BM_CleanDead(benchmark::State& state) {
  const MaskStack stack = paper_scale_stack(0.98);
  for (auto _ : state) benchmark::DoNotOptimize(clean_dead(stack, CleanupMode::kForwardAndBackward));
}
BENCHMARK(BM_CleanDead)->Unit(benchmark::kMillisecond);

}  // namespace
