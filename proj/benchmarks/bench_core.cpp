#include <benchmark/benchmark.h>

#include "homent/entangle.hpp"
#include "homent/pipeline.hpp"

using namespace homent;

namespace {

void BM_HomOutput(benchmark::State& state) {
  const auto c = pipeline::plasmonic_preset();
  for (auto _ : state) benchmark::DoNotOptimize(splitter::hom_output(c.splitter, c.eta, c.d, c.phi_d));
}
BENCHMARK(BM_HomOutput);

void BM_DesignMatrix(benchmark::State& state) {
  const auto sets = tomo::default_angle_sets();
  for (auto _ : state) benchmark::DoNotOptimize(tomo::design_matrix(sets));
}
BENCHMARK(BM_DesignMatrix);

void BM_FilteredConcurrence(benchmark::State& state) {
  const auto rho = pipeline::true_state(pipeline::plasmonic_preset());
  for (auto _ : state) benchmark::DoNotOptimize(entangle::filtered_concurrence(rho));
}
BENCHMARK(BM_FilteredConcurrence);

void BM_MziFit(benchmark::State& state) {
  const auto c = pipeline::plasmonic_preset();
  const auto fringes = pipeline::noisy_fringes(c.splitter, 64, 0.01, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(splitter::fit_mzi_phase(fringes, c.splitter.rmag(), c.splitter.tmag()));
}
BENCHMARK(BM_MziFit);

void BM_MleReconstruct(benchmark::State& state) {
  const auto c = pipeline::photonic_preset();
  const auto counts = pipeline::synthesize_counts(c);
  for (auto _ : state) benchmark::DoNotOptimize(tomo::mle_reconstruct(counts, c.angle_sets));
}
BENCHMARK(BM_MleReconstruct)->Unit(benchmark::kMillisecond);

void BM_EndToEnd(benchmark::State& state) {
  const auto c = pipeline::photonic_preset();
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::end_to_end(c));
}
BENCHMARK(BM_EndToEnd)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
