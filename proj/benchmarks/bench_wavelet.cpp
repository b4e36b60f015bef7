#include <benchmark/benchmark.h>

#include "ldfs/wavelet.hpp"

using namespace ldfs;

namespace {

RawSignal eight_minute_recording() {
  SynthSpec spec;
  spec.components = {{0.012, 1.5, 0.0}, {0.04, 1.4, 0.5}, {0.1, 1.2, 1.0},
                     {0.25, 0.7, 1.5},  {1.1, 0.9, 2.0}};
  spec.baseline = 22.0;
  spec.noise_sigma = 1.0;
  spec.duration = 480.0;
  spec.sample_rate = 20.0;
  spec.seed = 1;
  return synthesize_signal(spec);
}

void BM_CwtMorlet(benchmark::State& state) {
  const RawSignal signal = eight_minute_recording();
  MorletParams params;
  params.voices_per_octave = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwt_morlet(signal, params));
  }
}
BENCHMARK(BM_CwtMorlet)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BandFeatures(benchmark::State& state) {
  const RawSignal signal = eight_minute_recording();
  const Scalogram sg = cwt_morlet(signal, MorletParams{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(band_features(sg, canonical_bands()));
  }
}
BENCHMARK(BM_BandFeatures)->Unit(benchmark::kMillisecond);

void BM_LdfSummary(benchmark::State& state) {
  const RawSignal signal = eight_minute_recording();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ldf_summary(signal));
  }
}
BENCHMARK(BM_LdfSummary)->Unit(benchmark::kMicrosecond);

}  // namespace
