#include <benchmark/benchmark.h>

#include "ldfs/metrics.hpp"
#include "ldfs/stats.hpp"
#include "ldfs/rng.hpp"

using namespace ldfs;

namespace {

void BM_RocAuc(benchmark::State& state) {
  Rng rng(4);
  const std::size_t n = std::size_t(state.range(0));
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = i % 4 == 0 ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(roc_auc(scores, labels));
  }
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_MannWhitney(benchmark::State& state) {
  Rng rng(5);
  std::vector<double> a(std::size_t(state.range(0)));
  std::vector<double> b(std::size_t(state.range(0)));
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal(0.3, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mann_whitney_u(a, b));
  }
}
BENCHMARK(BM_MannWhitney)->Arg(10)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace
