#include <benchmark/benchmark.h>

#include "ldfs/models.hpp"
#include "ldfs/rng.hpp"
#include "ldfs/shap.hpp"

using namespace ldfs;

namespace {

void BM_TreeShap(benchmark::State& state) {
  Rng rng(6);
  const std::size_t n = 256, d = 10;
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = rng.normal();
    y[i] = rows[i][0] > 0 ? 1 : 0;
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
  const FeatureMatrix x = make_matrix(names, rows);
  ModelSpec spec;
  spec.kind = ModelKind::gbdt;
  spec.hp.gbdt.rounds = int(state.range(0));
  const ModelArtifact model = train(spec, x, y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree_shap(model, x));
  }
}
BENCHMARK(BM_TreeShap)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
