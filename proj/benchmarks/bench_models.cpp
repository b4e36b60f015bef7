#include <benchmark/benchmark.h>

#include "ldfs/models.hpp"
#include "ldfs/rng.hpp"

using namespace ldfs;

namespace {

FeatureMatrix cohort_matrix(std::size_t n, std::size_t d, std::vector<int>& y) {
  Rng rng(3);
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = rng.normal();
    y[i] = rows[i][0] + 0.4 * rows[i][1] + 0.3 * rng.normal() > 0 ? 1 : 0;
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
  return make_matrix(std::move(names), rows);
}

void BM_TrainGbdt(benchmark::State& state) {
  std::vector<int> y;
  const FeatureMatrix x = cohort_matrix(std::size_t(state.range(0)), 10, y);
  ModelSpec spec;
  spec.kind = ModelKind::gbdt;
  spec.hp.gbdt.rounds = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(spec, x, y));
  }
}
BENCHMARK(BM_TrainGbdt)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
  std::vector<int> y;
  const FeatureMatrix x = cohort_matrix(std::size_t(state.range(0)), 10, y);
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.hp.forest.n_trees = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(spec, x, y));
  }
}
BENCHMARK(BM_TrainForest)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_PredictGbdt(benchmark::State& state) {
  std::vector<int> y;
  const FeatureMatrix x = cohort_matrix(512, 10, y);
  ModelSpec spec;
  spec.kind = ModelKind::gbdt;
  spec.hp.gbdt.rounds = 200;
  const ModelArtifact model = train(spec, x, y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_proba(model, x));
  }
}
BENCHMARK(BM_PredictGbdt)->Unit(benchmark::kMillisecond);

}  // namespace
