#include <algorithm>
#include <cmath>

#include "ldfs/error.hpp"
#include "ldfs/models.hpp"
#include "ldfs/rng.hpp"

namespace ldfs::detail {

RandomForestModel train_forest(const FeatureMatrix& x, std::span<const int> y,
                               int n_classes, const ForestParams& params,
                               std::uint64_t seed) {
  const std::size_t n = x.n_rows;
  RandomForestModel model;
  model.n_classes = n_classes;

  ClassificationTreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.mtry = params.mtry > 0 ? params.mtry
                            : int(std::floor(std::sqrt(double(x.n_cols))));

  std::vector<double> weights(n);
  for (int t = 0; t < params.n_trees; ++t) {
    // Per-tree stream so results do not depend on build parallelism.
    Rng rng(derive_seed(seed, std::uint64_t(t)));
    if (params.bootstrap) {
      std::fill(weights.begin(), weights.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) weights[rng.uniform_index(n)] += 1.0;
    } else {
      std::fill(weights.begin(), weights.end(), 1.0);
    }
    model.trees.push_back(build_classification_tree(
        x.values, n, x.n_cols, y, n_classes, weights, tp, rng));
  }
  return model;
}

std::vector<double> forest_proba(const RandomForestModel& m,
                                 std::span<const double> row) {
  std::vector<double> out(m.n_classes, 0.0);
  for (const auto& tree : m.trees) {
    const auto dist = tree.predict(row);
    for (int c = 0; c < m.n_classes; ++c) out[c] += dist[c];
  }
  for (double& v : out) v /= double(m.trees.size());
  return out;
}

}  // namespace ldfs::detail
