#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ldfs {

struct TreeNode {
  int feature = -1;  // split column; -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  bool default_left = true;  // routing for missing values
  double cover = 0.0;        // training weight reaching the node
  double gain = 0.0;         // split gain (importance bookkeeping)
  std::vector<double> value; // leaf payload, size n_outputs

  bool is_leaf() const { return feature < 0; }
};

// Binary decision tree over numeric features. Routing: go left iff
// x[feature] <= threshold; NaN follows default_left.
struct Tree {
  int n_outputs = 1;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int descend(std::span<const double> row) const;
  // Leaf payload for a row (size n_outputs).
  std::span<const double> predict(std::span<const double> row) const;
  // Cover-weighted expectation of the leaf payload, one value per output.
  std::vector<double> expected_value() const;
};

// Exact greedy regression tree on (gradient, hessian) pairs; leaf value is
// the Newton step -G/(H + l2). Thresholds sit at midpoints of consecutive
// distinct sorted values; gain ties resolve to the lowest feature index and
// lowest threshold.
struct RegressionTreeParams {
  int max_depth = 3;
  int min_leaf = 5;      // minimum samples per side
  double l2 = 1.0;       // leaf regularization
  double min_gain = 1e-12;
};

Tree build_regression_tree(std::span<const double> x_rowmajor,
                           std::size_t n_rows, std::size_t n_cols,
                           std::span<const double> grad,
                           std::span<const double> hess,
                           const RegressionTreeParams& params);

// Gini classification tree with optional per-split feature subsampling
// (mtry > 0) and per-sample integer weights (bootstrap counts). Leaves hold
// the weighted class distribution (size n_classes).
struct ClassificationTreeParams {
  int max_depth = 12;
  int min_leaf = 1;
  int mtry = 0;  // 0 = all features
  double min_gain = 1e-12;
};

class Rng;

Tree build_classification_tree(std::span<const double> x_rowmajor,
                               std::size_t n_rows, std::size_t n_cols,
                               std::span<const int> y, int n_classes,
                               std::span<const double> weights,
                               const ClassificationTreeParams& params,
                               Rng& rng);

}  // namespace ldfs
