#include "ldfs/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldfs/error.hpp"
#include "ldfs/rng.hpp"

namespace ldfs {

int Tree::descend(std::span<const double> row) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& nd = nodes[node];
    const double v = row[nd.feature];
    if (std::isnan(v)) {
      node = nd.default_left ? nd.left : nd.right;
    } else {
      node = v <= nd.threshold ? nd.left : nd.right;
    }
  }
  return node;
}

std::span<const double> Tree::predict(std::span<const double> row) const {
  return nodes[descend(row)].value;
}

std::vector<double> Tree::expected_value() const {
  std::vector<double> out(n_outputs, 0.0);
  const double total = nodes[0].cover;
  for (const auto& nd : nodes) {
    if (!nd.is_leaf()) continue;
    for (int o = 0; o < n_outputs; ++o) {
      out[o] += nd.value[o] * nd.cover / total;
    }
  }
  return out;
}

namespace {

struct SortEntry {
  double x;
  std::size_t row;
};

struct BestSplit {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool valid() const { return feature >= 0; }
};

}  // namespace

Tree build_regression_tree(std::span<const double> x, std::size_t n_rows,
                           std::size_t n_cols, std::span<const double> grad,
                           std::span<const double> hess,
                           const RegressionTreeParams& params) {
  Tree tree;
  tree.n_outputs = 1;

  struct Work {
    int node;
    std::vector<std::size_t> rows;
    int depth;
  };

  auto make_node = [&](const std::vector<std::size_t>& rows) {
    double g = 0.0, h = 0.0;
    for (std::size_t r : rows) {
      g += grad[r];
      h += hess[r];
    }
    TreeNode nd;
    nd.cover = double(rows.size());
    nd.value = {-g / (h + params.l2)};
    tree.nodes.push_back(std::move(nd));
    return std::pair<int, std::pair<double, double>>{int(tree.nodes.size()) - 1,
                                                     {g, h}};
  };

  std::vector<std::size_t> all(n_rows);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto [root, root_gh] = make_node(all);
  std::vector<Work> stack{{root, std::move(all), 0}};

  std::vector<SortEntry> sorted;
  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    const auto& rows = w.rows;
    if (w.depth >= params.max_depth ||
        rows.size() < std::size_t(2 * params.min_leaf)) {
      continue;
    }

    double g_total = 0.0, h_total = 0.0;
    for (std::size_t r : rows) {
      g_total += grad[r];
      h_total += hess[r];
    }
    const double score_parent =
        g_total * g_total / (h_total + params.l2);

    BestSplit best;
    for (std::size_t c = 0; c < n_cols; ++c) {
      sorted.clear();
      for (std::size_t r : rows) sorted.push_back({x[r * n_cols + c], r});
      std::sort(sorted.begin(), sorted.end(),
                [](const SortEntry& a, const SortEntry& b) { return a.x < b.x; });

      double gl = 0.0, hl = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        gl += grad[sorted[i].row];
        hl += hess[sorted[i].row];
        if (sorted[i + 1].x == sorted[i].x) continue;  // no cut between equals
        const std::size_t n_left = i + 1;
        const std::size_t n_right = sorted.size() - n_left;
        if (n_left < std::size_t(params.min_leaf) ||
            n_right < std::size_t(params.min_leaf)) {
          continue;
        }
        const double gr = g_total - gl;
        const double hr = h_total - hl;
        const double gain = 0.5 * (gl * gl / (hl + params.l2) +
                                   gr * gr / (hr + params.l2) - score_parent);
        if (gain > best.gain + params.min_gain) {
          best.gain = gain;
          best.feature = int(c);
          best.threshold = 0.5 * (sorted[i].x + sorted[i + 1].x);
        }
      }
    }
    if (!best.valid()) continue;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      (x[r * n_cols + best.feature] <= best.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    auto [left, lgh] = make_node(left_rows);
    auto [right, rgh] = make_node(right_rows);
    TreeNode& nd = tree.nodes[w.node];
    nd.feature = best.feature;
    nd.threshold = best.threshold;
    nd.gain = best.gain;
    nd.left = left;
    nd.right = right;
    nd.default_left = left_rows.size() >= right_rows.size();
    nd.value.clear();
    stack.push_back({right, std::move(right_rows), w.depth + 1});
    stack.push_back({left, std::move(left_rows), w.depth + 1});
  }
  return tree;
}

Tree build_classification_tree(std::span<const double> x, std::size_t n_rows,
                               std::size_t n_cols, std::span<const int> y,
                               int n_classes, std::span<const double> weights,
                               const ClassificationTreeParams& params,
                               Rng& rng) {
  Tree tree;
  tree.n_outputs = n_classes;

  auto gini = [&](const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : counts) s += (c / total) * (c / total);
    return 1.0 - s;
  };

  auto make_node = [&](const std::vector<std::size_t>& rows) {
    std::vector<double> counts(n_classes, 0.0);
    double total = 0.0;
    for (std::size_t r : rows) {
      counts[y[r]] += weights[r];
      total += weights[r];
    }
    TreeNode nd;
    nd.cover = total;
    nd.value.resize(n_classes, 0.0);
    for (int c = 0; c < n_classes; ++c) {
      nd.value[c] = total > 0.0 ? counts[c] / total : 1.0 / n_classes;
    }
    tree.nodes.push_back(std::move(nd));
    return int(tree.nodes.size()) - 1;
  };

  struct Work {
    int node;
    std::vector<std::size_t> rows;
    int depth;
  };
  std::vector<std::size_t> all;
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (weights[r] > 0.0) all.push_back(r);
  }
  const int root = make_node(all);
  std::vector<Work> stack{{root, std::move(all), 0}};

  std::vector<SortEntry> sorted;
  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    const auto& rows = w.rows;
    if (w.depth >= params.max_depth ||
        rows.size() < std::size_t(2 * params.min_leaf)) {
      continue;
    }

    std::vector<double> total_counts(n_classes, 0.0);
    double total_w = 0.0;
    for (std::size_t r : rows) {
      total_counts[y[r]] += weights[r];
      total_w += weights[r];
    }
    const double parent_impurity = gini(total_counts, total_w);
    if (parent_impurity <= 0.0) continue;  // pure node

    // Candidate features: all, or an mtry-subset sampled without replacement.
    std::vector<std::size_t> features(n_cols);
    std::iota(features.begin(), features.end(), std::size_t{0});
    if (params.mtry > 0 && std::size_t(params.mtry) < n_cols) {
      for (int i = 0; i < params.mtry; ++i) {
        const std::size_t j = i + rng.uniform_index(n_cols - i);
        std::swap(features[i], features[j]);
      }
      features.resize(params.mtry);
      std::sort(features.begin(), features.end());
    }

    BestSplit best;
    std::vector<double> left_counts(n_classes);
    for (std::size_t c : features) {
      sorted.clear();
      for (std::size_t r : rows) sorted.push_back({x[r * n_cols + c], r});
      std::sort(sorted.begin(), sorted.end(),
                [](const SortEntry& a, const SortEntry& b) { return a.x < b.x; });

      std::fill(left_counts.begin(), left_counts.end(), 0.0);
      double left_w = 0.0;
      std::size_t left_n = 0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const std::size_t r = sorted[i].row;
        left_counts[y[r]] += weights[r];
        left_w += weights[r];
        ++left_n;
        if (sorted[i + 1].x == sorted[i].x) continue;
        const std::size_t right_n = sorted.size() - left_n;
        if (left_n < std::size_t(params.min_leaf) ||
            right_n < std::size_t(params.min_leaf)) {
          continue;
        }
        const double right_w = total_w - left_w;
        if (left_w <= 0.0 || right_w <= 0.0) continue;
        std::vector<double> right_counts(n_classes);
        for (int k = 0; k < n_classes; ++k) {
          right_counts[k] = total_counts[k] - left_counts[k];
        }
        // Weighted impurity decrease.
        const double gain =
            total_w * parent_impurity - left_w * gini(left_counts, left_w) -
            right_w * gini(right_counts, right_w);
        if (gain > best.gain + params.min_gain) {
          best.gain = gain;
          best.feature = int(c);
          best.threshold = 0.5 * (sorted[i].x + sorted[i + 1].x);
        }
      }
    }
    if (!best.valid()) continue;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      (x[r * n_cols + best.feature] <= best.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    const int left = make_node(left_rows);
    const int right = make_node(right_rows);
    TreeNode& nd = tree.nodes[w.node];
    nd.feature = best.feature;
    nd.threshold = best.threshold;
    nd.gain = best.gain;
    nd.left = left;
    nd.right = right;
    nd.default_left = tree.nodes[left].cover >= tree.nodes[right].cover;
    stack.push_back({right, std::move(right_rows), w.depth + 1});
    stack.push_back({left, std::move(left_rows), w.depth + 1});
  }
  return tree;
}

}  // namespace ldfs
