#include <algorithm>
#include <cmath>

#include "ldfs/error.hpp"
#include "ldfs/models.hpp"

namespace ldfs {

namespace {

double logistic(double m) { return 1.0 / (1.0 + std::exp(-m)); }

void softmax_inplace(std::vector<double>& m) {
  const double mx = *std::max_element(m.begin(), m.end());
  double sum = 0.0;
  for (double& v : m) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : m) v /= sum;
}

}  // namespace

std::vector<double> GbdtModel::margins(std::span<const double> row) const {
  if (!multiclass) {
    double m = base_score[0];
    for (const auto& t : trees) m += learning_rate * t.predict(row)[0];
    return {m};
  }
  std::vector<double> out(base_score);
  const int k = n_classes;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    out[t % k] += learning_rate * trees[t].predict(row)[0];
  }
  return out;
}

namespace detail {

std::vector<double> gbdt_proba(const GbdtModel& m, std::span<const double> row) {
  auto margins = m.margins(row);
  if (!m.multiclass) {
    const double p = logistic(margins[0]);
    return {1.0 - p, p};
  }
  softmax_inplace(margins);
  return margins;
}

GbdtModel train_gbdt(const FeatureMatrix& x, std::span<const int> y,
                     bool multiclass, int n_classes, const GbdtParams& params) {
  const std::size_t n = x.n_rows;
  GbdtModel model;
  model.n_classes = n_classes;
  model.multiclass = multiclass;
  model.learning_rate = params.learning_rate;

  RegressionTreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.l2 = params.l2;

  if (!multiclass) {
    std::size_t pos = 0;
    for (int v : y) pos += v == 1;
    // Prior log-odds; eps keeps the degenerate guard upstream honest.
    const double p = double(pos) / double(n);
    model.base_score = {std::log(p / (1.0 - p))};

    std::vector<double> margin(n, model.base_score[0]);
    std::vector<double> grad(n), hess(n);
    for (int round = 0; round < params.rounds; ++round) {
      for (std::size_t i = 0; i < n; ++i) {
        const double pi = logistic(margin[i]);
        grad[i] = pi - double(y[i]);
        hess[i] = pi * (1.0 - pi);
      }
      Tree tree = build_regression_tree(x.values, n, x.n_cols, grad, hess, tp);
      for (std::size_t i = 0; i < n; ++i) {
        margin[i] += params.learning_rate * tree.predict(x.row(i))[0];
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  }

  const int k = n_classes;
  std::vector<double> prior(k, 0.0);
  for (int v : y) prior[v] += 1.0;
  model.base_score.resize(k);
  for (int c = 0; c < k; ++c) {
    model.base_score[c] = std::log(prior[c] / double(n));
  }

  std::vector<double> margin(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) margin[i * k + c] = model.base_score[c];
  }
  std::vector<double> grad(n), hess(n), prob(k);
  for (int round = 0; round < params.rounds; ++round) {
    std::vector<std::vector<double>> probs(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> m(margin.begin() + i * k, margin.begin() + (i + 1) * k);
      softmax_inplace(m);
      probs[i] = std::move(m);
    }
    for (int c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        const double pi = probs[i][c];
        grad[i] = pi - (y[i] == c ? 1.0 : 0.0);
        hess[i] = pi * (1.0 - pi);
      }
      Tree tree = build_regression_tree(x.values, n, x.n_cols, grad, hess, tp);
      for (std::size_t i = 0; i < n; ++i) {
        margin[i * k + c] += params.learning_rate * tree.predict(x.row(i))[0];
      }
      model.trees.push_back(std::move(tree));
    }
  }
  return model;
}

double gbdt_train_logloss(const GbdtModel& m, const FeatureMatrix& x,
                          std::span<const int> y, int upto_round) {
  const std::size_t n = x.n_rows;
  const int k = m.n_classes;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.multiclass) {
      double margin = m.base_score[0];
      for (int t = 0; t < upto_round && t < int(m.trees.size()); ++t) {
        margin += m.learning_rate * m.trees[t].predict(x.row(i))[0];
      }
      const double p = logistic(margin);
      const double py = y[i] == 1 ? p : 1.0 - p;
      loss += -std::log(std::max(py, 1e-300));
    } else {
      std::vector<double> margins(m.base_score);
      const int upto = upto_round * k;
      for (int t = 0; t < upto && t < int(m.trees.size()); ++t) {
        margins[t % k] += m.learning_rate * m.trees[t].predict(x.row(i))[0];
      }
      softmax_inplace(margins);
      loss += -std::log(std::max(margins[y[i]], 1e-300));
    }
  }
  return loss / double(n);
}

}  // namespace detail
}  // namespace ldfs
