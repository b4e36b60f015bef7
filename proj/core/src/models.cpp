#include "ldfs/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

const char* model_kind_name(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::gbdt: return "gbdt";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::linear_svm: return "linear_svm";
    case ModelKind::mlp: return "mlp";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  const std::string v = csv::to_lower(csv::trim(name));
  if (v == "gbdt" || v == "gradient_boosting" || v == "gb") return ModelKind::gbdt;
  if (v == "random_forest" || v == "rf" || v == "forest") {
    return ModelKind::random_forest;
  }
  if (v == "linear_svm" || v == "svm") return ModelKind::linear_svm;
  if (v == "mlp") return ModelKind::mlp;
  raise(errc::config_error, "unknown model kind '" + name + "'");
}

const char* task_name(Task t) noexcept {
  return t == Task::binary ? "binary" : "multiclass";
}

Task parse_task(const std::string& name) {
  const std::string v = csv::to_lower(csv::trim(name));
  if (v == "binary") return Task::binary;
  if (v == "multiclass" || v == "multi-class" || v == "multi") {
    return Task::multiclass;
  }
  raise(errc::config_error, "unknown task '" + name + "'");
}

namespace {

int validate_training_inputs(const ModelSpec& spec, const FeatureMatrix& x,
                             std::span<const int> y) {
  if (y.size() != x.n_rows) {
    raise(errc::shape_mismatch,
          "labels (" + std::to_string(y.size()) + ") vs rows (" +
              std::to_string(x.n_rows) + ")");
  }
  if (x.n_rows < 2) raise(errc::too_few_rows, "training needs >= 2 rows");
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    if (!std::isfinite(x.values[i])) {
      raise(errc::non_finite_feature,
            "row " + std::to_string(i / x.n_cols) + ", column '" +
                x.columns[i % x.n_cols].name + "'");
    }
  }
  int max_label = 0;
  for (int v : y) {
    if (v < 0) raise(errc::shape_mismatch, "negative label");
    max_label = std::max(max_label, v);
  }
  const int k = spec.task == Task::binary ? 2 : max_label + 1;
  std::vector<std::size_t> counts(k, 0);
  for (int v : y) {
    if (v >= k) raise(errc::shape_mismatch, "label outside 0..k-1");
    ++counts[v];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      raise(errc::degenerate_labels,
            "class " + std::to_string(c) + " has no training rows");
    }
  }
  if (spec.task == Task::multiclass && k < 2) {
    raise(errc::degenerate_labels, "multiclass needs >= 2 classes");
  }
  return k;
}

}  // namespace

ModelArtifact train(const ModelSpec& spec, const FeatureMatrix& x,
                    std::span<const int> y) {
  const int k = validate_training_inputs(spec, x, y);

  ModelArtifact artifact;
  artifact.kind = spec.kind;
  artifact.task = spec.task;
  artifact.n_classes = k;
  artifact.feature_names = x.column_names();
  artifact.encoders = x.columns;
  artifact.hp = spec.hp;
  artifact.seed = spec.seed;

  switch (spec.kind) {
    case ModelKind::gbdt:
      artifact.payload = detail::train_gbdt(x, y, spec.task == Task::multiclass,
                                            k, spec.hp.gbdt);
      break;
    case ModelKind::random_forest:
      artifact.payload = detail::train_forest(x, y, k, spec.hp.forest, spec.seed);
      break;
    case ModelKind::linear_svm:
      artifact.payload = detail::train_svm(x, y, k, spec.hp.svm);
      break;
    case ModelKind::mlp:
      artifact.payload = detail::train_mlp(x, y, k, spec.task == Task::multiclass,
                                           spec.hp.mlp, spec.seed);
      break;
  }
  return artifact;
}

namespace {

// Permutation aligning x's columns to the model's feature order.
std::vector<std::size_t> align_columns(const ModelArtifact& model,
                                       const FeatureMatrix& x) {
  if (x.n_cols != model.feature_names.size()) {
    raise(errc::schema_mismatch,
          "model expects " + std::to_string(model.feature_names.size()) +
              " columns, matrix has " + std::to_string(x.n_cols));
  }
  std::vector<std::size_t> perm(model.feature_names.size());
  for (std::size_t i = 0; i < model.feature_names.size(); ++i) {
    const int c = x.column_index(model.feature_names[i]);
    if (c < 0) {
      raise(errc::schema_mismatch,
            "missing column '" + model.feature_names[i] + "'");
    }
    perm[i] = std::size_t(c);
  }
  return perm;
}

}  // namespace

std::vector<double> predict_proba(const ModelArtifact& model,
                                  const FeatureMatrix& x) {
  const auto perm = align_columns(model, x);
  const int k = model.n_classes;
  std::vector<double> out(x.n_rows * std::size_t(k));
  std::vector<double> row(model.feature_names.size());
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    for (std::size_t c = 0; c < perm.size(); ++c) row[c] = x.at(r, perm[c]);
    std::vector<double> p;
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, GbdtModel>) {
            p = detail::gbdt_proba(m, row);
          } else if constexpr (std::is_same_v<T, RandomForestModel>) {
            p = detail::forest_proba(m, row);
          } else if constexpr (std::is_same_v<T, LinearSvmModel>) {
            p = detail::svm_proba(m, row);
          } else {
            p = detail::mlp_proba(m, row);
          }
        },
        model.payload);
    std::copy(p.begin(), p.end(), out.begin() + r * k);
  }
  return out;
}

std::vector<int> predict_label(const ModelArtifact& model,
                               const FeatureMatrix& x) {
  const auto proba = predict_proba(model, x);
  const int k = model.n_classes;
  std::vector<int> out(x.n_rows);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (proba[r * k + c] > proba[r * k + best]) best = c;
    }
    out[r] = best;
  }
  return out;
}

FeatureImportance feature_importance(const ModelArtifact& model) {
  const std::vector<Tree>* trees = nullptr;
  if (const auto* g = std::get_if<GbdtModel>(&model.payload)) {
    trees = &g->trees;
  } else if (const auto* f = std::get_if<RandomForestModel>(&model.payload)) {
    trees = &f->trees;
  } else {
    raise(errc::not_a_tree_model,
          std::string(model_kind_name(model.kind)) +
              " has no split-based importances");
  }
  FeatureImportance out;
  out.feature_names = model.feature_names;
  out.gain_fraction.assign(model.feature_names.size(), 0.0);
  out.split_count.assign(model.feature_names.size(), 0);
  double total_gain = 0.0;
  for (const auto& tree : *trees) {
    for (const auto& nd : tree.nodes) {
      if (nd.is_leaf()) continue;
      out.gain_fraction[nd.feature] += nd.gain;
      out.split_count[nd.feature] += 1;
      total_gain += nd.gain;
    }
  }
  if (total_gain > 0.0) {
    for (double& g : out.gain_fraction) g /= total_gain;
  }
  return out;
}

}  // namespace ldfs
