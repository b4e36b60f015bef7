#pragma once

#include <span>
#include <string>
#include <vector>

#include "ldfs/dataset.hpp"
#include "ldfs/models.hpp"

namespace ldfs {

// Feature attributions in margin space (gbdt: log-odds / per-class softmax
// margins; random forest: per-class probability votes). For every row,
// base_value[o] + sum_f phi[o][row][f] reconstructs the model margin.
struct ShapAttribution {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  int n_outputs = 1;
  std::vector<double> phi;         // [output][row][feature], row-major
  std::vector<double> base_value;  // per output

  double at(int output, std::size_t row, std::size_t feature) const {
    return phi[(std::size_t(output) * n_rows + row) * n_features + feature];
  }
  double& at(int output, std::size_t row, std::size_t feature) {
    return phi[(std::size_t(output) * n_rows + row) * n_features + feature];
  }
};

// Exact path-dependent TreeSHAP: expectations follow the tree's own
// cover-weighted paths; no background matrix. Throws NotATreeModel,
// MissingCover.
ShapAttribution tree_shap(const ModelArtifact& model, const FeatureMatrix& x);

// Expectation convention shared with tree_shap (single value function
// definition; the enumeration below cross-checks the polynomial algorithm).
enum class ShapBackgroundPolicy { path_dependent_cover };

// Exact Shapley values by full subset enumeration over the ensemble's used
// features (2^d walks); requires <= 12 used features. Returns
// [output][feature]. Throws TooManyFeatures, MissingCover, NotATreeModel.
std::vector<std::vector<double>> brute_force_shap(
    const ModelArtifact& model, std::span<const double> row,
    ShapBackgroundPolicy policy = ShapBackgroundPolicy::path_dependent_cover);

struct ShapSummary {
  std::vector<std::size_t> ranking;   // feature indices, descending mean |phi|
  std::vector<double> mean_abs_phi;   // per feature, pooled over outputs/rows
};

ShapSummary shap_summary(const ShapAttribution& attr);

// Fig-5-style per-class scatter rows: patient, row, class, feature,
// feature value, phi, base value.
void write_shap_csv(const std::string& path, const ShapAttribution& attr,
                    const FeatureMatrix& x);
void write_shap_summary(const std::string& path, const ShapSummary& summary,
                        std::span<const std::string> feature_names);

}  // namespace ldfs
