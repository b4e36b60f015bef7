#include "ldfs/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

namespace {

// Trees of the ensemble with the scale their outputs carry and, for
// multiclass gbdt, which output stream each tree feeds.
struct EnsembleView {
  const std::vector<Tree>* trees = nullptr;
  int n_outputs = 1;
  double scale = 1.0;             // learning_rate or 1/n_trees
  bool per_class_streams = false; // gbdt multiclass: tree t -> output t % K
  std::vector<double> base;       // prior margins added to every prediction
};

EnsembleView ensemble_view(const ModelArtifact& model) {
  EnsembleView v;
  if (const auto* g = std::get_if<GbdtModel>(&model.payload)) {
    v.trees = &g->trees;
    v.n_outputs = g->multiclass ? g->n_classes : 1;
    v.scale = g->learning_rate;
    v.per_class_streams = g->multiclass;
    v.base = g->base_score;
  } else if (const auto* f = std::get_if<RandomForestModel>(&model.payload)) {
    v.trees = &f->trees;
    v.n_outputs = f->n_classes;
    v.scale = f->trees.empty() ? 1.0 : 1.0 / double(f->trees.size());
    v.per_class_streams = false;
    v.base.assign(f->n_classes, 0.0);
  } else {
    raise(errc::not_a_tree_model,
          std::string(model_kind_name(model.kind)) + " is not a tree ensemble");
  }
  for (const auto& t : *v.trees) {
    for (const auto& nd : t.nodes) {
      if (!(nd.cover > 0.0)) {
        raise(errc::missing_cover, "node without positive training cover");
      }
    }
  }
  return v;
}

// Shapley permutation weight s!(d-1-s)!/d!.
double shapley_weight(int s, int d) {
  double w = 1.0 / double(d);
  for (int i = 1; i <= s; ++i) w *= double(i) / double(d - i);
  return w;
}

// Per-feature aggregate of one root->leaf path: `one` is 1 iff the row
// satisfies every split on that feature along the path, `zero` is the
// product of that feature's cover ratios.
struct PathFactor {
  int feature;
  double one;
  double zero;
};

// phi contributions of a single leaf: value * (one_i - zero_i) *
// sum_s w(s, d) * e_s, where e_s are the elementary symmetric sums of the
// other features' (one, zero) factors.
void leaf_contributions(const std::vector<PathFactor>& factors, double value,
                        std::span<double> phi) {
  const int d = int(factors.size());
  if (d == 0) return;
  std::vector<double> poly(std::size_t(d), 0.0);
  for (int i = 0; i < d; ++i) {
    // Build prod_{k != i} (zero_k + one_k x); poly[s] = coeff of x^s.
    poly.assign(std::size_t(d), 0.0);
    poly[0] = 1.0;
    int len = 1;
    for (int k = 0; k < d; ++k) {
      if (k == i) continue;
      for (int s = len; s >= 1; --s) {
        poly[s] = poly[s] * factors[k].zero + poly[s - 1] * factors[k].one;
      }
      poly[0] *= factors[k].zero;
      ++len;
    }
    double sum = 0.0;
    for (int s = 0; s < d; ++s) sum += shapley_weight(s, d) * poly[s];
    phi[factors[i].feature] +=
        value * (factors[i].one - factors[i].zero) * sum;
  }
}

// DFS over root->leaf paths accumulating per-feature factors.
void shap_tree_recurse(const Tree& tree, int node, int output,
                       std::span<const double> row,
                       std::vector<PathFactor>& factors,
                       std::span<double> phi) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.is_leaf()) {
    leaf_contributions(factors, nd.value[output], phi);
    return;
  }
  const bool go_left = std::isnan(row[nd.feature])
                           ? nd.default_left
                           : row[nd.feature] <= nd.threshold;
  for (int side = 0; side < 2; ++side) {
    const int child = side == 0 ? nd.left : nd.right;
    const double ratio = tree.nodes[child].cover / nd.cover;
    const double follow = (side == 0) == go_left ? 1.0 : 0.0;

    // Index, not iterator: the recursion below grows `factors`.
    std::size_t pos = factors.size();
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].feature == nd.feature) {
        pos = i;
        break;
      }
    }
    if (pos == factors.size()) {
      factors.push_back({nd.feature, follow, ratio});
      shap_tree_recurse(tree, child, output, row, factors, phi);
      factors.pop_back();
    } else {
      const PathFactor saved = factors[pos];
      factors[pos].one *= follow;
      factors[pos].zero *= ratio;
      shap_tree_recurse(tree, child, output, row, factors, phi);
      factors[pos] = saved;
    }
  }
}

}  // namespace

ShapAttribution tree_shap(const ModelArtifact& model, const FeatureMatrix& x) {
  const EnsembleView view = ensemble_view(model);
  ShapAttribution out;
  out.n_rows = x.n_rows;
  out.n_features = x.n_cols;
  out.n_outputs = view.n_outputs;
  out.phi.assign(std::size_t(view.n_outputs) * x.n_rows * x.n_cols, 0.0);
  out.base_value = view.base;

  // base_value = prior + scaled cover-weighted leaf expectations.
  for (std::size_t t = 0; t < view.trees->size(); ++t) {
    const Tree& tree = (*view.trees)[t];
    const auto ev = tree.expected_value();
    if (view.per_class_streams) {
      out.base_value[t % view.n_outputs] += view.scale * ev[0];
    } else {
      for (int o = 0; o < view.n_outputs; ++o) {
        out.base_value[o] += view.scale * ev[o];
      }
    }
  }

  std::vector<double> tree_phi(x.n_cols);
  std::vector<PathFactor> factors;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto row = x.row(r);
    for (std::size_t t = 0; t < view.trees->size(); ++t) {
      const Tree& tree = (*view.trees)[t];
      const int first_output = view.per_class_streams ? int(t % view.n_outputs) : 0;
      const int n_out = view.per_class_streams ? 1 : view.n_outputs;
      for (int oo = 0; oo < n_out; ++oo) {
        const int output = view.per_class_streams ? first_output : oo;
        const int tree_output = view.per_class_streams ? 0 : oo;
        std::fill(tree_phi.begin(), tree_phi.end(), 0.0);
        factors.clear();
        shap_tree_recurse(tree, 0, tree_output, row, factors, tree_phi);
        for (std::size_t f = 0; f < x.n_cols; ++f) {
          out.at(output, r, f) += view.scale * tree_phi[f];
        }
      }
    }
  }
  return out;
}

namespace {

// Cover-weighted conditional expectation walk: splits on features in S follow
// the row, others average children by cover.
double walk_expectation(const Tree& tree, int node, int output,
                        std::span<const double> row,
                        const std::vector<char>& in_s) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.is_leaf()) return nd.value[output];
  if (in_s[nd.feature]) {
    const bool go_left = std::isnan(row[nd.feature])
                             ? nd.default_left
                             : row[nd.feature] <= nd.threshold;
    return walk_expectation(tree, go_left ? nd.left : nd.right, output, row, in_s);
  }
  const double wl = tree.nodes[nd.left].cover / nd.cover;
  const double wr = tree.nodes[nd.right].cover / nd.cover;
  return wl * walk_expectation(tree, nd.left, output, row, in_s) +
         wr * walk_expectation(tree, nd.right, output, row, in_s);
}

}  // namespace

std::vector<std::vector<double>> brute_force_shap(const ModelArtifact& model,
                                                  std::span<const double> row,
                                                  ShapBackgroundPolicy) {
  const EnsembleView view = ensemble_view(model);
  const std::size_t n_features = model.feature_names.size();
  if (row.size() != n_features) {
    raise(errc::shape_mismatch, "row width differs from model schema");
  }

  std::vector<int> used;
  {
    std::vector<char> seen(n_features, 0);
    for (const auto& tree : *view.trees) {
      for (const auto& nd : tree.nodes) {
        if (!nd.is_leaf() && !seen[nd.feature]) {
          seen[nd.feature] = 1;
          used.push_back(nd.feature);
        }
      }
    }
    std::sort(used.begin(), used.end());
  }
  const int d = int(used.size());
  if (d > 12) {
    raise(errc::too_many_features,
          std::to_string(d) + " features used; enumeration caps at 12");
  }

  // v(S) per output, summed over the ensemble with scaling/streams applied.
  auto value_of = [&](const std::vector<char>& in_s) {
    std::vector<double> v(view.n_outputs, 0.0);
    for (std::size_t t = 0; t < view.trees->size(); ++t) {
      const Tree& tree = (*view.trees)[t];
      if (view.per_class_streams) {
        v[t % view.n_outputs] +=
            view.scale * walk_expectation(tree, 0, 0, row, in_s);
      } else {
        for (int o = 0; o < view.n_outputs; ++o) {
          v[o] += view.scale * walk_expectation(tree, 0, o, row, in_s);
        }
      }
    }
    return v;
  };

  std::vector<std::vector<double>> phi(
      view.n_outputs, std::vector<double>(n_features, 0.0));
  if (d == 0) return phi;

  // Precompute v over every subset mask of `used`.
  const std::size_t n_masks = std::size_t(1) << d;
  std::vector<std::vector<double>> values(n_masks);
  std::vector<char> in_s(n_features, 0);
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    std::fill(in_s.begin(), in_s.end(), 0);
    for (int b = 0; b < d; ++b) {
      if (mask & (std::size_t(1) << b)) in_s[used[b]] = 1;
    }
    values[mask] = value_of(in_s);
  }

  for (int b = 0; b < d; ++b) {
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (mask & (std::size_t(1) << b)) continue;
      const int s = int(std::popcount(mask));
      const double w = shapley_weight(s, d);
      const std::size_t with = mask | (std::size_t(1) << b);
      for (int o = 0; o < view.n_outputs; ++o) {
        phi[o][used[b]] += w * (values[with][o] - values[mask][o]);
      }
    }
  }
  return phi;
}

ShapSummary shap_summary(const ShapAttribution& attr) {
  ShapSummary out;
  out.mean_abs_phi.assign(attr.n_features, 0.0);
  const std::size_t n_vals = std::size_t(attr.n_outputs) * attr.n_rows;
  if (n_vals == 0 || attr.n_features == 0) return out;
  for (int o = 0; o < attr.n_outputs; ++o) {
    for (std::size_t r = 0; r < attr.n_rows; ++r) {
      for (std::size_t f = 0; f < attr.n_features; ++f) {
        out.mean_abs_phi[f] += std::abs(attr.at(o, r, f));
      }
    }
  }
  for (double& v : out.mean_abs_phi) v /= double(n_vals);
  out.ranking.resize(attr.n_features);
  for (std::size_t f = 0; f < attr.n_features; ++f) out.ranking[f] = f;
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return out.mean_abs_phi[a] > out.mean_abs_phi[b];
                   });
  return out;
}

void write_shap_csv(const std::string& path, const ShapAttribution& attr,
                    const FeatureMatrix& x) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "patient_id,row,class,feature,feature_value,phi,base_value\n";
  for (int o = 0; o < attr.n_outputs; ++o) {
    for (std::size_t r = 0; r < attr.n_rows; ++r) {
      for (std::size_t f = 0; f < attr.n_features; ++f) {
        out << x.patient_ids[r] << ',' << r << ',' << o << ','
            << x.columns[f].name << ',' << csv::format_double(x.at(r, f)) << ','
            << csv::format_double(attr.at(o, r, f)) << ','
            << csv::format_double(attr.base_value[o]) << '\n';
      }
    }
  }
}

void write_shap_summary(const std::string& path, const ShapSummary& summary,
                        std::span<const std::string> feature_names) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "rank,feature,mean_abs_phi\n";
  for (std::size_t i = 0; i < summary.ranking.size(); ++i) {
    const std::size_t f = summary.ranking[i];
    out << i + 1 << ',' << feature_names[f] << ','
        << csv::format_double(summary.mean_abs_phi[f]) << '\n';
  }
}

}  // namespace ldfs
