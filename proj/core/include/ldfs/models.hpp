#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ldfs/dataset.hpp"
#include "ldfs/models/tree.hpp"

namespace ldfs {

enum class ModelKind { gbdt, random_forest, linear_svm, mlp };
enum class Task { binary, multiclass };

const char* model_kind_name(ModelKind k) noexcept;
ModelKind parse_model_kind(const std::string& name);
const char* task_name(Task t) noexcept;
Task parse_task(const std::string& name);

struct GbdtParams {
  int rounds = 200;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_leaf = 5;
  double l2 = 1.0;
};

struct ForestParams {
  int n_trees = 200;
  int max_depth = 12;
  int min_leaf = 1;
  int mtry = 0;  // 0 = floor(sqrt(d))
  bool bootstrap = true;
};

struct SvmParams {
  double lambda = 1e-2;
  int epochs = 200;
};

struct MlpParams {
  int hidden1 = 64;
  int hidden2 = 32;
  double dropout = 0.2;
  int epochs = 200;
  int batch = 16;
  double lr = 0.01;
  double momentum = 0.9;
};

struct Hyperparams {
  GbdtParams gbdt;
  ForestParams forest;
  SvmParams svm;
  MlpParams mlp;
};

// Gradient-boosted trees: margin = base_score + learning_rate * sum of tree
// outputs; binary probability via the logistic map, multiclass via softmax.
// Trees are stored round-major (round r, class k at index r*K + k).
struct GbdtModel {
  int n_classes = 2;
  bool multiclass = false;  // false: single margin, logistic
  std::vector<double> base_score;  // size 1 or K (prior log-odds / log-priors)
  double learning_rate = 0.1;
  std::vector<Tree> trees;

  std::vector<double> margins(std::span<const double> row) const;
};

struct RandomForestModel {
  int n_classes = 2;
  std::vector<Tree> trees;  // leaves hold class distributions
};

// L2-regularized hinge loss, deterministic full-batch subgradient descent,
// with Platt logistic calibration of the decision scores. Multiclass is
// one-vs-rest with normalized calibrated probabilities. Features are
// standardized internally (train-split mean/std stored here).
struct LinearSvmModel {
  int n_classes = 2;
  std::size_t n_features = 0;
  std::vector<double> weights;  // n_machines x d, row-major
  std::vector<double> bias;     // n_machines
  std::vector<double> platt_a, platt_b;
  std::vector<double> feat_mean, feat_std;
};

// Two hidden layers with layer normalization + ReLU (+ dropout while
// training), logistic or softmax output. Standardizes features internally.
struct MlpModel {
  int n_in = 0, h1 = 0, h2 = 0, n_out = 1;
  std::vector<double> w1, b1, g1, be1;  // dense + layernorm params
  std::vector<double> w2, b2, g2, be2;
  std::vector<double> w3, b3;
  std::vector<double> feat_mean, feat_std;
};

struct ModelSpec {
  ModelKind kind = ModelKind::gbdt;
  Task task = Task::binary;
  Hyperparams hp;
  std::uint64_t seed = 0;
};

struct ModelArtifact {
  ModelKind kind = ModelKind::gbdt;
  Task task = Task::binary;
  int n_classes = 2;
  std::vector<std::string> feature_names;
  std::vector<ColumnMeta> encoders;
  Hyperparams hp;
  std::uint64_t seed = 0;
  std::variant<GbdtModel, RandomForestModel, LinearSvmModel, MlpModel> payload;
};

// Trains per spec. Throws DegenerateLabels, ShapeMismatch, NonFiniteFeature.
ModelArtifact train(const ModelSpec& spec, const FeatureMatrix& x,
                    std::span<const int> y);

// Row-major n x n_classes probabilities. Columns of x are aligned to the
// model's feature_names by name; throws SchemaMismatch on missing/extra.
std::vector<double> predict_proba(const ModelArtifact& model,
                                  const FeatureMatrix& x);
// Argmax with lowest-class-index tie-break.
std::vector<int> predict_label(const ModelArtifact& model,
                               const FeatureMatrix& x);

struct FeatureImportance {
  std::vector<std::string> feature_names;
  std::vector<double> gain_fraction;  // sums to 1 when any split exists
  std::vector<std::int64_t> split_count;
};

// gbdt / random_forest only; throws NotATreeModel.
FeatureImportance feature_importance(const ModelArtifact& model);

// Versioned structured-text (JSON) model file. Round-trips bit-exactly.
// Throws VersionMismatch, CorruptPayload.
std::string serialize_model(const ModelArtifact& model);
ModelArtifact deserialize_model(const std::string& payload);
void save_model(const std::string& path, const ModelArtifact& model);
ModelArtifact load_model(const std::string& path);

// Internals shared by training and tests.
namespace detail {
std::vector<double> standardize_fit_mean(const FeatureMatrix& x);
std::vector<double> standardize_fit_std(const FeatureMatrix& x,
                                        std::span<const double> mean);

GbdtModel train_gbdt(const FeatureMatrix& x, std::span<const int> y,
                     bool multiclass, int n_classes, const GbdtParams& params);
RandomForestModel train_forest(const FeatureMatrix& x, std::span<const int> y,
                               int n_classes, const ForestParams& params,
                               std::uint64_t seed);
LinearSvmModel train_svm(const FeatureMatrix& x, std::span<const int> y,
                         int n_classes, const SvmParams& params);
MlpModel train_mlp(const FeatureMatrix& x, std::span<const int> y,
                   int n_classes, bool multiclass, const MlpParams& params,
                   std::uint64_t seed);

std::vector<double> gbdt_proba(const GbdtModel& m, std::span<const double> row);
std::vector<double> forest_proba(const RandomForestModel& m,
                                 std::span<const double> row);
std::vector<double> svm_proba(const LinearSvmModel& m,
                              std::span<const double> row);
std::vector<double> mlp_proba(const MlpModel& m, std::span<const double> row);

// Mean cross-entropy of the training objective and its gradient w.r.t. every
// parameter (flattened in declaration order), dropout off. Used by the
// finite-difference gradient check.
double mlp_loss(const MlpModel& m, const FeatureMatrix& x,
                std::span<const int> y, bool multiclass);
std::vector<double> mlp_loss_gradient(const MlpModel& m, const FeatureMatrix& x,
                                      std::span<const int> y, bool multiclass);
std::vector<double*> mlp_param_ptrs(MlpModel& m);
double gbdt_train_logloss(const GbdtModel& m, const FeatureMatrix& x,
                          std::span<const int> y, int upto_round);
}  // namespace detail

}  // namespace ldfs
