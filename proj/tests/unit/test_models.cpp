#include <cmath>

#include <doctest.h>

#include "ldfs/models.hpp"
#include "ldfs/rng.hpp"
#include "test_helpers.hpp"

using namespace ldfs;

namespace {

ModelSpec gbdt_spec(int rounds, int depth, double lr, int min_leaf,
                    Task task = Task::binary, std::uint64_t seed = 0) {
  ModelSpec spec;
  spec.kind = ModelKind::gbdt;
  spec.task = task;
  spec.seed = seed;
  spec.hp.gbdt.rounds = rounds;
  spec.hp.gbdt.max_depth = depth;
  spec.hp.gbdt.learning_rate = lr;
  spec.hp.gbdt.min_leaf = min_leaf;
  return spec;
}

FeatureMatrix random_matrix(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& r : rows) {
    for (auto& v : r) v = rng.normal();
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
  return make_matrix(std::move(names), rows);
}

std::vector<int> labels_from_rule(const FeatureMatrix& x) {
  std::vector<int> y(x.n_rows);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto row = x.row(r);
    const double s = row[0] + 0.5 * row[1 % x.n_cols];
    y[r] = s > 0.0 ? 1 : 0;
  }
  return y;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("gbdt separates the 1-D toy with a single stump per round") {
  const FeatureMatrix x = make_matrix({"x"}, {{1}, {2}, {3}, {4}});
  const std::vector<int> y = {0, 0, 1, 1};
  const ModelArtifact model = train(gbdt_spec(10, 1, 0.3, 1), x, y);
  const auto pred = predict_label(model, x);
  CHECK(pred == y);

  // Every tree is a stump at the midpoint threshold 2.5.
  const auto& gbdt = std::get<GbdtModel>(model.payload);
  for (const auto& tree : gbdt.trees) {
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].threshold == 2.5);
  }
}

TEST_CASE("zero rounds predict the prior probability everywhere") {
  // 3 positives of 10 -> p = 0.30 from the prior log-odds alone.
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({double(i)});
    y.push_back(i < 3 ? 1 : 0);
  }
  const FeatureMatrix x = make_matrix({"x"}, rows);
  const ModelArtifact model = train(gbdt_spec(0, 3, 0.1, 5), x, y);
  const auto proba = predict_proba(model, x);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    CHECK(proba[r * 2 + 1] == doctest::Approx(0.30).epsilon(1e-12));
  }
}

TEST_CASE("single-class labels are degenerate") {
  const FeatureMatrix x = make_matrix({"x"}, {{1}, {2}, {3}});
  const std::vector<int> y = {0, 0, 0};
  CHECK(testutil::thrown_code([&] { train(gbdt_spec(5, 2, 0.1, 1), x, y); }) ==
        errc::degenerate_labels);
}

TEST_CASE("shape and finiteness guards") {
  const FeatureMatrix x = make_matrix({"x"}, {{1}, {2}});
  CHECK(testutil::thrown_code([&] {
          train(gbdt_spec(1, 1, 0.1, 1), x, std::vector<int>{0});
        }) == errc::shape_mismatch);
  FeatureMatrix bad = x;
  bad.at(0, 0) = std::nan("");
  CHECK(testutil::thrown_code([&] {
          train(gbdt_spec(1, 1, 0.1, 1), bad, std::vector<int>{0, 1});
        }) == errc::non_finite_feature);
}

TEST_CASE("balanced prior gives probability one half with no trees") {
  const FeatureMatrix x = make_matrix({"x"}, {{1}, {2}});
  const ModelArtifact model = train(gbdt_spec(0, 1, 0.1, 1), x, std::vector<int>{0, 1});
  const auto proba = predict_proba(model, x);
  CHECK(proba[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(proba[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("multiclass probabilities sum to one") {
  Rng rng(40);
  const FeatureMatrix x = random_matrix(rng, 60, 4);
  std::vector<int> y(60);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = int(i % 3);
  const ModelArtifact model =
      train(gbdt_spec(20, 2, 0.2, 2, Task::multiclass), x, y);
  const auto proba = predict_proba(model, x);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) sum += proba[r * 3 + c];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("prediction requires the training schema") {
  const FeatureMatrix x = make_matrix({"a", "b"}, {{1, 2}, {3, 4}});
  const ModelArtifact model = train(gbdt_spec(2, 1, 0.1, 1), x, std::vector<int>{0, 1});
  FeatureMatrix renamed = x;
  renamed.columns[0].name = "zzz";
  CHECK(testutil::thrown_code([&] { predict_proba(model, renamed); }) ==
        errc::schema_mismatch);
}

TEST_CASE("training log-loss never increases over rounds (50 datasets)") {
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + rng.uniform_index(30);
    const std::size_t d = 1 + rng.uniform_index(4);
    const FeatureMatrix x = random_matrix(rng, n, d);
    std::vector<int> y(n);
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < 0.5 ? 1 : 0;
      (y[i] ? pos : neg) = true;
    }
    if (!pos || !neg) continue;
    const double lr = trial % 2 == 0 ? 0.1 : 1.0;
    const ModelSpec spec = gbdt_spec(12, 2, lr, 1);
    const ModelArtifact model = train(spec, x, y);
    const auto& gbdt = std::get<GbdtModel>(model.payload);
    double prev = detail::gbdt_train_logloss(gbdt, x, y, 0);
    for (int round = 1; round <= 12; ++round) {
      const double cur = detail::gbdt_train_logloss(gbdt, x, y, round);
      CHECK(cur <= prev + 1e-10);
      prev = cur;
    }
  }
}

TEST_CASE("monotone affine feature transforms leave tree labels unchanged") {
  Rng rng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureMatrix x = random_matrix(rng, 40, 3);
    const std::vector<int> y = labels_from_rule(x);
    bool pos = false, neg = false;
    for (int v : y) (v ? pos : neg) = true;
    if (!pos || !neg) continue;

    FeatureMatrix warped = x;
    const double a = 2.5, b = -7.0;  // strictly increasing affine map
    for (std::size_t r = 0; r < x.n_rows; ++r) warped.at(r, 1) = a * x.at(r, 1) + b;

    const FeatureMatrix test = random_matrix(rng, 25, 3);
    FeatureMatrix test_warped = test;
    for (std::size_t r = 0; r < test.n_rows; ++r) {
      test_warped.at(r, 1) = a * test.at(r, 1) + b;
    }

    const ModelSpec spec = gbdt_spec(15, 3, 0.2, 2);
    const ModelArtifact m1 = train(spec, x, y);
    const ModelArtifact m2 = train(spec, warped, y);
    CHECK(predict_label(m1, test) == predict_label(m2, test_warped));

    ModelSpec rf_spec;
    rf_spec.kind = ModelKind::random_forest;
    rf_spec.hp.forest.n_trees = 20;
    rf_spec.hp.forest.mtry = 3;
    rf_spec.seed = 5;
    const ModelArtifact f1 = train(rf_spec, x, y);
    const ModelArtifact f2 = train(rf_spec, warped, y);
    CHECK(predict_label(f1, test) == predict_label(f2, test_warped));
  }
}

TEST_CASE("same seed trains to identical serialized bytes") {
  Rng rng(2);
  const FeatureMatrix x = random_matrix(rng, 30, 4);
  const std::vector<int> y = labels_from_rule(x);
  for (ModelKind kind : {ModelKind::gbdt, ModelKind::random_forest,
                         ModelKind::linear_svm, ModelKind::mlp}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.seed = 99;
    spec.hp.gbdt.rounds = 10;
    spec.hp.forest.n_trees = 10;
    spec.hp.mlp.epochs = 5;
    spec.hp.mlp.hidden1 = 8;
    spec.hp.mlp.hidden2 = 4;
    spec.hp.svm.epochs = 20;
    const std::string s1 = serialize_model(train(spec, x, y));
    const std::string s2 = serialize_model(train(spec, x, y));
    CHECK(s1 == s2);
  }
}

TEST_CASE("feature importance") {
  SUBCASE("a single stump concentrates all gain") {
    const FeatureMatrix x = make_matrix(
        {"a", "b", "c", "target_col"},
        {{0, 0, 0, 1}, {0, 0, 0, 2}, {0, 0, 0, 3}, {0, 0, 0, 4}});
    const ModelArtifact model = train(gbdt_spec(1, 1, 0.5, 1), x, std::vector<int>{0, 0, 1, 1});
    const FeatureImportance imp = feature_importance(model);
    CHECK(imp.gain_fraction[3] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(imp.split_count[3] == 1);
    for (int c = 0; c < 3; ++c) {
      CHECK(imp.gain_fraction[c] == 0.0);
      CHECK(imp.split_count[c] == 0);
    }
  }
  SUBCASE("gain fractions normalize and counts match internal nodes") {
    Rng rng(3);
    const FeatureMatrix x = random_matrix(rng, 50, 5);
    const std::vector<int> y = labels_from_rule(x);
    const ModelArtifact model = train(gbdt_spec(25, 3, 0.1, 2), x, y);
    const FeatureImportance imp = feature_importance(model);
    double total = 0.0;
    std::int64_t splits = 0;
    for (double g : imp.gain_fraction) total += g;
    for (auto c : imp.split_count) splits += c;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    std::int64_t internal = 0;
    for (const auto& tree : std::get<GbdtModel>(model.payload).trees) {
      for (const auto& nd : tree.nodes) internal += !nd.is_leaf();
    }
    CHECK(splits == internal);
  }
  SUBCASE("non-tree models are rejected") {
    const FeatureMatrix x = make_matrix({"a"}, {{0}, {1}, {2}, {3}});
    ModelSpec spec;
    spec.kind = ModelKind::linear_svm;
    const ModelArtifact model = train(spec, x, std::vector<int>{0, 0, 1, 1});
    CHECK(testutil::thrown_code([&] { feature_importance(model); }) ==
          errc::not_a_tree_model);
  }
}

TEST_CASE("serialization round-trips to bit-identical predictions") {
  Rng rng(17);
  const FeatureMatrix x = random_matrix(rng, 40, 4);
  const std::vector<int> y = labels_from_rule(x);
  const FeatureMatrix held_out = random_matrix(rng, 15, 4);

  for (ModelKind kind : {ModelKind::gbdt, ModelKind::random_forest,
                         ModelKind::linear_svm, ModelKind::mlp}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.seed = 4;
    spec.hp.gbdt.rounds = 12;
    spec.hp.forest.n_trees = 8;
    spec.hp.mlp.epochs = 4;
    spec.hp.mlp.hidden1 = 8;
    spec.hp.mlp.hidden2 = 4;
    spec.hp.svm.epochs = 30;
    const ModelArtifact model = train(spec, x, y);
    const ModelArtifact back = deserialize_model(serialize_model(model));
    CHECK(predict_proba(model, held_out) == predict_proba(back, held_out));
  }
}

TEST_CASE("corrupt and future payloads are rejected") {
  const FeatureMatrix x = make_matrix({"a"}, {{0}, {1}, {2}, {3}});
  const ModelArtifact model = train(gbdt_spec(2, 1, 0.1, 1), x, std::vector<int>{0, 0, 1, 1});
  const std::string good = serialize_model(model);

  CHECK(testutil::thrown_code([&] {
          deserialize_model(good.substr(0, good.size() / 2));
        }) == errc::corrupt_payload);

  std::string future = good;
  const auto pos = future.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  future.replace(pos, 19, "\"format_version\": 9");
  CHECK(testutil::thrown_code([&] { deserialize_model(future); }) ==
        errc::version_mismatch);
}

TEST_CASE("random forest with one tree and no bootstrap is the plain tree") {
  Rng rng(23);
  const FeatureMatrix x = random_matrix(rng, 40, 3);
  const std::vector<int> y = labels_from_rule(x);
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.seed = 11;
  spec.hp.forest.n_trees = 1;
  spec.hp.forest.bootstrap = false;
  spec.hp.forest.mtry = 3;  // all features, no subsampling
  spec.hp.forest.max_depth = 6;
  spec.hp.forest.min_leaf = 1;
  const ModelArtifact model = train(spec, x, y);

  ClassificationTreeParams tp;
  tp.max_depth = 6;
  tp.min_leaf = 1;
  tp.mtry = 0;
  Rng tree_rng(0);
  const std::vector<double> weights(x.n_rows, 1.0);
  const Tree plain = build_classification_tree(x.values, x.n_rows, x.n_cols, y,
                                               2, weights, tp, tree_rng);
  const auto proba = predict_proba(model, x);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto dist = plain.predict(x.row(r));
    CHECK(proba[r * 2 + 1] == doctest::Approx(dist[1]).epsilon(1e-12));
  }
}

TEST_CASE("random forest fits a separable problem") {
  Rng rng(5);
  const FeatureMatrix x = random_matrix(rng, 80, 3);
  const std::vector<int> y = labels_from_rule(x);
  ModelSpec spec;
  spec.kind = ModelKind::random_forest;
  spec.seed = 1;
  spec.hp.forest.n_trees = 50;
  const ModelArtifact model = train(spec, x, y);
  const auto pred = predict_label(model, x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == y[i];
  CHECK(double(correct) / double(pred.size()) >= 0.95);
}

TEST_CASE("linear svm separates a margin toy and calibrates probabilities") {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  Rng rng(6);
  for (int i = 0; i < 60; ++i) {
    const double cls = i % 2 == 0 ? 1.0 : -1.0;
    rows.push_back({cls * (1.5 + rng.uniform()), rng.normal()});
    y.push_back(cls > 0 ? 1 : 0);
  }
  const FeatureMatrix x = make_matrix({"u", "v"}, rows);
  ModelSpec spec;
  spec.kind = ModelKind::linear_svm;
  const ModelArtifact model = train(spec, x, y);
  CHECK(predict_label(model, x) == y);
  const auto proba = predict_proba(model, x);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const double p = proba[r * 2 + 1];
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK((y[r] == 1 ? p > 0.5 : p < 0.5));
  }
}

TEST_CASE("multiclass svm one-vs-rest yields a probability simplex") {
  Rng rng(61);
  const FeatureMatrix x = random_matrix(rng, 45, 3);
  std::vector<int> y(45);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = int(i % 3);
  ModelSpec spec;
  spec.kind = ModelKind::linear_svm;
  spec.task = Task::multiclass;
  const ModelArtifact model = train(spec, x, y);
  const auto proba = predict_proba(model, x);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
      CHECK(proba[r * 3 + c] >= 0.0);
      sum += proba[r * 3 + c];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("mlp gradients match central finite differences") {
  Rng rng(747);
  for (const bool multiclass : {false, true}) {
    const std::size_t n = 12;
    const std::size_t d = 5;
    const FeatureMatrix x = random_matrix(rng, n, d);
    std::vector<int> y(n);
    const int k = multiclass ? 3 : 2;
    for (std::size_t i = 0; i < n; ++i) y[i] = int(i % k);

    MlpParams params;
    params.hidden1 = 6;
    params.hidden2 = 4;
    params.dropout = 0.0;
    params.epochs = 1;
    const MlpModel base =
        detail::train_mlp(x, y, k, multiclass, params, 555);

    const auto analytic = detail::mlp_loss_gradient(base, x, y, multiclass);
    MlpModel probe = base;
    const auto ptrs = detail::mlp_param_ptrs(probe);
    REQUIRE(ptrs.size() == analytic.size());

    const double h = 1e-6;
    double max_rel = 0.0;
    for (std::size_t p = 0; p < ptrs.size(); ++p) {
      const double saved = *ptrs[p];
      *ptrs[p] = saved + h;
      const double up = detail::mlp_loss(probe, x, y, multiclass);
      *ptrs[p] = saved - h;
      const double down = detail::mlp_loss(probe, x, y, multiclass);
      *ptrs[p] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom =
          std::max({std::abs(numeric), std::abs(analytic[p]), 1e-8});
      max_rel = std::max(max_rel, std::abs(numeric - analytic[p]) / denom);
    }
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("mlp inference is deterministic and learns a toy") {
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  Rng rng(9);
  for (int i = 0; i < 80; ++i) {
    const double cls = i % 2 == 0 ? 1.0 : -1.0;
    rows.push_back({cls * (1.0 + rng.uniform()), rng.normal() * 0.1});
    y.push_back(cls > 0 ? 1 : 0);
  }
  const FeatureMatrix x = make_matrix({"u", "v"}, rows);
  ModelSpec spec;
  spec.kind = ModelKind::mlp;
  spec.seed = 3;
  spec.hp.mlp.hidden1 = 16;
  spec.hp.mlp.hidden2 = 8;
  spec.hp.mlp.epochs = 60;
  const ModelArtifact model = train(spec, x, y);
  CHECK(predict_proba(model, x) == predict_proba(model, x));  // dropout off
  const auto pred = predict_label(model, x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == y[i];
  CHECK(double(correct) / double(pred.size()) >= 0.9);
}

}  // TEST_SUITE
