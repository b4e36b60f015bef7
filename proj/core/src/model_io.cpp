#include <fstream>

#include <nlohmann/json.hpp>

#include "ldfs/error.hpp"
#include "ldfs/models.hpp"

namespace ldfs {

namespace {

constexpr int kFormatVersion = 1;

using json = nlohmann::ordered_json;

json tree_to_json(const Tree& t) {
  json nodes = json::array();
  for (const auto& nd : t.nodes) {
    json j;
    j["feature"] = nd.feature;
    if (!nd.is_leaf()) {
      j["threshold"] = nd.threshold;
      j["left"] = nd.left;
      j["right"] = nd.right;
      j["default_left"] = nd.default_left;
      j["gain"] = nd.gain;
    } else {
      j["value"] = nd.value;
    }
    j["cover"] = nd.cover;
    nodes.push_back(std::move(j));
  }
  return json{{"n_outputs", t.n_outputs}, {"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& j) {
  Tree t;
  t.n_outputs = j.at("n_outputs").get<int>();
  for (const auto& nj : j.at("nodes")) {
    TreeNode nd;
    nd.feature = nj.at("feature").get<int>();
    nd.cover = nj.at("cover").get<double>();
    if (nd.feature >= 0) {
      nd.threshold = nj.at("threshold").get<double>();
      nd.left = nj.at("left").get<int>();
      nd.right = nj.at("right").get<int>();
      nd.default_left = nj.at("default_left").get<bool>();
      nd.gain = nj.at("gain").get<double>();
    } else {
      nd.value = nj.at("value").get<std::vector<double>>();
    }
    t.nodes.push_back(std::move(nd));
  }
  return t;
}

json hyperparams_to_json(const Hyperparams& hp) {
  return json{
      {"gbdt",
       {{"rounds", hp.gbdt.rounds},
        {"max_depth", hp.gbdt.max_depth},
        {"learning_rate", hp.gbdt.learning_rate},
        {"min_leaf", hp.gbdt.min_leaf},
        {"l2", hp.gbdt.l2}}},
      {"forest",
       {{"n_trees", hp.forest.n_trees},
        {"max_depth", hp.forest.max_depth},
        {"min_leaf", hp.forest.min_leaf},
        {"mtry", hp.forest.mtry},
        {"bootstrap", hp.forest.bootstrap}}},
      {"svm", {{"lambda", hp.svm.lambda}, {"epochs", hp.svm.epochs}}},
      {"mlp",
       {{"hidden1", hp.mlp.hidden1},
        {"hidden2", hp.mlp.hidden2},
        {"dropout", hp.mlp.dropout},
        {"epochs", hp.mlp.epochs},
        {"batch", hp.mlp.batch},
        {"lr", hp.mlp.lr},
        {"momentum", hp.mlp.momentum}}}};
}

Hyperparams hyperparams_from_json(const json& j) {
  Hyperparams hp;
  const auto& g = j.at("gbdt");
  hp.gbdt = {g.at("rounds"), g.at("max_depth"), g.at("learning_rate"),
             g.at("min_leaf"), g.at("l2")};
  const auto& f = j.at("forest");
  hp.forest = {f.at("n_trees"), f.at("max_depth"), f.at("min_leaf"),
               f.at("mtry"), f.at("bootstrap")};
  const auto& s = j.at("svm");
  hp.svm = {s.at("lambda"), s.at("epochs")};
  const auto& m = j.at("mlp");
  hp.mlp = {m.at("hidden1"), m.at("hidden2"), m.at("dropout"), m.at("epochs"),
            m.at("batch"),   m.at("lr"),      m.at("momentum")};
  return hp;
}

json encoders_to_json(const std::vector<ColumnMeta>& cols) {
  json out = json::array();
  for (const auto& c : cols) {
    out.push_back({{"name", c.name},
                   {"source", c.source},
                   {"kind", int(c.kind)},
                   {"categories", c.categories}});
  }
  return out;
}

std::vector<ColumnMeta> encoders_from_json(const json& j) {
  std::vector<ColumnMeta> out;
  for (const auto& cj : j) {
    ColumnMeta c;
    c.name = cj.at("name").get<std::string>();
    c.source = cj.at("source").get<std::string>();
    c.kind = ColumnKind(cj.at("kind").get<int>());
    c.categories = cj.at("categories").get<std::vector<std::string>>();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::string serialize_model(const ModelArtifact& model) {
  json j;
  j["format_version"] = kFormatVersion;
  j["model_kind"] = model_kind_name(model.kind);
  j["task"] = task_name(model.task);
  j["n_classes"] = model.n_classes;
  j["feature_names"] = model.feature_names;
  j["encoders"] = encoders_to_json(model.encoders);
  j["hyperparams"] = hyperparams_to_json(model.hp);
  j["seed"] = model.seed;

  json payload;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GbdtModel>) {
          payload["type"] = "gbdt";
          payload["n_classes"] = m.n_classes;
          payload["multiclass"] = m.multiclass;
          payload["base_score"] = m.base_score;
          payload["learning_rate"] = m.learning_rate;
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          payload["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, RandomForestModel>) {
          payload["type"] = "random_forest";
          payload["n_classes"] = m.n_classes;
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          payload["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, LinearSvmModel>) {
          payload["type"] = "linear_svm";
          payload["n_classes"] = m.n_classes;
          payload["n_features"] = m.n_features;
          payload["weights"] = m.weights;
          payload["bias"] = m.bias;
          payload["platt_a"] = m.platt_a;
          payload["platt_b"] = m.platt_b;
          payload["feat_mean"] = m.feat_mean;
          payload["feat_std"] = m.feat_std;
        } else {
          payload["type"] = "mlp";
          payload["n_in"] = m.n_in;
          payload["h1"] = m.h1;
          payload["h2"] = m.h2;
          payload["n_out"] = m.n_out;
          payload["w1"] = m.w1;
          payload["b1"] = m.b1;
          payload["g1"] = m.g1;
          payload["be1"] = m.be1;
          payload["w2"] = m.w2;
          payload["b2"] = m.b2;
          payload["g2"] = m.g2;
          payload["be2"] = m.be2;
          payload["w3"] = m.w3;
          payload["b3"] = m.b3;
          payload["feat_mean"] = m.feat_mean;
          payload["feat_std"] = m.feat_std;
        }
      },
      model.payload);
  j["payload"] = std::move(payload);
  return j.dump(1);
}

ModelArtifact deserialize_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::corrupt_payload, std::string("model file: ") + e.what());
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion) {
      raise(errc::version_mismatch,
            "format_version " + std::to_string(version) + ", expected " +
                std::to_string(kFormatVersion));
    }
    ModelArtifact model;
    model.kind = parse_model_kind(j.at("model_kind").get<std::string>());
    model.task = parse_task(j.at("task").get<std::string>());
    model.n_classes = j.at("n_classes").get<int>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.encoders = encoders_from_json(j.at("encoders"));
    model.hp = hyperparams_from_json(j.at("hyperparams"));
    model.seed = j.at("seed").get<std::uint64_t>();

    const auto& p = j.at("payload");
    const std::string type = p.at("type").get<std::string>();
    if (type == "gbdt") {
      GbdtModel m;
      m.n_classes = p.at("n_classes").get<int>();
      m.multiclass = p.at("multiclass").get<bool>();
      m.base_score = p.at("base_score").get<std::vector<double>>();
      m.learning_rate = p.at("learning_rate").get<double>();
      for (const auto& tj : p.at("trees")) m.trees.push_back(tree_from_json(tj));
      model.payload = std::move(m);
    } else if (type == "random_forest") {
      RandomForestModel m;
      m.n_classes = p.at("n_classes").get<int>();
      for (const auto& tj : p.at("trees")) m.trees.push_back(tree_from_json(tj));
      model.payload = std::move(m);
    } else if (type == "linear_svm") {
      LinearSvmModel m;
      m.n_classes = p.at("n_classes").get<int>();
      m.n_features = p.at("n_features").get<std::size_t>();
      m.weights = p.at("weights").get<std::vector<double>>();
      m.bias = p.at("bias").get<std::vector<double>>();
      m.platt_a = p.at("platt_a").get<std::vector<double>>();
      m.platt_b = p.at("platt_b").get<std::vector<double>>();
      m.feat_mean = p.at("feat_mean").get<std::vector<double>>();
      m.feat_std = p.at("feat_std").get<std::vector<double>>();
      model.payload = std::move(m);
    } else if (type == "mlp") {
      MlpModel m;
      m.n_in = p.at("n_in").get<int>();
      m.h1 = p.at("h1").get<int>();
      m.h2 = p.at("h2").get<int>();
      m.n_out = p.at("n_out").get<int>();
      m.w1 = p.at("w1").get<std::vector<double>>();
      m.b1 = p.at("b1").get<std::vector<double>>();
      m.g1 = p.at("g1").get<std::vector<double>>();
      m.be1 = p.at("be1").get<std::vector<double>>();
      m.w2 = p.at("w2").get<std::vector<double>>();
      m.b2 = p.at("b2").get<std::vector<double>>();
      m.g2 = p.at("g2").get<std::vector<double>>();
      m.be2 = p.at("be2").get<std::vector<double>>();
      m.w3 = p.at("w3").get<std::vector<double>>();
      m.b3 = p.at("b3").get<std::vector<double>>();
      m.feat_mean = p.at("feat_mean").get<std::vector<double>>();
      m.feat_std = p.at("feat_std").get<std::vector<double>>();
      model.payload = std::move(m);
    } else {
      raise(errc::corrupt_payload, "unknown payload type '" + type + "'");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::corrupt_payload, std::string("model file: ") + e.what());
  }
}

void save_model(const std::string& path, const ModelArtifact& model) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << serialize_model(model);
}

ModelArtifact load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize_model(text);
}

}  // namespace ldfs
