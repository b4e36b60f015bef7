#include "ldfs/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"
#include "ldfs/rng.hpp"

namespace ldfs {

namespace {

using json = nlohmann::ordered_json;

json config_to_json(const RunConfig& cfg) {
  json j;
  j["data_path"] = cfg.data_path;
  j["signals_dir"] = cfg.signals_dir;
  j["out_dir"] = cfg.out_dir;
  j["wavelet"] = {{"omega0", cfg.wavelet.omega0},
                  {"voices_per_octave", cfg.wavelet.voices_per_octave},
                  {"f_min", cfg.wavelet.f_min},
                  {"f_max", cfg.wavelet.f_max},
                  {"ignore_coi", cfg.wavelet.ignore_coi},
                  {"per_time_max", cfg.wavelet.per_time_max}};
  j["feature_set"] = feature_set_name(cfg.feature_set);
  j["encoding"] = cfg.encoding == Encoding::ordinal ? "ordinal" : "onehot";
  j["model"] = {{"kind", model_kind_name(cfg.model.kind)},
                {"task", task_name(cfg.model.task)},
                {"seed", cfg.model.seed}};
  j["hyperparams"] = {
      {"gbdt",
       {{"rounds", cfg.model.hp.gbdt.rounds},
        {"max_depth", cfg.model.hp.gbdt.max_depth},
        {"learning_rate", cfg.model.hp.gbdt.learning_rate},
        {"min_leaf", cfg.model.hp.gbdt.min_leaf},
        {"l2", cfg.model.hp.gbdt.l2}}},
      {"forest",
       {{"n_trees", cfg.model.hp.forest.n_trees},
        {"max_depth", cfg.model.hp.forest.max_depth},
        {"min_leaf", cfg.model.hp.forest.min_leaf},
        {"mtry", cfg.model.hp.forest.mtry},
        {"bootstrap", cfg.model.hp.forest.bootstrap}}},
      {"svm", {{"lambda", cfg.model.hp.svm.lambda}, {"epochs", cfg.model.hp.svm.epochs}}},
      {"mlp",
       {{"hidden1", cfg.model.hp.mlp.hidden1},
        {"hidden2", cfg.model.hp.mlp.hidden2},
        {"dropout", cfg.model.hp.mlp.dropout},
        {"epochs", cfg.model.hp.mlp.epochs},
        {"batch", cfg.model.hp.mlp.batch},
        {"lr", cfg.model.hp.mlp.lr},
        {"momentum", cfg.model.hp.mlp.momentum}}}};
  j["split"] = {{"scheme", split_scheme_name(cfg.split.scheme)},
                {"k", cfg.split.k},
                {"seeds", cfg.split.seeds},
                {"patient_wise_8020", cfg.split.patient_wise_8020}};
  j["multiclass_policy"] =
      cfg.multiclass_policy == MulticlassPolicy::strict ? "strict" : "rank";
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.data_path = j.value("data_path", "");
  cfg.signals_dir = j.value("signals_dir", "");
  cfg.out_dir = j.value("out_dir", "");
  if (j.contains("wavelet")) {
    const auto& w = j["wavelet"];
    cfg.wavelet.omega0 = w.value("omega0", 6.0);
    cfg.wavelet.voices_per_octave = w.value("voices_per_octave", 16);
    cfg.wavelet.f_min = w.value("f_min", 0.0095);
    cfg.wavelet.f_max = w.value("f_max", 1.6);
    cfg.wavelet.ignore_coi = w.value("ignore_coi", false);
    cfg.wavelet.per_time_max = w.value("per_time_max", false);
  }
  if (j.contains("feature_set")) {
    cfg.feature_set = parse_feature_set(j["feature_set"].get<std::string>());
  }
  if (j.contains("encoding")) {
    cfg.encoding = j["encoding"].get<std::string>() == "onehot"
                       ? Encoding::onehot
                       : Encoding::ordinal;
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    cfg.model.kind = parse_model_kind(m.value("kind", "gbdt"));
    cfg.model.task = parse_task(m.value("task", "binary"));
    cfg.model.seed = m.value("seed", std::uint64_t{0});
  }
  if (j.contains("hyperparams")) {
    const auto& h = j["hyperparams"];
    if (h.contains("gbdt")) {
      const auto& g = h["gbdt"];
      auto& p = cfg.model.hp.gbdt;
      p.rounds = g.value("rounds", p.rounds);
      p.max_depth = g.value("max_depth", p.max_depth);
      p.learning_rate = g.value("learning_rate", p.learning_rate);
      p.min_leaf = g.value("min_leaf", p.min_leaf);
      p.l2 = g.value("l2", p.l2);
    }
    if (h.contains("forest")) {
      const auto& f = h["forest"];
      auto& p = cfg.model.hp.forest;
      p.n_trees = f.value("n_trees", p.n_trees);
      p.max_depth = f.value("max_depth", p.max_depth);
      p.min_leaf = f.value("min_leaf", p.min_leaf);
      p.mtry = f.value("mtry", p.mtry);
      p.bootstrap = f.value("bootstrap", p.bootstrap);
    }
    if (h.contains("svm")) {
      const auto& s = h["svm"];
      cfg.model.hp.svm.lambda = s.value("lambda", cfg.model.hp.svm.lambda);
      cfg.model.hp.svm.epochs = s.value("epochs", cfg.model.hp.svm.epochs);
    }
    if (h.contains("mlp")) {
      const auto& m2 = h["mlp"];
      auto& p = cfg.model.hp.mlp;
      p.hidden1 = m2.value("hidden1", p.hidden1);
      p.hidden2 = m2.value("hidden2", p.hidden2);
      p.dropout = m2.value("dropout", p.dropout);
      p.epochs = m2.value("epochs", p.epochs);
      p.batch = m2.value("batch", p.batch);
      p.lr = m2.value("lr", p.lr);
      p.momentum = m2.value("momentum", p.momentum);
    }
  }
  if (j.contains("split")) {
    const auto& s = j["split"];
    cfg.split.scheme = parse_split_scheme(s.value("scheme", "kfold"));
    cfg.split.k = s.value("k", 5);
    if (s.contains("seeds")) {
      cfg.split.seeds = s["seeds"].get<std::vector<std::uint64_t>>();
    }
    cfg.split.patient_wise_8020 = s.value("patient_wise_8020", false);
  }
  if (j.contains("multiclass_policy")) {
    cfg.multiclass_policy = j["multiclass_policy"].get<std::string>() == "rank"
                                ? MulticlassPolicy::rank
                                : MulticlassPolicy::strict;
  }
  return cfg;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  return config_to_json(cfg).dump(2);
}

RunConfig deserialize_config(const std::string& text) {
  try {
    return config_from_json(json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    raise(errc::config_error, std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::config_error, "cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize_config(text);
}

LabeledData build_labeled_data(std::span<const ParticipantRow> rows,
                               FeatureSet set, Encoding encoding, Task task,
                               MulticlassPolicy policy,
                               const EncoderOverrides& encoders) {
  std::vector<ParticipantRow> kept;
  std::vector<int> labels;
  std::size_t missing_das = 0;
  std::size_t non_canonical = 0;
  for (const auto& row : rows) {
    if (!row.das) {
      ++missing_das;
      continue;
    }
    const DasScores scores = score_subscales(*row.das);
    const MentalHealthLabel label = derive_labels(scores, policy);
    if (task == Task::binary) {
      kept.push_back(row);
      labels.push_back(label.binary == BinaryLabel::abnormal ? 1 : 0);
    } else {
      if (!label.multiclass) {
        ++non_canonical;  // strict policy: excluded from multiclass training
        continue;
      }
      kept.push_back(row);
      labels.push_back(int(*label.multiclass));
    }
  }
  if (kept.empty()) {
    raise(errc::all_rows_dropped, "no labeled rows after DAS filtering");
  }

  LabeledData out;
  out.x = assemble_feature_matrix(kept, set, ImputePolicy::none, encoding, encoders);
  out.y = std::move(labels);
  out.n_classes = task == Task::binary ? 2 : 4;
  if (missing_das > 0) {
    out.warnings.push_back(std::to_string(missing_das) +
                           " rows without DAS-21 responses excluded from training");
  }
  if (non_canonical > 0) {
    out.warnings.push_back(std::to_string(non_canonical) +
                           " rows with non-canonical subscale combinations "
                           "excluded (strict multiclass policy)");
  }
  return out;
}

void enrich_with_signals(std::vector<ParticipantRow>& rows,
                         const std::string& base_dir,
                         const MorletParams& params,
                         std::vector<std::string>& warnings) {
  namespace fs = std::filesystem;
  for (auto& row : rows) {
    if (!row.signal_file) continue;
    fs::path p(*row.signal_file);
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    RawSignal signal;
    try {
      signal = load_raw_signal(p.string());
    } catch (const Error& e) {
      warnings.push_back("signal '" + p.string() + "': " + e.what());
      continue;
    }
    const LdfSummary summary = ldf_summary(signal);
    const Scalogram sg = cwt_morlet(signal, params);
    const BandFeatures bands =
        band_features(sg, canonical_bands(), params.per_time_max);
    auto& sf = row.sensors;
    if (!sf.m) sf.m = summary.m;
    if (!sf.sigma) sf.sigma = summary.sigma;
    if (!sf.kv100) sf.kv100 = summary.kv100;
    for (int b = 0; b < 5; ++b) {
      if (!sf.band_amplitude[b]) {
        sf.band_amplitude[b] = bands.per_band[b].amplitude;
      }
      if (!sf.band_frequency[b]) {
        sf.band_frequency[b] = bands.per_band[b].frequency;
      }
    }
  }
}

namespace {

struct TrainedFold {
  std::vector<double> proba;  // test rows x k
  std::vector<int> pred;
  std::vector<int> truth;
};

TrainedFold run_fold(const RunConfig& cfg, const LabeledData& data,
                     const FoldAssignment& fold, std::uint64_t seed) {
  FeatureMatrix x_train = select_rows(data.x, fold.train);
  FeatureMatrix x_test = select_rows(data.x, fold.test);
  const Imputer imputer = Imputer::fit(data.x, fold.train);
  imputer.apply(x_train);
  imputer.apply(x_test);

  std::vector<int> y_train, y_test;
  for (std::size_t r : fold.train) y_train.push_back(data.y[r]);
  for (std::size_t r : fold.test) y_test.push_back(data.y[r]);

  ModelSpec spec = cfg.model;
  spec.seed = derive_seed(cfg.model.seed, seed);
  const ModelArtifact model = train(spec, x_train, y_train);

  TrainedFold out;
  out.proba = predict_proba(model, x_test);
  out.pred = predict_label(model, x_test);
  out.truth = std::move(y_test);
  return out;
}

MetricReport metrics_from_pooled(const TrainedFold& pooled, Task task, int k,
                                 int fold_id, std::uint64_t seed) {
  MetricReport rep;
  rep.fold_id = fold_id;
  rep.seed = seed;
  if (task == Task::binary) {
    std::vector<double> pos(pooled.truth.size());
    for (std::size_t r = 0; r < pooled.truth.size(); ++r) {
      pos[r] = pooled.proba[r * 2 + 1];
    }
    try {
      rep.roc_auc = roc_auc(pos, pooled.truth);
      rep.pr_auc = pr_auc(pos, pooled.truth);
    } catch (const Error& e) {
      rep.warnings.push_back(e.what());
    }
    return rep;
  }
  try {
    rep.macro_ovr_auc =
        macro_multiclass_auc(pooled.proba, pooled.truth, k, MulticlassAucMode::ovr)
            .value;
  } catch (const Error& e) {
    rep.warnings.push_back(e.what());
  }
  try {
    const auto ovo =
        macro_multiclass_auc(pooled.proba, pooled.truth, k, MulticlassAucMode::ovo);
    rep.macro_ovo_auc = ovo.value;
  } catch (const Error& e) {
    rep.warnings.push_back(e.what());
  }
  const MacroPrf prf = macro_prf(pooled.pred, pooled.truth, k);
  rep.macro_precision = prf.precision;
  rep.macro_recall = prf.recall;
  rep.macro_f1 = prf.f1;
  rep.per_class_f1 = prf.per_class_f1;
  return rep;
}

void add_metric(std::map<std::string, std::vector<double>>& acc,
                const std::string& name, const std::optional<double>& v) {
  if (v) acc[name].push_back(*v);
}

}  // namespace

RunReport run_training(const RunConfig& cfg, const LabeledData& data) {
  const auto t_start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;
  report.run_id = hex64(fnv1a(serialize_config(cfg)));
  report.warnings = data.warnings;

  const Task task = cfg.model.task;
  const int k_classes = data.n_classes;

  if (cfg.split.scheme == SplitScheme::lopo) {
    const SplitPlan plan = lopo(data.x.patient_ids);
    // Pool the single-patient folds: each row is predicted exactly once.
    TrainedFold pooled;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
      const TrainedFold tf = run_fold(cfg, data, plan.folds[f], 0);
      pooled.proba.insert(pooled.proba.end(), tf.proba.begin(), tf.proba.end());
      pooled.pred.insert(pooled.pred.end(), tf.pred.begin(), tf.pred.end());
      pooled.truth.insert(pooled.truth.end(), tf.truth.begin(), tf.truth.end());
    }
    report.folds.push_back(metrics_from_pooled(pooled, task, k_classes, 0, 0));
  } else {
    for (const std::uint64_t seed : cfg.split.seeds) {
      SplitPlan plan;
      if (cfg.split.scheme == SplitScheme::split_8020) {
        plan = cfg.split.patient_wise_8020
                   ? split_8020_patientwise(data.x.patient_ids, seed)
                   : split_8020(data.x.n_rows, seed);
      } else {
        plan = kfold_patientwise(data.x.patient_ids, cfg.split.k, seed);
      }
      for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const TrainedFold tf = run_fold(cfg, data, plan.folds[f], seed);
        report.folds.push_back(
            metrics_from_pooled(tf, task, k_classes, int(f), seed));
      }
    }
  }

  std::map<std::string, std::vector<double>> acc;
  for (const auto& fold : report.folds) {
    add_metric(acc, "roc_auc", fold.roc_auc);
    add_metric(acc, "pr_auc", fold.pr_auc);
    add_metric(acc, "macro_ovr_auc", fold.macro_ovr_auc);
    add_metric(acc, "macro_ovo_auc", fold.macro_ovo_auc);
    add_metric(acc, "macro_precision", fold.macro_precision);
    add_metric(acc, "macro_recall", fold.macro_recall);
    add_metric(acc, "macro_f1", fold.macro_f1);
    for (const auto& w : fold.warnings) report.warnings.push_back(w);
  }
  for (const auto& [name, values] : acc) {
    AggregateStat stat;
    stat.count = values.size();
    for (double v : values) stat.mean += v;
    stat.mean /= double(values.size());
    for (double v : values) {
      stat.stddev += (v - stat.mean) * (v - stat.mean);
    }
    stat.stddev = std::sqrt(stat.stddev / double(values.size()));
    report.aggregate[name] = stat;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

std::string serialize_report(const RunReport& report) {
  json j;
  j["run_id"] = report.run_id;
  j["artifact_version"] = "0.1.0";
  j["config"] = config_to_json(report.config);
  json folds = json::array();
  for (const auto& f : report.folds) {
    json fj;
    fj["fold_id"] = f.fold_id;
    fj["seed"] = f.seed;
    auto put = [&](const char* name, const std::optional<double>& v) {
      if (v) fj[name] = *v;
    };
    put("roc_auc", f.roc_auc);
    put("pr_auc", f.pr_auc);
    put("macro_ovr_auc", f.macro_ovr_auc);
    put("macro_ovo_auc", f.macro_ovo_auc);
    put("macro_precision", f.macro_precision);
    put("macro_recall", f.macro_recall);
    put("macro_f1", f.macro_f1);
    if (!f.per_class_f1.empty()) fj["per_class_f1"] = f.per_class_f1;
    if (!f.warnings.empty()) fj["warnings"] = f.warnings;
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);
  json agg;
  for (const auto& [name, stat] : report.aggregate) {
    agg[name] = {{"mean", stat.mean}, {"std", stat.stddev}, {"n", stat.count}};
  }
  j["aggregate"] = std::move(agg);
  j["warnings"] = report.warnings;
  return j.dump(2);
}

RunReport deserialize_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::corrupt_payload, std::string("report: ") + e.what());
  }
  RunReport rep;
  rep.run_id = j.value("run_id", "");
  if (j.contains("config")) rep.config = config_from_json(j["config"]);
  if (j.contains("folds")) {
    for (const auto& fj : j["folds"]) {
      MetricReport f;
      f.fold_id = fj.value("fold_id", 0);
      f.seed = fj.value("seed", std::uint64_t{0});
      auto get = [&](const char* name) -> std::optional<double> {
        if (fj.contains(name)) return fj[name].get<double>();
        return std::nullopt;
      };
      f.roc_auc = get("roc_auc");
      f.pr_auc = get("pr_auc");
      f.macro_ovr_auc = get("macro_ovr_auc");
      f.macro_ovo_auc = get("macro_ovo_auc");
      f.macro_precision = get("macro_precision");
      f.macro_recall = get("macro_recall");
      f.macro_f1 = get("macro_f1");
      rep.folds.push_back(std::move(f));
    }
  }
  if (j.contains("aggregate")) {
    for (const auto& [name, aj] : j["aggregate"].items()) {
      AggregateStat stat;
      stat.mean = aj.value("mean", 0.0);
      stat.stddev = aj.value("std", 0.0);
      stat.count = aj.value("n", std::size_t{0});
      rep.aggregate[name] = stat;
    }
  }
  if (j.contains("warnings")) {
    rep.warnings = j["warnings"].get<std::vector<std::string>>();
  }
  return rep;
}

GridResult run_grid(std::span<const RunConfig> cells,
                    std::span<const ParticipantRow> rows,
                    const EncoderOverrides& encoders) {
  GridResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      const LabeledData data =
          build_labeled_data(rows, cells[i].feature_set, cells[i].encoding,
                             cells[i].model.task, cells[i].multiclass_policy,
                             encoders);
      result.reports.push_back(run_training(cells[i], data));
    } catch (const std::exception& e) {
      result.failures.emplace_back(i, e.what());
    }
  }
  return result;
}

std::string render_report_table(std::span<const RunReport> reports) {
  std::string out;
  out += "| model | feature_set | split | task | seeds | metric | mean | std | n |\n";
  out += "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& rep : reports) {
    const auto& cfg = rep.config;
    for (const auto& [name, stat] : rep.aggregate) {
      out += "| " + std::string(model_kind_name(cfg.model.kind));
      out += " | " + std::string(feature_set_name(cfg.feature_set));
      out += " | " + std::string(split_scheme_name(cfg.split.scheme));
      if (cfg.split.scheme == SplitScheme::kfold_patient) {
        out += " (k=" + std::to_string(cfg.split.k) + ")";
      }
      out += " | " + std::string(task_name(cfg.model.task));
      out += " | " + std::to_string(cfg.split.seeds.size());
      out += " | " + name;
      out += " | " + csv::format_metric(stat.mean);
      out += " | " + csv::format_metric(stat.stddev);
      out += " | " + std::to_string(stat.count);
      out += " |\n";
    }
  }
  return out;
}

StatsReport compute_group_stats(std::span<const ParticipantRow> rows) {
  StatsReport out;

  // Row-level wellbeing split for the feature comparisons.
  std::vector<std::size_t> wellbeing_rows, non_wellbeing_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].das) continue;
    const DasScores s = score_subscales(*rows[i].das);
    (s.any_abnormal() ? non_wellbeing_rows : wellbeing_rows).push_back(i);
  }
  if (wellbeing_rows.empty() || non_wellbeing_rows.empty()) {
    out.warnings.push_back("one of the groups is empty; comparisons skipped");
  } else {
    struct Field {
      const char* name;
      std::function<std::optional<double>(const SensorFeatureVector&)> get;
    };
    std::vector<Field> fields = {
        {"m", [](const SensorFeatureVector& s) { return s.m; }},
        {"sigma", [](const SensorFeatureVector& s) { return s.sigma; }},
        {"kv100", [](const SensorFeatureVector& s) { return s.kv100; }},
        {"a365", [](const SensorFeatureVector& s) { return s.a365; }},
        {"a460", [](const SensorFeatureVector& s) { return s.a460; }},
        {"anadh", [](const SensorFeatureVector& s) { return s.anadh; }},
        {"pom", [](const SensorFeatureVector& s) { return s.pom; }},
        {"temperature", [](const SensorFeatureVector& s) { return s.temperature; }},
    };
    for (int b = 0; b < 5; ++b) {
      static const char* amp_names[] = {"ae", "an", "am", "ar", "ac"};
      static const char* freq_names[] = {"fe", "fn", "fm", "fr", "fc"};
      fields.push_back({amp_names[b], [b](const SensorFeatureVector& s) {
                          return s.band_amplitude[b];
                        }});
      fields.push_back({freq_names[b], [b](const SensorFeatureVector& s) {
                          return s.band_frequency[b];
                        }});
    }
    for (const auto& field : fields) {
      std::vector<double> a, b;
      for (std::size_t i : wellbeing_rows) {
        if (auto v = field.get(rows[i].sensors)) a.push_back(*v);
      }
      for (std::size_t i : non_wellbeing_rows) {
        if (auto v = field.get(rows[i].sensors)) b.push_back(*v);
      }
      if (a.empty() || b.empty()) continue;
      out.comparisons.push_back(compare_groups(field.name, a, b));
    }
  }

  // Participant-level prevalence: a participant carries a condition when any
  // of their rows scores above Normal (per-patient max of final scores).
  std::map<std::string, DasScores> per_patient;
  for (const auto& row : rows) {
    if (!row.das) continue;
    const DasScores s = score_subscales(*row.das);
    auto [it, inserted] = per_patient.emplace(row.participant.patient_id, s);
    if (!inserted) {
      DasScores& acc = it->second;
      acc.stress_final = std::max(acc.stress_final, s.stress_final);
      acc.anxiety_final = std::max(acc.anxiety_final, s.anxiety_final);
      acc.depression_final = std::max(acc.depression_final, s.depression_final);
      acc.stress_level = stress_severity(acc.stress_final);
      acc.anxiety_level = anxiety_severity(acc.anxiety_final);
      acc.depression_level = depression_severity(acc.depression_final);
    }
  }
  std::vector<DasScores> scores;
  scores.reserve(per_patient.size());
  for (const auto& [_, s] : per_patient) scores.push_back(s);
  out.prevalence = prevalence_report(scores);
  return out;
}

void write_stats_csv(const std::string& path,
                     std::span<const GroupComparison> comparisons) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "feature,group_a_mean,group_a_lo,group_a_hi,group_b_mean,group_b_lo,"
         "group_b_hi,U,p\n";
  for (const auto& c : comparisons) {
    out << c.feature << ',' << csv::format_double(c.group_a.mean) << ','
        << csv::format_double(c.group_a.lo) << ','
        << csv::format_double(c.group_a.hi) << ','
        << csv::format_double(c.group_b.mean) << ','
        << csv::format_double(c.group_b.lo) << ','
        << csv::format_double(c.group_b.hi) << ','
        << csv::format_double(c.test.u1) << ','
        << csv::format_double(c.test.p_value) << '\n';
  }
}

void write_prevalence_csv(const std::string& path,
                          const ConditionPrevalence& p) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "condition,fraction,normal,mild,moderate,severe,extremely_severe\n";
  const char* names[] = {"stress", "anxiety", "depression"};
  const double fractions[] = {p.stress, p.anxiety, p.depression};
  for (int c = 0; c < 3; ++c) {
    out << names[c] << ',' << csv::format_double(fractions[c]);
    for (int s = 0; s < 5; ++s) {
      out << ',' << csv::format_double(p.severity_fraction[c][s]);
    }
    out << '\n';
  }
  out << "any," << csv::format_double(p.any) << ",,,,,\n";
}

void write_label_file(const std::string& path,
                      std::span<const PatientResponse> responses,
                      MulticlassPolicy policy) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "patient_id,binary,multiclass,dep_final,anx_final,str_final,"
         "dep_level,anx_level,str_level\n";
  for (const auto& pr : responses) {
    const DasScores s = score_subscales(pr.response);
    const MentalHealthLabel label = derive_labels(s, policy);
    out << pr.patient_id << ',' << binary_label_name(label.binary) << ','
        << (label.multiclass ? multiclass_label_name(*label.multiclass) : "")
        << ',' << s.depression_final << ',' << s.anxiety_final << ','
        << s.stress_final << ',' << severity_name(s.depression_level) << ','
        << severity_name(s.anxiety_level) << ','
        << severity_name(s.stress_level) << '\n';
  }
}

}  // namespace ldfs
