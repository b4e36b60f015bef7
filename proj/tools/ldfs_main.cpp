// ldfs: wearable LDF/FS recordings + DAS-21 questionnaires -> mental-health
// classification runs with explanations and group statistics.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldfs/csv.hpp"
#include "ldfs/dataset.hpp"
#include "ldfs/error.hpp"
#include "ldfs/pipeline.hpp"
#include "ldfs/shap.hpp"
#include "ldfs/signal.hpp"
#include "ldfs/wavelet.hpp"

namespace fs = std::filesystem;
using namespace ldfs;

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("LDFS_OUT_DIR")) return env;
  return ".";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(errc::io_error, "cannot create '" + dir + "': " + ec.message());
}

LoadResult load_table(const std::string& data_path,
                      const std::string& schema_path) {
  const SchemaConfig schema = schema_path.empty()
                                  ? SchemaConfig::defaults()
                                  : SchemaConfig::load(schema_path);
  return load_participants(data_path, schema);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct WaveletFlags {
  double omega0 = 6.0;
  int voices = 16;
  double f_min = 0.0095;
  double f_max = 1.6;
  bool ignore_coi = false;
  bool per_time_max = false;

  MorletParams params() const {
    MorletParams p;
    p.omega0 = omega0;
    p.voices_per_octave = voices;
    p.f_min = f_min;
    p.f_max = f_max;
    p.ignore_coi = ignore_coi;
    p.per_time_max = per_time_max;
    return p;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--omega0", omega0, "Morlet center frequency");
    cmd->add_option("--voices", voices, "scales per octave");
    cmd->add_option("--fmin", f_min, "lowest analysis frequency (Hz)");
    cmd->add_option("--fmax", f_max, "highest analysis frequency (Hz)");
    cmd->add_flag("--ignore-coi", ignore_coi,
                  "average over the full record (short recordings)");
    cmd->add_flag("--per-time-max", per_time_max,
                  "average per-time maxima instead of max of mean spectrum");
  }
};

int cmd_ingest(const std::string& data, const std::string& schema,
               const std::string& signals_dir, const WaveletFlags& wf,
               const std::string& out_dir) {
  ensure_dir(out_dir);
  LoadResult loaded = load_table(data, schema);
  if (!signals_dir.empty()) {
    enrich_with_signals(loaded.rows, signals_dir, wf.params(), loaded.warnings);
  }
  write_participants(out_dir + "/participants.csv", loaded.rows);
  {
    std::ofstream diag(out_dir + "/diagnostics.csv");
    diag << "row,column,reason\n";
    for (const auto& d : loaded.rejected) {
      diag << d.row << ',' << d.column << ",\"" << d.reason << "\"\n";
    }
  }
  print_warnings(loaded.warnings);
  std::cout << "accepted " << loaded.rows.size() << " rows, rejected "
            << loaded.rejected.size() << " -> " << out_dir
            << "/participants.csv\n";
  return 0;
}

int cmd_wavelet(const std::string& signal_path, const WaveletFlags& wf,
                const std::string& out_path, const std::string& scalogram_path) {
  const RawSignal signal = load_raw_signal(signal_path);
  if (signal.short_recording) {
    std::cerr << "warning: recording shorter than the nominal 480 s\n";
  }
  const LdfSummary summary = ldf_summary(signal);
  const MorletParams params = wf.params();
  const Scalogram sg = cwt_morlet(signal, params);
  const BandFeatures bands =
      band_features(sg, canonical_bands(), params.per_time_max);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) raise(errc::io_error, "cannot write '" + out_path + "'");
    out = &file;
  }
  *out << "Ae,An,Am,Ar,Ac,Fe,Fn,Fm,Fr,Fc,M,sigma,Kv100\n";
  for (int b = 0; b < 5; ++b) {
    *out << csv::format_double(bands.per_band[b].amplitude) << ',';
  }
  for (int b = 0; b < 5; ++b) {
    *out << csv::format_double(bands.per_band[b].frequency) << ',';
  }
  *out << csv::format_double(summary.m) << ','
       << csv::format_double(summary.sigma) << ','
       << csv::format_double(summary.kv100) << '\n';

  if (!scalogram_path.empty()) {
    std::ofstream mat(scalogram_path);
    if (!mat) raise(errc::io_error, "cannot write '" + scalogram_path + "'");
    mat << "f_hz";
    for (double t : sg.times) mat << ',' << csv::format_double(t);
    mat << '\n';
    for (std::size_t f = 0; f < sg.n_freqs; ++f) {
      mat << csv::format_double(sg.frequencies[f]);
      for (std::size_t t = 0; t < sg.n_times; ++t) {
        mat << ',' << csv::format_double(sg.mod(f, t));
      }
      mat << '\n';
    }
  }
  return 0;
}

int cmd_synth(const SynthSpec& spec, const std::string& out_path) {
  const RawSignal signal = synthesize_signal(spec);
  write_raw_signal(out_path, signal);
  std::cout << "wrote " << signal.size() << " samples @ "
            << csv::format_double(signal.sample_rate) << " Hz -> " << out_path
            << '\n';
  return 0;
}

int cmd_score(const std::string& responses_path, const std::string& out_path,
              MulticlassPolicy policy) {
  const auto responses = read_responses(responses_path);
  write_label_file(out_path, responses, policy);
  std::cout << "scored " << responses.size() << " responses -> " << out_path
            << '\n';
  return 0;
}

// One run per grid cell: {feature_set} x {split} x {task} x {model}.
int cmd_train(RunConfig base, const std::string& schema,
              std::vector<std::string> feature_sets,
              std::vector<std::string> models, std::vector<std::string> splits,
              std::vector<std::string> tasks, int n_seeds, bool emit_plots,
              bool save_models) {
  base.out_dir = resolve_out_dir(base.out_dir);
  ensure_dir(base.out_dir);
  LoadResult loaded = load_table(base.data_path, schema);
  if (!base.signals_dir.empty()) {
    enrich_with_signals(loaded.rows, base.signals_dir, base.wavelet,
                        loaded.warnings);
  }
  print_warnings(loaded.warnings);

  if (n_seeds > 0) {
    base.split.seeds.clear();
    for (int s = 0; s < n_seeds; ++s) base.split.seeds.push_back(s);
  }

  std::vector<RunConfig> cells;
  for (const auto& fset : feature_sets) {
    for (const auto& scheme : splits) {
      for (const auto& task : tasks) {
        for (const auto& model : models) {
          RunConfig cell = base;
          cell.feature_set = parse_feature_set(fset);
          cell.split.scheme = parse_split_scheme(scheme);
          cell.model.task = parse_task(task);
          cell.model.kind = parse_model_kind(model);
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  const GridResult grid = run_grid(cells, loaded.rows, loaded.encoders);
  for (const auto& report : grid.reports) {
    const std::string stem = base.out_dir + "/run_" + report.run_id;
    std::ofstream(stem + ".json") << serialize_report(report);
    std::ofstream(stem + ".log")
        << "wall_seconds=" << report.wall_seconds << "\n";
    std::cout << "run " << report.run_id << ": "
              << model_kind_name(report.config.model.kind) << " "
              << feature_set_name(report.config.feature_set) << " "
              << split_scheme_name(report.config.split.scheme) << " "
              << task_name(report.config.model.task);
    for (const auto& [name, stat] : report.aggregate) {
      std::cout << "  " << name << "=" << csv::format_metric(stat.mean);
    }
    std::cout << '\n';

    if (save_models || emit_plots) {
      // Refit on all labeled rows for the saved artifact / plot points.
      const LabeledData data = build_labeled_data(
          loaded.rows, report.config.feature_set, report.config.encoding,
          report.config.model.task, report.config.multiclass_policy,
          loaded.encoders);
      FeatureMatrix x = data.x;
      std::vector<std::size_t> all(x.n_rows);
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      Imputer::fit(x, all).apply(x);
      const ModelArtifact model = train(report.config.model, x, data.y);
      if (save_models) save_model(stem + ".model.json", model);
      if (emit_plots && report.config.model.task == Task::binary) {
        const auto proba = predict_proba(model, x);
        std::vector<double> pos(x.n_rows);
        for (std::size_t r = 0; r < x.n_rows; ++r) pos[r] = proba[r * 2 + 1];
        write_roc_points(stem + ".roc_points.csv", roc_curve(pos, data.y));
        write_pr_points(stem + ".pr_points.csv", pr_curve(pos, data.y));
      }
    }
  }
  for (const auto& [cell, what] : grid.failures) {
    std::cerr << "cell " << cell << " failed: " << what << '\n';
  }
  if (!grid.failures.empty()) {
    std::cerr << errc_name(errc::partial_grid_failure) << ": "
              << grid.failures.size() << " of " << cells.size()
              << " cells failed\n";
    return grid.reports.empty() ? 1 : 2;
  }
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& schema, const std::string& out_dir,
                 bool emit_plots) {
  const std::string dir = resolve_out_dir(out_dir);
  ensure_dir(dir);
  const ModelArtifact model = load_model(model_path);
  LoadResult loaded = load_table(data_path, schema);
  print_warnings(loaded.warnings);
  const Task task = model.task;
  const LabeledData data =
      build_labeled_data(loaded.rows, FeatureSet::all, Encoding::ordinal, task,
                         MulticlassPolicy::strict, loaded.encoders);
  // Rebuild with the model's own feature set by name.
  FeatureMatrix x = data.x;
  std::vector<std::size_t> all(x.n_rows);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Imputer::fit(x, all).apply(x);
  // Reduce columns to the model schema.
  FeatureMatrix xs;
  xs.n_rows = x.n_rows;
  xs.patient_ids = x.patient_ids;
  for (const auto& name : model.feature_names) {
    const int c = x.column_index(name);
    if (c < 0) raise(errc::schema_mismatch, "missing column '" + name + "'");
    xs.columns.push_back(x.columns[c]);
  }
  xs.n_cols = xs.columns.size();
  xs.values.resize(xs.n_rows * xs.n_cols);
  for (std::size_t r = 0; r < xs.n_rows; ++r) {
    for (std::size_t c = 0; c < xs.n_cols; ++c) {
      xs.at(r, c) = x.at(r, std::size_t(x.column_index(model.feature_names[c])));
    }
  }

  const auto proba = predict_proba(model, xs);
  std::ofstream out(dir + "/evaluation.csv");
  out << "metric,value\n";
  if (task == Task::binary) {
    std::vector<double> pos(xs.n_rows);
    for (std::size_t r = 0; r < xs.n_rows; ++r) pos[r] = proba[r * 2 + 1];
    out << "roc_auc," << csv::format_metric(roc_auc(pos, data.y)) << '\n';
    out << "pr_auc," << csv::format_metric(pr_auc(pos, data.y)) << '\n';
    if (emit_plots) {
      write_roc_points(dir + "/roc_points.csv", roc_curve(pos, data.y));
      write_pr_points(dir + "/pr_points.csv", pr_curve(pos, data.y));
    }
  } else {
    const int k = model.n_classes;
    out << "macro_ovr_auc,"
        << csv::format_metric(
               macro_multiclass_auc(proba, data.y, k, MulticlassAucMode::ovr).value)
        << '\n';
    out << "macro_ovo_auc,"
        << csv::format_metric(
               macro_multiclass_auc(proba, data.y, k, MulticlassAucMode::ovo).value)
        << '\n';
    const auto prf = macro_prf(predict_label(model, xs), data.y, k);
    out << "macro_precision," << csv::format_metric(prf.precision) << '\n';
    out << "macro_recall," << csv::format_metric(prf.recall) << '\n';
    out << "macro_f1," << csv::format_metric(prf.f1) << '\n';
  }
  std::cout << "wrote " << dir << "/evaluation.csv\n";
  return 0;
}

int cmd_explain(const std::string& model_path, const std::string& data_path,
                const std::string& schema, const std::string& out_dir,
                bool probability_space) {
  const std::string dir = resolve_out_dir(out_dir);
  ensure_dir(dir);
  const ModelArtifact model = load_model(model_path);
  LoadResult loaded = load_table(data_path, schema);
  print_warnings(loaded.warnings);
  const LabeledData data =
      build_labeled_data(loaded.rows, FeatureSet::all, Encoding::ordinal,
                         model.task, MulticlassPolicy::strict, loaded.encoders);
  FeatureMatrix x = data.x;
  std::vector<std::size_t> all(x.n_rows);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Imputer::fit(x, all).apply(x);
  FeatureMatrix xs;
  xs.n_rows = x.n_rows;
  xs.patient_ids = x.patient_ids;
  for (const auto& name : model.feature_names) {
    const int c = x.column_index(name);
    if (c < 0) raise(errc::schema_mismatch, "missing column '" + name + "'");
    xs.columns.push_back(x.columns[c]);
  }
  xs.n_cols = xs.columns.size();
  xs.values.resize(xs.n_rows * xs.n_cols);
  for (std::size_t r = 0; r < xs.n_rows; ++r) {
    for (std::size_t c = 0; c < xs.n_cols; ++c) {
      xs.at(r, c) = x.at(r, std::size_t(x.column_index(model.feature_names[c])));
    }
  }

  ShapAttribution attr = tree_shap(model, xs);
  if (probability_space) {
    // Approximate probability-space deltas through the logistic map.
    for (int o = 0; o < attr.n_outputs; ++o) {
      for (std::size_t r = 0; r < attr.n_rows; ++r) {
        double margin = attr.base_value[o];
        for (std::size_t f = 0; f < attr.n_features; ++f) {
          margin += attr.at(o, r, f);
        }
        const double p_full = 1.0 / (1.0 + std::exp(-margin));
        const double p_base = 1.0 / (1.0 + std::exp(-attr.base_value[o]));
        const double margin_delta = margin - attr.base_value[o];
        if (margin_delta != 0.0) {
          const double scale = (p_full - p_base) / margin_delta;
          for (std::size_t f = 0; f < attr.n_features; ++f) {
            attr.at(o, r, f) *= scale;
          }
        }
      }
    }
    std::cerr << "warning: probability-space attributions are approximate "
                 "(linearized logistic map)\n";
  }
  write_shap_csv(dir + "/shap.csv", attr, xs);
  const ShapSummary summary = shap_summary(attr);
  write_shap_summary(dir + "/shap_summary.csv", summary, model.feature_names);
  std::cout << "wrote " << dir << "/shap.csv and shap_summary.csv\n";
  return 0;
}

int cmd_stats(const std::string& data_path, const std::string& schema,
              const std::string& out_dir) {
  const std::string dir = resolve_out_dir(out_dir);
  ensure_dir(dir);
  LoadResult loaded = load_table(data_path, schema);
  print_warnings(loaded.warnings);
  const StatsReport report = compute_group_stats(loaded.rows);
  print_warnings(report.warnings);
  write_stats_csv(dir + "/stats.csv", report.comparisons);
  write_prevalence_csv(dir + "/prevalence.csv", report.prevalence);
  std::cout << "participants: " << report.prevalence.n_participants
            << "  stress " << csv::format_metric(report.prevalence.stress)
            << "  anxiety " << csv::format_metric(report.prevalence.anxiety)
            << "  depression "
            << csv::format_metric(report.prevalence.depression) << '\n';
  std::cout << "wrote " << dir << "/stats.csv and prevalence.csv\n";
  return 0;
}

int cmd_report(const std::string& runs_dir, const std::string& out_path) {
  std::vector<RunReport> reports;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    const auto& p = entry.path();
    if (p.extension() == ".json" &&
        p.filename().string().rfind("run_", 0) == 0) {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream in(p);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    reports.push_back(deserialize_report(text));
  }
  const std::string table = render_report_table(reports);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    std::ofstream(out_path) << table;
    std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wearable LDF/FS + DAS-21 mental-health classification pipeline"};
  app.require_subcommand(1);

  // ingest
  std::string data_path, schema_path, signals_dir, out_dir;
  WaveletFlags wf;
  auto* ingest = app.add_subcommand("ingest", "validate and normalize a participant table");
  ingest->add_option("--data", data_path, "participant table")->required();
  ingest->add_option("--schema", schema_path, "schema config (json)");
  ingest->add_option("--signals", signals_dir, "directory with raw signal files");
  ingest->add_option("--out", out_dir, "output directory");
  wf.attach(ingest);

  // wavelet
  std::string signal_path, band_out, scalogram_out;
  WaveletFlags wf_w;
  auto* wavelet = app.add_subcommand("wavelet", "band features of one recording");
  wavelet->add_option("--signal", signal_path, "t_s,perfusion_pu file")->required();
  wavelet->add_option("--out", band_out, "band feature csv (stdout if absent)");
  wavelet->add_option("--scalogram", scalogram_out, "dense |W(f,t)| matrix dump");
  wf_w.attach(wavelet);

  // synth
  SynthSpec synth_spec;
  std::vector<std::string> component_flags;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "synthesize a test signal");
  synth->add_option("--duration", synth_spec.duration, "seconds");
  synth->add_option("--rate", synth_spec.sample_rate, "Hz");
  synth->add_option("--baseline", synth_spec.baseline, "PU");
  synth->add_option("--noise", synth_spec.noise_sigma, "gaussian sigma (PU)");
  synth->add_option("--seed", synth_spec.seed, "rng seed");
  synth->add_option("--component", component_flags,
                    "freq:amp[:phase], repeatable");
  synth->add_option("--out", synth_out, "output file")->required();

  // score-das21
  std::string responses_path, labels_out, policy_name = "strict";
  auto* score = app.add_subcommand("score-das21", "score DAS-21 responses");
  score->add_option("--responses", responses_path, "patient_id,q1..q21 file")
      ->required();
  score->add_option("--out", labels_out, "label file")->required();
  score->add_option("--policy", policy_name, "strict|rank");

  // train
  RunConfig train_cfg;
  std::string train_schema;
  std::vector<std::string> fsets{"all"}, models{"gbdt"}, splits{"kfold"},
      tasks{"binary"};
  int n_seeds = 0;
  bool emit_plots = false, save_models = false, patient_wise = false;
  auto* tr = app.add_subcommand("train", "train/evaluate a model grid");
  tr->add_option("--data", train_cfg.data_path, "participant table")->required();
  tr->add_option("--schema", train_schema, "schema config (json)");
  tr->add_option("--signals", train_cfg.signals_dir, "raw signals directory");
  tr->add_option("--out", train_cfg.out_dir, "output directory");
  std::string train_config_path;
  tr->add_option("--config", train_config_path,
                 "run config json (base values; explicit flags override)")
      ->check(CLI::ExistingFile);
  tr->add_option("--feature-set", fsets, "all|sensor_only|top10 (repeatable)");
  tr->add_option("--model", models, "gbdt|random_forest|linear_svm|mlp");
  tr->add_option("--split", splits, "8020|kfold|lopo");
  tr->add_option("--task", tasks, "binary|multiclass");
  tr->add_option("--k", train_cfg.split.k, "folds for kfold");
  tr->add_option("--seeds", n_seeds, "number of seeds (0..n-1)");
  tr->add_option("--seed", train_cfg.model.seed, "model seed");
  tr->add_flag("--patient-wise", patient_wise, "patient-wise 80:20 split");
  tr->add_flag("--emit-plots", emit_plots, "write roc/pr point files");
  tr->add_flag("--save-models", save_models, "save refit model artifacts");
  std::string mc_policy = "strict";
  tr->add_option("--multiclass-policy", mc_policy, "strict|rank");
  tr->add_option("--rounds", train_cfg.model.hp.gbdt.rounds, "gbdt rounds");
  tr->add_option("--depth", train_cfg.model.hp.gbdt.max_depth, "gbdt depth");
  tr->add_option("--lr", train_cfg.model.hp.gbdt.learning_rate, "gbdt shrinkage");
  tr->add_option("--min-leaf", train_cfg.model.hp.gbdt.min_leaf, "gbdt min leaf");
  tr->add_option("--trees", train_cfg.model.hp.forest.n_trees, "forest trees");

  // evaluate
  std::string eval_model, eval_data, eval_schema, eval_out;
  bool eval_plots = false;
  auto* ev = app.add_subcommand("evaluate", "evaluate a saved model on a table");
  ev->add_option("--model", eval_model, "model json")->required();
  ev->add_option("--data", eval_data, "participant table")->required();
  ev->add_option("--schema", eval_schema, "schema config");
  ev->add_option("--out", eval_out, "output directory");
  ev->add_flag("--emit-plots", eval_plots, "write roc/pr point files");

  // explain
  std::string ex_model, ex_data, ex_schema, ex_out;
  bool prob_space = false;
  auto* ex = app.add_subcommand("explain", "TreeSHAP attributions for a model");
  ex->add_option("--model", ex_model, "model json")->required();
  ex->add_option("--data", ex_data, "participant table")->required();
  ex->add_option("--schema", ex_schema, "schema config");
  ex->add_option("--out", ex_out, "output directory");
  ex->add_flag("--probability-space", prob_space,
               "also map attributions through the logistic (approximate)");

  // stats
  std::string st_data, st_schema, st_out;
  auto* st = app.add_subcommand("stats", "group comparisons and prevalence");
  st->add_option("--data", st_data, "participant table")->required();
  st->add_option("--schema", st_schema, "schema config");
  st->add_option("--out", st_out, "output directory");

  // report
  std::string rp_dir, rp_out;
  auto* rp = app.add_subcommand("report", "render a markdown summary table");
  rp->add_option("--runs", rp_dir, "directory with run_*.json")->required();
  rp->add_option("--out", rp_out, "markdown file (stdout if absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      return cmd_ingest(data_path, schema_path, signals_dir, wf,
                        resolve_out_dir(out_dir));
    }
    if (*wavelet) return cmd_wavelet(signal_path, wf_w, band_out, scalogram_out);
    if (*synth) {
      for (const auto& flag : component_flags) {
        SynthComponent c;
        const auto p1 = flag.find(':');
        if (p1 == std::string::npos) {
          raise(errc::config_error, "--component needs freq:amp[:phase]");
        }
        c.frequency = std::stod(flag.substr(0, p1));
        const auto p2 = flag.find(':', p1 + 1);
        if (p2 == std::string::npos) {
          c.amplitude = std::stod(flag.substr(p1 + 1));
        } else {
          c.amplitude = std::stod(flag.substr(p1 + 1, p2 - p1 - 1));
          c.phase = std::stod(flag.substr(p2 + 1));
        }
        synth_spec.components.push_back(c);
      }
      return cmd_synth(synth_spec, synth_out);
    }
    if (*score) {
      const MulticlassPolicy policy = policy_name == "rank"
                                          ? MulticlassPolicy::rank
                                          : MulticlassPolicy::strict;
      return cmd_score(responses_path, labels_out, policy);
    }
    if (*tr) {
      if (!train_config_path.empty()) {
        RunConfig from_file = load_config(train_config_path);
        // Explicit flags win over the config file.
        if (tr->count("--data")) from_file.data_path = train_cfg.data_path;
        if (tr->count("--signals")) from_file.signals_dir = train_cfg.signals_dir;
        if (tr->count("--out")) from_file.out_dir = train_cfg.out_dir;
        if (tr->count("--k")) from_file.split.k = train_cfg.split.k;
        if (tr->count("--seed")) from_file.model.seed = train_cfg.model.seed;
        if (tr->count("--rounds")) from_file.model.hp.gbdt.rounds = train_cfg.model.hp.gbdt.rounds;
        if (tr->count("--depth")) from_file.model.hp.gbdt.max_depth = train_cfg.model.hp.gbdt.max_depth;
        if (tr->count("--lr")) from_file.model.hp.gbdt.learning_rate = train_cfg.model.hp.gbdt.learning_rate;
        if (tr->count("--min-leaf")) from_file.model.hp.gbdt.min_leaf = train_cfg.model.hp.gbdt.min_leaf;
        if (tr->count("--trees")) from_file.model.hp.forest.n_trees = train_cfg.model.hp.forest.n_trees;
        train_cfg = std::move(from_file);
      }
      train_cfg.split.patient_wise_8020 = patient_wise;
      train_cfg.multiclass_policy = mc_policy == "rank" ? MulticlassPolicy::rank
                                                        : MulticlassPolicy::strict;
      return cmd_train(train_cfg, train_schema, fsets, models, splits, tasks,
                       n_seeds, emit_plots, save_models);
    }
    if (*ev) return cmd_evaluate(eval_model, eval_data, eval_schema, eval_out, eval_plots);
    if (*ex) return cmd_explain(ex_model, ex_data, ex_schema, ex_out, prob_space);
    if (*st) return cmd_stats(st_data, st_schema, st_out);
    if (*rp) return cmd_report(rp_dir, rp_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
