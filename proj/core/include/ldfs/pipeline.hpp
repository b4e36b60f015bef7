#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldfs/dataset.hpp"
#include "ldfs/metrics.hpp"
#include "ldfs/models.hpp"
#include "ldfs/splits.hpp"
#include "ldfs/stats.hpp"
#include "ldfs/wavelet.hpp"

namespace ldfs {

struct SplitSpec {
  SplitScheme scheme = SplitScheme::kfold_patient;
  int k = 5;
  std::vector<std::uint64_t> seeds = {42};  // one run per seed (lopo: one run)
  bool patient_wise_8020 = false;
};

struct RunConfig {
  std::string data_path;
  std::string signals_dir;  // resolves relative signal_file references
  std::string out_dir;
  MorletParams wavelet;
  FeatureSet feature_set = FeatureSet::all;
  Encoding encoding = Encoding::ordinal;
  ModelSpec model;
  SplitSpec split;
  MulticlassPolicy multiclass_policy = MulticlassPolicy::strict;
};

std::string serialize_config(const RunConfig& cfg);
RunConfig deserialize_config(const std::string& text);
RunConfig load_config(const std::string& path);

struct LabeledData {
  FeatureMatrix x;  // pre-imputation; folds impute with their own medians
  std::vector<int> y;
  int n_classes = 2;
  std::vector<std::string> warnings;
};

// Labels rows via das21; rows without a DAS response are dropped with a
// counted warning, as are non-canonical combinations under `strict`.
LabeledData build_labeled_data(std::span<const ParticipantRow> rows,
                               FeatureSet set, Encoding encoding, Task task,
                               MulticlassPolicy policy,
                               const EncoderOverrides& encoders = {});

// For rows referencing a raw-signal file, computes M/sigma/Kv and the five
// band features and fills any missing sensor fields.
void enrich_with_signals(std::vector<ParticipantRow>& rows,
                         const std::string& base_dir,
                         const MorletParams& params,
                         std::vector<std::string>& warnings);

struct AggregateStat {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct RunReport {
  std::string run_id;  // hash of the canonical config
  RunConfig config;
  std::vector<MetricReport> folds;
  std::map<std::string, AggregateStat> aggregate;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;  // kept out of the serialized payload
};

// Trains/evaluates one grid cell over its split plan. k-fold and 80:20
// produce one MetricReport per fold per seed; LOPO pools its single-patient
// folds into one report (per-fold AUC is undefined there).
RunReport run_training(const RunConfig& cfg, const LabeledData& data);

// Deterministic payload: config echo, fold metrics, aggregates; no wall
// clock. Byte-identical across reruns of an identical config.
std::string serialize_report(const RunReport& report);
RunReport deserialize_report(const std::string& text);

struct GridResult {
  std::vector<RunReport> reports;
  std::vector<std::pair<std::size_t, std::string>> failures;  // cell -> error
};

GridResult run_grid(std::span<const RunConfig> cells,
                    std::span<const ParticipantRow> rows,
                    const EncoderOverrides& encoders = {});

// Markdown table shaped like the paper's result tables (4-decimal metrics).
std::string render_report_table(std::span<const RunReport> reports);

// Per-feature wellbeing vs non-wellbeing comparisons plus prevalence.
struct StatsReport {
  std::vector<GroupComparison> comparisons;
  ConditionPrevalence prevalence;
  std::vector<std::string> warnings;
};

StatsReport compute_group_stats(std::span<const ParticipantRow> rows);
void write_stats_csv(const std::string& path,
                     std::span<const GroupComparison> comparisons);
void write_prevalence_csv(const std::string& path,
                          const ConditionPrevalence& prevalence);

// score-das21 output: patient_id,binary,multiclass,dep/anx/str finals+levels.
void write_label_file(const std::string& path,
                      std::span<const PatientResponse> responses,
                      MulticlassPolicy policy);

}  // namespace ldfs
