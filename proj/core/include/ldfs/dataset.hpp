#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldfs/das21.hpp"

namespace ldfs {

enum class Gender { male, female };
enum class Race { asian, white, african, other };
enum class Smoking { never, former, current };
enum class Hand { left, right };
enum class SleepState { awake, sleeping };

struct ParticipantRecord {
  std::string patient_id;
  std::optional<int> age;  // years, >= 18
  std::optional<Gender> gender;
  std::optional<Race> race;
  std::optional<double> height;      // cm
  std::optional<double> weight;      // kg
  std::optional<double> bmi_index;   // kg/m^2
  std::optional<double> heart_rate;  // beats/min
  std::optional<std::string> bp_level;       // ordinal category
  std::optional<Smoking> smoking_routine;
  std::optional<std::string> skin_type;      // ordinal category
  std::optional<Hand> hand;
  std::optional<SleepState> sleep_state;
  std::optional<std::string> data_type;      // free category
};

// Device parameters of one measurement: LDF summaries, fluorescence channels
// and the five oscillation-band amplitude/frequency pairs (Ae..Ac, Fe..Fc).
struct SensorFeatureVector {
  std::optional<double> m;        // mean perfusion, PU
  std::optional<double> sigma;    // oscillation RMS deviation, PU
  std::optional<double> kv100;    // 100 * sigma / m
  std::optional<double> a365;     // backscatter amplitude, a.u.
  std::optional<double> a460;     // NADH fluorescence amplitude, a.u.
  std::optional<double> anadh;    // relative NADH amplitude, a.u. (ingested)
  std::optional<double> pom;      // oxidative-metabolism index, a.u. (ingested)
  std::optional<double> temperature;  // deg C
  std::array<std::optional<double>, 5> band_amplitude;  // Ae,An,Am,Ar,Ac
  std::array<std::optional<double>, 5> band_frequency;  // Fe,Fn,Fm,Fr,Fc
};

struct ParticipantRow {
  ParticipantRecord participant;
  SensorFeatureVector sensors;
  std::optional<Das21Response> das;
  std::optional<std::string> signal_file;  // optional raw-signal reference
  // Unknown numeric columns are preserved (name -> value), sorted by name.
  std::vector<std::pair<std::string, std::optional<double>>> extras;
};

struct RowDiagnostic {
  std::size_t row;     // 0-based data-row index in the source file
  std::string column;  // canonical name, or "" for whole-row issues
  std::string reason;
};

struct LoadResult {
  std::vector<ParticipantRow> rows;       // accepted rows
  std::vector<RowDiagnostic> rejected;    // BadValue diagnostics, row-indexed
  std::vector<std::string> warnings;
  // Encoder overrides from the schema config, forwarded to assembly.
  std::map<std::string, std::map<std::string, int>> encoders;
};

// Header aliasing and per-column category encoders. Sections mirror the
// schema config file: {"aliases": {...}, "required": [...], "encoders": {...}}.
struct SchemaConfig {
  std::map<std::string, std::string> aliases;  // normalized header -> canonical
  std::vector<std::string> required;           // canonical names
  std::map<std::string, std::map<std::string, int>> encoders;

  static SchemaConfig defaults();
  // Parses a JSON schema file and merges it over defaults().
  static SchemaConfig load(const std::string& path);
};

// Reads a participant table. Throws EmptyFile / MissingColumn for file-level
// problems; rows violating hard invariants are rejected into `rejected`.
LoadResult load_participants(const std::string& path,
                             const SchemaConfig& schema = SchemaConfig::defaults());

// Canonical writer; load_participants on its output reproduces the records
// bit-exactly.
void write_participants(const std::string& path,
                        std::span<const ParticipantRow> rows);

enum class FeatureSet { all, sensor_only, top10 };
enum class ImputePolicy { none, median_all_rows };
enum class Encoding { ordinal, onehot };

FeatureSet parse_feature_set(const std::string& name);  // UnknownFeatureSet
const char* feature_set_name(FeatureSet set) noexcept;

enum class ColumnKind { numeric, ordinal, onehot };

struct ColumnMeta {
  std::string name;           // output column name
  std::string source;         // canonical source field
  ColumnKind kind = ColumnKind::numeric;
  // Encoder map for ordinal/onehot columns: code i encodes categories[i];
  // missing/unknown categories encode as -1 (ordinal) or all-zeros (onehot).
  std::vector<std::string> categories;
};

struct FeatureMatrix {
  std::vector<ColumnMeta> columns;
  std::vector<std::string> patient_ids;  // parallel to rows
  std::vector<double> values;            // row-major, n_rows x n_cols
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;

  double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * n_cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * n_cols, n_cols};
  }
  int column_index(const std::string& name) const;  // -1 when absent
  std::vector<std::string> column_names() const;
};

// Builds the encoded feature matrix for one of the named feature sets.
// ImputePolicy::median_all_rows fills numeric gaps with the all-rows median
// (leakage-free per-fold imputation is done with Imputer below); categorical
// gaps always encode as the dedicated unknown code. Throws AllRowsDropped on
// empty input.
using EncoderOverrides = std::map<std::string, std::map<std::string, int>>;

FeatureMatrix assemble_feature_matrix(std::span<const ParticipantRow> rows,
                                      FeatureSet set,
                                      ImputePolicy impute,
                                      Encoding encoding = Encoding::ordinal,
                                      const EncoderOverrides& overrides = {});

// Median imputer fit on a row subset (the training split) and applied to any
// matrix with the same columns. Never alters non-missing cells.
class Imputer {
 public:
  static Imputer fit(const FeatureMatrix& x, std::span<const std::size_t> rows);
  void apply(FeatureMatrix& x) const;
  const std::vector<double>& medians() const { return medians_; }

 private:
  std::vector<double> medians_;
};

FeatureMatrix select_rows(const FeatureMatrix& x,
                          std::span<const std::size_t> rows);

// Test/tooling helper: matrix from literal rows with numeric columns.
FeatureMatrix make_matrix(std::vector<std::string> names,
                          const std::vector<std::vector<double>>& rows,
                          std::vector<std::string> patient_ids = {});

}  // namespace ldfs
