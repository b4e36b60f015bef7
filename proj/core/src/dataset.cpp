#include "ldfs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Lowercase, collapse separators to '_', keep letters/digits/UTF-8 bytes.
std::string normalize_header(const std::string& raw) {
  std::string s = csv::to_lower(csv::trim(raw));
  std::string out;
  out.reserve(s.size());
  bool sep = false;
  for (unsigned char c : s) {
    if (c == ' ' || c == '-' || c == '_' || c == '.' || c == '/') {
      sep = !out.empty();
      continue;
    }
    if (sep) {
      out += '_';
      sep = false;
    }
    out += char(c);
  }
  return out;
}

const std::array<const char*, 5> kBandAmpNames = {"ae", "an", "am", "ar", "ac"};
const std::array<const char*, 5> kBandFreqNames = {"fe", "fn", "fm", "fr", "fc"};

}  // namespace

SchemaConfig SchemaConfig::defaults() {
  SchemaConfig cfg;
  auto add = [&](std::initializer_list<const char*> names, const char* canon) {
    for (const char* n : names) cfg.aliases[n] = canon;
  };
  add({"patient_id", "patientid", "patient", "id"}, "patient_id");
  add({"age"}, "age");
  add({"gender", "sex"}, "gender");
  add({"race"}, "race");
  add({"height", "height_cm"}, "height");
  add({"weight", "weight_kg"}, "weight");
  add({"bmi_index", "bmi"}, "bmi_index");
  add({"heart_rate", "heartrate", "hr", "pulse"}, "heart_rate");
  add({"level_of_bp", "bp_level", "blood_pressure", "bp"}, "bp_level");
  add({"smoking_routine", "smoking", "smoke"}, "smoking_routine");
  add({"type_of_skins", "type_of_skin", "skin_type", "skins"}, "skin_type");
  add({"hand"}, "hand");
  add({"sleep_state", "sleep", "sleep_during_experiment"}, "sleep_state");
  add({"type_of_data", "data_type"}, "data_type");
  add({"m"}, "m");
  add({"\xcf\x83", "\xce\xb4", "sigma", "delta"}, "sigma");  // σ, δ
  add({"kv100", "kv"}, "kv100");
  add({"a365"}, "a365");
  add({"a460"}, "a460");
  add({"anadn", "anadh", "nadh"}, "anadh");
  add({"pom"}, "pom");
  add({"t", "temperature", "temp"}, "temperature");
  for (int b = 0; b < 5; ++b) {
    cfg.aliases[kBandAmpNames[b]] = kBandAmpNames[b];
    const std::string a_alt = std::string("a_") + kBandAmpNames[b][1];  // a_e
    cfg.aliases[a_alt] = kBandAmpNames[b];
    cfg.aliases[kBandFreqNames[b]] = kBandFreqNames[b];
    const std::string f_alt = std::string("f_") + kBandAmpNames[b];  // f_ae
    cfg.aliases[f_alt] = kBandFreqNames[b];
    const std::string f_alt2 = std::string("f_") + kBandAmpNames[b][1];  // f_e
    cfg.aliases[f_alt2] = kBandFreqNames[b];
  }
  for (int q = 1; q <= 21; ++q) {
    cfg.aliases["q" + std::to_string(q)] = "q" + std::to_string(q);
  }
  add({"signal_file", "signal", "signal_path"}, "signal_file");
  cfg.required = {"patient_id"};
  return cfg;
}

SchemaConfig SchemaConfig::load(const std::string& path) {
  SchemaConfig cfg = defaults();
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open schema '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::config_error, "schema '" + path + "': " + e.what());
  }
  if (j.contains("aliases")) {
    for (auto& [k, v] : j["aliases"].items()) {
      cfg.aliases[normalize_header(k)] = v.get<std::string>();
    }
  }
  if (j.contains("required")) {
    cfg.required = j["required"].get<std::vector<std::string>>();
  }
  if (j.contains("encoders")) {
    for (auto& [col, m] : j["encoders"].items()) {
      std::map<std::string, int> enc;
      for (auto& [cat, code] : m.items()) enc[cat] = code.get<int>();
      cfg.encoders[col] = std::move(enc);
    }
  }
  return cfg;
}

namespace {

struct ColumnIndex {
  std::map<std::string, int> canon_to_col;  // canonical -> source column
  std::vector<int> extra_cols;              // unresolved columns
};

ColumnIndex resolve_columns(const csv::Table& t, const SchemaConfig& schema,
                            std::vector<std::string>& warnings) {
  ColumnIndex idx;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const std::string norm = normalize_header(t.header[c]);
    const auto it = schema.aliases.find(norm);
    if (it == schema.aliases.end()) {
      idx.extra_cols.push_back(int(c));
      continue;
    }
    if (!idx.canon_to_col.emplace(it->second, int(c)).second) {
      warnings.push_back("duplicate column for '" + it->second +
                         "' (header '" + t.header[c] + "' ignored)");
    }
  }
  for (const auto& req : schema.required) {
    if (!idx.canon_to_col.count(req)) raise(errc::missing_column, req);
  }
  return idx;
}

struct RowParser {
  const csv::Table& t;
  const ColumnIndex& idx;
  std::size_t r;
  RowDiagnostic* fail = nullptr;  // first failure, set by check helpers

  std::string cell(const std::string& canon) const {
    const auto it = idx.canon_to_col.find(canon);
    if (it == idx.canon_to_col.end()) return "";
    return csv::trim(t.rows[r][it->second]);
  }

  bool has(const std::string& canon) const {
    return !csv::is_missing(cell(canon));
  }

  void reject(const std::string& column, const std::string& reason,
              RowDiagnostic& out) const {
    out = {r, column, reason};
  }
};

}  // namespace

LoadResult load_participants(const std::string& path, const SchemaConfig& schema) {
  const csv::Table t = csv::read_table(path);
  LoadResult result;
  result.encoders = schema.encoders;
  ColumnIndex idx = resolve_columns(t, schema, result.warnings);

  // Unknown columns become extra numeric features when every non-missing cell
  // parses as a number; otherwise the column is skipped with a warning.
  std::vector<int> numeric_extras;
  for (int c : idx.extra_cols) {
    bool numeric = true;
    for (const auto& row : t.rows) {
      if (!csv::is_missing(row[c]) && !csv::parse_number(row[c])) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      numeric_extras.push_back(c);
    } else {
      result.warnings.push_back("ignoring non-numeric unknown column '" +
                                t.header[c] + "'");
    }
  }
  std::sort(numeric_extras.begin(), numeric_extras.end(),
            [&](int a, int b) { return t.header[a] < t.header[b]; });

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    RowParser p{t, idx, r};
    RowDiagnostic diag;
    bool ok = true;
    ParticipantRow row;

    auto fail = [&](const std::string& col, const std::string& reason) {
      if (ok) p.reject(col, reason, diag);
      ok = false;
    };

    auto number = [&](const std::string& canon) -> std::optional<double> {
      const std::string c = p.cell(canon);
      if (csv::is_missing(c)) return std::nullopt;
      const auto v = csv::parse_number(c);
      if (!v) fail(canon, "'" + c + "' is not numeric");
      return v;
    };
    auto positive = [&](const std::string& canon) -> std::optional<double> {
      auto v = number(canon);
      if (v && !(*v > 0.0)) fail(canon, "must be > 0");
      return v;
    };
    auto non_negative = [&](const std::string& canon) -> std::optional<double> {
      auto v = number(canon);
      if (v && *v < 0.0) fail(canon, "must be >= 0");
      return v;
    };
    auto category = [&](const std::string& canon) -> std::optional<std::string> {
      const std::string c = p.cell(canon);
      if (csv::is_missing(c)) return std::nullopt;
      return c;
    };

    auto& rec = row.participant;
    rec.patient_id = p.cell("patient_id");
    if (rec.patient_id.empty()) fail("patient_id", "missing patient id");

    if (auto v = number("age")) {
      if (*v != std::floor(*v)) fail("age", "not an integer");
      else if (*v < 18) fail("age", "below the 18-year minimum");
      else rec.age = int(*v);
    }
    if (auto g = category("gender")) {
      const std::string v = csv::to_lower(*g);
      if (v == "male" || v == "m") rec.gender = Gender::male;
      else if (v == "female" || v == "f") rec.gender = Gender::female;
      else fail("gender", "unknown value '" + *g + "'");
    }
    if (auto rv = category("race")) {
      const std::string v = csv::to_lower(*rv);
      if (v == "asian") rec.race = Race::asian;
      else if (v == "white" || v == "caucasian") rec.race = Race::white;
      else if (v == "african" || v == "black") rec.race = Race::african;
      else rec.race = Race::other;
    }
    rec.height = positive("height");
    rec.weight = positive("weight");
    rec.bmi_index = positive("bmi_index");
    rec.heart_rate = positive("heart_rate");
    if (rec.height && rec.weight && rec.bmi_index) {
      const double hm = *rec.height / 100.0;
      const double computed = *rec.weight / (hm * hm);
      if (std::abs(*rec.bmi_index - computed) > 0.5) {
        fail("bmi_index", "inconsistent with height/weight (computed " +
                              csv::format_metric(computed) + ")");
      }
    }
    rec.bp_level = category("bp_level");
    if (auto s = category("smoking_routine")) {
      const std::string v = csv::to_lower(*s);
      if (v == "never" || v == "no" || v == "non" || v == "non-smoker") {
        rec.smoking_routine = Smoking::never;
      } else if (v == "former" || v == "used to" || v == "quit" || v == "ex") {
        rec.smoking_routine = Smoking::former;
      } else if (v == "current" || v == "yes" || v == "smoker" || v == "smoking") {
        rec.smoking_routine = Smoking::current;
      } else {
        fail("smoking_routine", "unknown value '" + *s + "'");
      }
    }
    rec.skin_type = category("skin_type");
    if (auto h = category("hand")) {
      const std::string v = csv::to_lower(*h);
      if (v == "left" || v == "l") rec.hand = Hand::left;
      else if (v == "right" || v == "r") rec.hand = Hand::right;
      else fail("hand", "unknown value '" + *h + "'");
    }
    if (auto s = category("sleep_state")) {
      const std::string v = csv::to_lower(*s);
      if (v == "awake" || v == "no") rec.sleep_state = SleepState::awake;
      else if (v == "sleeping" || v == "asleep" || v == "yes") {
        rec.sleep_state = SleepState::sleeping;
      } else {
        fail("sleep_state", "unknown value '" + *s + "'");
      }
    }
    rec.data_type = category("data_type");

    auto& sf = row.sensors;
    sf.m = non_negative("m");
    sf.sigma = non_negative("sigma");
    sf.kv100 = non_negative("kv100");
    sf.a365 = non_negative("a365");
    sf.a460 = non_negative("a460");
    sf.anadh = number("anadh");
    sf.pom = non_negative("pom");
    sf.temperature = number("temperature");
    for (int b = 0; b < 5; ++b) {
      sf.band_amplitude[b] = number(kBandAmpNames[b]);
      sf.band_frequency[b] = number(kBandFreqNames[b]);
    }

    // DAS items: all 21 present -> response; partially present -> warning.
    int n_items = 0;
    Das21Response resp;
    for (int q = 1; q <= 21; ++q) {
      if (auto v = number("q" + std::to_string(q))) {
        if (*v != std::floor(*v) || *v < 0 || *v > 3) {
          fail("q" + std::to_string(q), "item outside 0..3");
        } else {
          resp.items[q - 1] = int(*v);
          ++n_items;
        }
      }
    }
    if (n_items == 21) {
      row.das = resp;
    } else if (n_items > 0 && ok) {
      result.warnings.push_back("row " + std::to_string(r) +
                                ": incomplete DAS-21 response ignored");
    }

    row.signal_file = category("signal_file");

    for (int c : numeric_extras) {
      row.extras.emplace_back(t.header[c], csv::parse_number(t.rows[r][c]));
    }

    if (ok) {
      result.rows.push_back(std::move(row));
    } else {
      result.rejected.push_back(std::move(diag));
    }
  }
  return result;
}

namespace {

std::string gender_str(Gender g) { return g == Gender::male ? "male" : "female"; }
std::string race_str(Race r) {
  switch (r) {
    case Race::asian: return "asian";
    case Race::white: return "white";
    case Race::african: return "african";
    case Race::other: return "other";
  }
  return "other";
}
std::string smoking_str(Smoking s) {
  switch (s) {
    case Smoking::never: return "never";
    case Smoking::former: return "former";
    case Smoking::current: return "current";
  }
  return "never";
}
std::string hand_str(Hand h) { return h == Hand::left ? "left" : "right"; }
std::string sleep_str(SleepState s) {
  return s == SleepState::awake ? "awake" : "sleeping";
}

template <typename T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) return csv::format_double(*v);
  else if constexpr (std::is_same_v<T, int>) return std::to_string(*v);
  else return *v;
}

}  // namespace

void write_participants(const std::string& path,
                        std::span<const ParticipantRow> rows) {
  csv::Table t;
  t.header = {"patient_id", "age", "gender", "race", "height", "weight",
              "bmi_index", "heart_rate", "bp_level", "smoking_routine",
              "skin_type", "hand", "sleep_state", "data_type",
              "m", "sigma", "kv100", "a365", "a460", "anadh", "pom"};
  for (int b = 0; b < 5; ++b) t.header.push_back(kBandAmpNames[b]);
  for (int b = 0; b < 5; ++b) t.header.push_back(kBandFreqNames[b]);
  t.header.push_back("temperature");
  const bool any_das = std::any_of(rows.begin(), rows.end(),
                                   [](const auto& r) { return r.das.has_value(); });
  if (any_das) {
    for (int q = 1; q <= 21; ++q) t.header.push_back("q" + std::to_string(q));
  }
  const bool any_sig = std::any_of(rows.begin(), rows.end(), [](const auto& r) {
    return r.signal_file.has_value();
  });
  if (any_sig) t.header.push_back("signal_file");
  std::set<std::string> extra_names;
  for (const auto& r : rows) {
    for (const auto& [name, _] : r.extras) extra_names.insert(name);
  }
  for (const auto& n : extra_names) t.header.push_back(n);

  for (const auto& row : rows) {
    std::vector<std::string> out;
    const auto& rec = row.participant;
    const auto& sf = row.sensors;
    out.push_back(rec.patient_id);
    out.push_back(opt_str(rec.age));
    out.push_back(rec.gender ? gender_str(*rec.gender) : "");
    out.push_back(rec.race ? race_str(*rec.race) : "");
    out.push_back(opt_str(rec.height));
    out.push_back(opt_str(rec.weight));
    out.push_back(opt_str(rec.bmi_index));
    out.push_back(opt_str(rec.heart_rate));
    out.push_back(opt_str(rec.bp_level));
    out.push_back(rec.smoking_routine ? smoking_str(*rec.smoking_routine) : "");
    out.push_back(opt_str(rec.skin_type));
    out.push_back(rec.hand ? hand_str(*rec.hand) : "");
    out.push_back(rec.sleep_state ? sleep_str(*rec.sleep_state) : "");
    out.push_back(opt_str(rec.data_type));
    out.push_back(opt_str(sf.m));
    out.push_back(opt_str(sf.sigma));
    out.push_back(opt_str(sf.kv100));
    out.push_back(opt_str(sf.a365));
    out.push_back(opt_str(sf.a460));
    out.push_back(opt_str(sf.anadh));
    out.push_back(opt_str(sf.pom));
    for (int b = 0; b < 5; ++b) out.push_back(opt_str(sf.band_amplitude[b]));
    for (int b = 0; b < 5; ++b) out.push_back(opt_str(sf.band_frequency[b]));
    out.push_back(opt_str(sf.temperature));
    if (any_das) {
      for (int q = 0; q < 21; ++q) {
        out.push_back(row.das ? std::to_string(row.das->items[q]) : "");
      }
    }
    if (any_sig) out.push_back(opt_str(row.signal_file));
    std::map<std::string, std::optional<double>> em(row.extras.begin(),
                                                    row.extras.end());
    for (const auto& n : extra_names) {
      const auto it = em.find(n);
      out.push_back(it != em.end() ? opt_str(it->second) : "");
    }
    t.rows.push_back(std::move(out));
  }
  csv::write_table(path, t);
}

FeatureSet parse_feature_set(const std::string& name) {
  const std::string v = csv::to_lower(csv::trim(name));
  if (v == "all") return FeatureSet::all;
  if (v == "sensor_only" || v == "sensor" || v == "sensors") {
    return FeatureSet::sensor_only;
  }
  if (v == "top10" || v == "top_10" || v == "top-10") return FeatureSet::top10;
  raise(errc::unknown_feature_set, "'" + name + "'");
}

const char* feature_set_name(FeatureSet set) noexcept {
  switch (set) {
    case FeatureSet::all: return "all";
    case FeatureSet::sensor_only: return "sensor_only";
    case FeatureSet::top10: return "top10";
  }
  return "?";
}

int FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].name == name) return int(c);
  }
  return -1;
}

std::vector<std::string> FeatureMatrix::column_names() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.name);
  return out;
}

namespace {

// One value of a source field before encoding.
struct Cell {
  std::optional<double> num;
  std::optional<std::string> cat;
  bool missing() const { return !num && !cat; }
};

using Getter = std::function<Cell(const ParticipantRow&)>;

Cell num_cell(const std::optional<double>& v) {
  Cell c;
  c.num = v;
  return c;
}
Cell int_cell(const std::optional<int>& v) {
  Cell c;
  if (v) c.num = double(*v);
  return c;
}
Cell cat_cell(const std::optional<std::string>& v) {
  Cell c;
  c.cat = v;
  return c;
}

struct Source {
  std::string name;
  Getter get;
};

std::vector<Source> demographic_sources() {
  return {
      {"age", [](const ParticipantRow& r) { return int_cell(r.participant.age); }},
      {"gender",
       [](const ParticipantRow& r) {
         Cell c;
         if (r.participant.gender) c.cat = gender_str(*r.participant.gender);
         return c;
       }},
      {"race",
       [](const ParticipantRow& r) {
         Cell c;
         if (r.participant.race) c.cat = race_str(*r.participant.race);
         return c;
       }},
      {"height", [](const ParticipantRow& r) { return num_cell(r.participant.height); }},
      {"weight", [](const ParticipantRow& r) { return num_cell(r.participant.weight); }},
      {"bmi_index", [](const ParticipantRow& r) { return num_cell(r.participant.bmi_index); }},
      {"heart_rate", [](const ParticipantRow& r) { return num_cell(r.participant.heart_rate); }},
      {"bp_level", [](const ParticipantRow& r) { return cat_cell(r.participant.bp_level); }},
      {"smoking_routine",
       [](const ParticipantRow& r) {
         Cell c;
         if (r.participant.smoking_routine) {
           c.cat = smoking_str(*r.participant.smoking_routine);
         }
         return c;
       }},
      {"skin_type", [](const ParticipantRow& r) { return cat_cell(r.participant.skin_type); }},
      {"hand",
       [](const ParticipantRow& r) {
         Cell c;
         if (r.participant.hand) c.cat = hand_str(*r.participant.hand);
         return c;
       }},
      {"sleep_state",
       [](const ParticipantRow& r) {
         Cell c;
         if (r.participant.sleep_state) c.cat = sleep_str(*r.participant.sleep_state);
         return c;
       }},
      {"data_type", [](const ParticipantRow& r) { return cat_cell(r.participant.data_type); }},
  };
}

std::vector<Source> sensor_sources() {
  std::vector<Source> out = {
      {"m", [](const ParticipantRow& r) { return num_cell(r.sensors.m); }},
      {"sigma", [](const ParticipantRow& r) { return num_cell(r.sensors.sigma); }},
      {"kv100", [](const ParticipantRow& r) { return num_cell(r.sensors.kv100); }},
      {"a365", [](const ParticipantRow& r) { return num_cell(r.sensors.a365); }},
      {"a460", [](const ParticipantRow& r) { return num_cell(r.sensors.a460); }},
      {"anadh", [](const ParticipantRow& r) { return num_cell(r.sensors.anadh); }},
      {"pom", [](const ParticipantRow& r) { return num_cell(r.sensors.pom); }},
  };
  for (int b = 0; b < 5; ++b) {
    out.push_back({kBandAmpNames[b], [b](const ParticipantRow& r) {
                     return num_cell(r.sensors.band_amplitude[b]);
                   }});
  }
  for (int b = 0; b < 5; ++b) {
    out.push_back({kBandFreqNames[b], [b](const ParticipantRow& r) {
                     return num_cell(r.sensors.band_frequency[b]);
                   }});
  }
  out.push_back({"temperature",
                 [](const ParticipantRow& r) { return num_cell(r.sensors.temperature); }});
  return out;
}

Source find_source(const std::string& name) {
  for (auto& s : demographic_sources()) {
    if (s.name == name) return s;
  }
  for (auto& s : sensor_sources()) {
    if (s.name == name) return s;
  }
  raise(errc::config_error, "unknown feature source '" + name + "'");
}

std::vector<Source> sources_for(FeatureSet set,
                                std::span<const ParticipantRow> rows) {
  std::vector<Source> out;
  switch (set) {
    case FeatureSet::sensor_only:
      out = sensor_sources();
      break;
    case FeatureSet::top10:
      // Paper's top-10 list (LightGBM ranking, binary 80:20 run).
      for (const char* n : {"bmi_index", "heart_rate", "age", "weight",
                            "height", "m", "temperature", "a460", "kv100",
                            "skin_type"}) {
        out.push_back(find_source(n));
      }
      break;
    case FeatureSet::all: {
      out = demographic_sources();
      auto sens = sensor_sources();
      out.insert(out.end(), sens.begin(), sens.end());
      std::set<std::string> extra_names;
      for (const auto& r : rows) {
        for (const auto& [name, _] : r.extras) extra_names.insert(name);
      }
      for (const auto& name : extra_names) {
        out.push_back({name, [name](const ParticipantRow& r) {
                         Cell c;
                         for (const auto& [n, v] : r.extras) {
                           if (n == name) c.num = v;
                         }
                         return c;
                       }});
      }
      break;
    }
  }
  return out;
}

}  // namespace

FeatureMatrix assemble_feature_matrix(std::span<const ParticipantRow> rows,
                                      FeatureSet set, ImputePolicy impute,
                                      Encoding encoding,
                                      const EncoderOverrides& overrides) {
  if (rows.empty()) raise(errc::all_rows_dropped, "no rows to assemble");
  const auto sources = sources_for(set, rows);
  const std::size_t n = rows.size();

  FeatureMatrix out;
  out.n_rows = n;
  out.patient_ids.reserve(n);
  for (const auto& r : rows) out.patient_ids.push_back(r.participant.patient_id);

  // Column-major staging, flattened to row-major at the end.
  std::vector<std::vector<double>> cols;

  for (const auto& src : sources) {
    std::vector<Cell> cells(n);
    bool any_cat = false;
    bool all_numeric = true;
    for (std::size_t r = 0; r < n; ++r) {
      cells[r] = src.get(rows[r]);
      if (cells[r].cat) {
        any_cat = true;
        if (!csv::parse_number(*cells[r].cat)) all_numeric = false;
      }
    }

    if (!any_cat || all_numeric) {
      // Numeric column (ordinal categories stored as numbers pass through).
      ColumnMeta meta{src.name, src.name, ColumnKind::numeric, {}};
      std::vector<double> col(n, kNaN);
      for (std::size_t r = 0; r < n; ++r) {
        if (cells[r].num) col[r] = *cells[r].num;
        else if (cells[r].cat) col[r] = *csv::parse_number(*cells[r].cat);
      }
      out.columns.push_back(std::move(meta));
      cols.push_back(std::move(col));
      continue;
    }

    // Categorical: schema-config override when present, otherwise a
    // deterministic map over the sorted observed values.
    std::vector<std::string> categories;
    std::map<std::string, int> code_map;
    const auto ov = overrides.find(src.name);
    if (ov != overrides.end()) {
      code_map = ov->second;
      categories.resize(code_map.size());
      std::set<int> codes;
      for (const auto& [cat, code] : code_map) {
        if (code < 0 || code >= int(code_map.size()) || !codes.insert(code).second) {
          raise(errc::config_error,
                "encoder for '" + src.name + "' is not a bijection onto 0..n-1");
        }
        categories[code] = cat;
      }
    } else {
      std::set<std::string> seen;
      for (const auto& c : cells) {
        if (c.cat) seen.insert(*c.cat);
      }
      categories.assign(seen.begin(), seen.end());
      for (std::size_t i = 0; i < categories.size(); ++i) {
        code_map[categories[i]] = int(i);
      }
    }
    auto code_of = [&](const std::string& v) {
      const auto it = code_map.find(v);
      return it != code_map.end() ? double(it->second) : -1.0;
    };

    if (encoding == Encoding::ordinal) {
      ColumnMeta meta{src.name, src.name, ColumnKind::ordinal, categories};
      std::vector<double> col(n, -1.0);  // -1 is the dedicated unknown code
      for (std::size_t r = 0; r < n; ++r) {
        if (cells[r].cat) col[r] = code_of(*cells[r].cat);
      }
      out.columns.push_back(std::move(meta));
      cols.push_back(std::move(col));
    } else {
      for (const auto& cat : categories) {
        ColumnMeta meta{src.name + "=" + cat, src.name, ColumnKind::onehot,
                        categories};
        std::vector<double> col(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          if (cells[r].cat && *cells[r].cat == cat) col[r] = 1.0;
        }
        out.columns.push_back(std::move(meta));
        cols.push_back(std::move(col));
      }
    }
  }

  out.n_cols = out.columns.size();
  out.values.resize(out.n_rows * out.n_cols);
  for (std::size_t c = 0; c < out.n_cols; ++c) {
    for (std::size_t r = 0; r < n; ++r) out.at(r, c) = cols[c][r];
  }

  if (impute == ImputePolicy::median_all_rows) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    Imputer::fit(out, all).apply(out);
  }
  return out;
}

Imputer Imputer::fit(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  Imputer imp;
  imp.medians_.assign(x.n_cols, 0.0);
  std::vector<double> buf;
  for (std::size_t c = 0; c < x.n_cols; ++c) {
    buf.clear();
    for (std::size_t r : rows) {
      const double v = x.at(r, c);
      if (std::isfinite(v)) buf.push_back(v);
    }
    if (buf.empty()) continue;  // all-missing column imputes to 0
    std::sort(buf.begin(), buf.end());
    const std::size_t m = buf.size();
    imp.medians_[c] =
        (m % 2 == 1) ? buf[m / 2] : 0.5 * (buf[m / 2 - 1] + buf[m / 2]);
  }
  return imp;
}

void Imputer::apply(FeatureMatrix& x) const {
  if (medians_.size() != x.n_cols) {
    raise(errc::shape_mismatch, "imputer fitted on different column count");
  }
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    for (std::size_t c = 0; c < x.n_cols; ++c) {
      if (!std::isfinite(x.at(r, c))) x.at(r, c) = medians_[c];
    }
  }
}

FeatureMatrix select_rows(const FeatureMatrix& x,
                          std::span<const std::size_t> rows) {
  FeatureMatrix out;
  out.columns = x.columns;
  out.n_cols = x.n_cols;
  out.n_rows = rows.size();
  out.values.reserve(rows.size() * x.n_cols);
  out.patient_ids.reserve(rows.size());
  for (std::size_t r : rows) {
    out.patient_ids.push_back(x.patient_ids[r]);
    const auto row = x.row(r);
    out.values.insert(out.values.end(), row.begin(), row.end());
  }
  return out;
}

FeatureMatrix make_matrix(std::vector<std::string> names,
                          const std::vector<std::vector<double>>& rows,
                          std::vector<std::string> patient_ids) {
  FeatureMatrix out;
  out.n_cols = names.size();
  out.n_rows = rows.size();
  for (auto& n : names) {
    out.columns.push_back({n, n, ColumnKind::numeric, {}});
  }
  for (const auto& r : rows) {
    if (r.size() != out.n_cols) {
      raise(errc::shape_mismatch, "row width differs from column count");
    }
    out.values.insert(out.values.end(), r.begin(), r.end());
  }
  if (patient_ids.empty()) {
    for (std::size_t i = 0; i < out.n_rows; ++i) {
      out.patient_ids.push_back("p" + std::to_string(i));
    }
  } else {
    if (patient_ids.size() != out.n_rows) {
      raise(errc::shape_mismatch, "patient_ids length differs from row count");
    }
    out.patient_ids = std::move(patient_ids);
  }
  return out;
}

}  // namespace ldfs
