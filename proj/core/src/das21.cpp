#include "ldfs/das21.hpp"

#include <string>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

const char* severity_name(Severity s) noexcept {
  switch (s) {
    case Severity::normal: return "Normal";
    case Severity::mild: return "Mild";
    case Severity::moderate: return "Moderate";
    case Severity::severe: return "Severe";
    case Severity::extremely_severe: return "ExtremelySevere";
  }
  return "?";
}

const char* binary_label_name(BinaryLabel l) noexcept {
  return l == BinaryLabel::normal ? "Normal" : "Abnormal";
}

const char* multiclass_label_name(MulticlassLabel l) noexcept {
  switch (l) {
    case MulticlassLabel::normal: return "Normal";
    case MulticlassLabel::stress: return "Stress";
    case MulticlassLabel::stress_anxiety: return "StressAnxiety";
    case MulticlassLabel::stress_anxiety_depression: return "StressAnxietyDepression";
  }
  return "?";
}

std::array<int, 7> stress_items() noexcept { return {1, 6, 8, 11, 12, 14, 18}; }
std::array<int, 7> anxiety_items() noexcept { return {2, 4, 7, 9, 15, 19, 20}; }
std::array<int, 7> depression_items() noexcept { return {3, 5, 10, 13, 16, 17, 21}; }

Severity depression_severity(int s) noexcept {
  if (s <= 9) return Severity::normal;
  if (s <= 13) return Severity::mild;
  if (s <= 20) return Severity::moderate;
  if (s <= 27) return Severity::severe;
  return Severity::extremely_severe;
}

Severity anxiety_severity(int s) noexcept {
  if (s <= 7) return Severity::normal;
  if (s <= 9) return Severity::mild;
  if (s <= 14) return Severity::moderate;
  if (s <= 19) return Severity::severe;
  return Severity::extremely_severe;
}

Severity stress_severity(int s) noexcept {
  if (s <= 14) return Severity::normal;
  if (s <= 18) return Severity::mild;
  if (s <= 25) return Severity::moderate;
  if (s <= 33) return Severity::severe;
  return Severity::extremely_severe;
}

DasScores score_subscales(const Das21Response& resp) {
  for (int i = 1; i <= 21; ++i) {
    const int v = resp.item(i);
    if (v < 0 || v > 3) {
      raise(errc::invalid_item_value,
            "item " + std::to_string(i) + " = " + std::to_string(v) +
                " outside 0..3");
    }
  }
  auto raw_sum = [&](const std::array<int, 7>& idx) {
    int s = 0;
    for (int i : idx) s += resp.item(i);
    return s;
  };
  DasScores out;
  out.stress_final = 2 * raw_sum(stress_items());
  out.anxiety_final = 2 * raw_sum(anxiety_items());
  out.depression_final = 2 * raw_sum(depression_items());
  out.stress_level = stress_severity(out.stress_final);
  out.anxiety_level = anxiety_severity(out.anxiety_final);
  out.depression_level = depression_severity(out.depression_final);
  return out;
}

MentalHealthLabel derive_labels(const DasScores& scores, MulticlassPolicy mode) {
  const bool s = scores.stress_level != Severity::normal;
  const bool a = scores.anxiety_level != Severity::normal;
  const bool d = scores.depression_level != Severity::normal;
  const int count = int(s) + int(a) + int(d);

  MentalHealthLabel out;
  out.binary = count > 0 ? BinaryLabel::abnormal : BinaryLabel::normal;

  if (count == 0) {
    out.multiclass = MulticlassLabel::normal;
    out.canonical = true;
    return out;
  }
  // Canonical combinations are nested: {S} ⊂ {S,A} ⊂ {S,A,D}.
  const bool is_canonical = (count == 1 && s) || (count == 2 && s && a) || count == 3;
  out.canonical = is_canonical;
  if (is_canonical || mode == MulticlassPolicy::rank) {
    switch (count) {
      case 1: out.multiclass = MulticlassLabel::stress; break;
      case 2: out.multiclass = MulticlassLabel::stress_anxiety; break;
      default: out.multiclass = MulticlassLabel::stress_anxiety_depression; break;
    }
  }
  return out;
}

std::vector<PatientResponse> read_responses(const std::string& path) {
  const csv::Table t = csv::read_table(path);
  int id_col = -1;
  std::array<int, 21> q_col;
  q_col.fill(-1);
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const std::string h = csv::to_lower(csv::trim(t.header[c]));
    if (h == "patient_id" || h == "patientid" || h == "id") id_col = int(c);
    if (h.size() >= 2 && h[0] == 'q') {
      const auto n = csv::parse_number(h.substr(1));
      if (n && *n >= 1 && *n <= 21) q_col[int(*n) - 1] = int(c);
    }
  }
  if (id_col < 0) raise(errc::missing_column, "patient_id");
  for (int i = 0; i < 21; ++i) {
    if (q_col[i] < 0) raise(errc::missing_column, "q" + std::to_string(i + 1));
  }
  std::vector<PatientResponse> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    PatientResponse pr;
    pr.patient_id = csv::trim(t.rows[r][id_col]);
    for (int i = 0; i < 21; ++i) {
      const auto v = csv::parse_number(t.rows[r][q_col[i]]);
      if (!v || *v != int(*v)) {
        raise(errc::bad_value, "row " + std::to_string(r) + ", q" +
                                   std::to_string(i + 1) + ": not an integer");
      }
      pr.response.items[i] = int(*v);
    }
    out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace ldfs
