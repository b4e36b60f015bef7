#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ldfs {

// 21-item questionnaire response, items indexed 1..21, each scored 0..3.
struct Das21Response {
  std::array<int, 21> items{};  // items[0] is question 1

  int item(int index_1_based) const { return items[index_1_based - 1]; }
};

enum class Severity { normal, mild, moderate, severe, extremely_severe };

const char* severity_name(Severity s) noexcept;

struct DasScores {
  // Final scores are doubled raw subscale sums (short form of the 42-item
  // scale), so always even and in 0..42.
  int depression_final = 0;
  int anxiety_final = 0;
  int stress_final = 0;
  Severity depression_level = Severity::normal;
  Severity anxiety_level = Severity::normal;
  Severity stress_level = Severity::normal;

  bool any_abnormal() const {
    return depression_level != Severity::normal ||
           anxiety_level != Severity::normal ||
           stress_level != Severity::normal;
  }
};

enum class BinaryLabel { normal, abnormal };
enum class MulticlassLabel { normal, stress, stress_anxiety, stress_anxiety_depression };
enum class MulticlassPolicy { strict, rank };

const char* binary_label_name(BinaryLabel l) noexcept;
const char* multiclass_label_name(MulticlassLabel l) noexcept;

struct MentalHealthLabel {
  BinaryLabel binary = BinaryLabel::normal;
  std::optional<MulticlassLabel> multiclass;
  // True when the set of abnormal subscales is one of the canonical
  // combinations {}, {S}, {S,A}, {S,A,D}.
  bool canonical = true;
};

// Question -> subscale assignment (1-based item numbers).
std::array<int, 7> stress_items() noexcept;
std::array<int, 7> anxiety_items() noexcept;
std::array<int, 7> depression_items() noexcept;

// Severity cutoffs on the doubled final score.
Severity depression_severity(int final_score) noexcept;
Severity anxiety_severity(int final_score) noexcept;
Severity stress_severity(int final_score) noexcept;

// Throws InvalidItemValue if any item is outside 0..3.
DasScores score_subscales(const Das21Response& resp);

MentalHealthLabel derive_labels(const DasScores& scores, MulticlassPolicy mode);

// Response file: delimited text with columns patient_id,q1..q21.
struct PatientResponse {
  std::string patient_id;
  Das21Response response;
};
std::vector<PatientResponse> read_responses(const std::string& path);

}  // namespace ldfs
