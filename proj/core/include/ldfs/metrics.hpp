#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ldfs {

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // anchored at (0,0) and (1,1)
  double auc = 0.0;              // trapezoidal area under the points
};

struct PrPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;  // average-precision (step) form
};

// Rank-based AUC: P(score+ > score-) + 0.5 P(tie). Throws SingleClass.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

// Average precision over descending unique thresholds. Throws NoPositives.
double pr_auc(std::span<const double> scores, std::span<const int> labels);

PrCurve pr_curve(std::span<const double> scores, std::span<const int> labels);

enum class MulticlassAucMode { ovr, ovo };

struct MacroAucResult {
  double value = 0.0;
  int skipped_pairs = 0;  // ovo pairs dropped because a class was absent
};

// prob_matrix is row-major n x k. ovr: unweighted mean of per-class
// one-vs-rest AUCs (every class must appear). ovo: Hand-and-Till mean over
// unordered class pairs, absent-class pairs skipped with renormalization.
// Throws DegenerateClasses.
MacroAucResult macro_multiclass_auc(std::span<const double> prob_matrix,
                                    std::span<const int> labels, int k,
                                    MulticlassAucMode mode);

struct MacroPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<double> per_class_precision;
  std::vector<double> per_class_recall;
  std::vector<double> per_class_f1;
};

// Per-class precision/recall with the 0/0 -> 0 convention; macros are
// unweighted class means.
MacroPrf macro_prf(std::span<const int> predicted, std::span<const int> truth,
                   int k);

struct MetricReport {
  std::optional<double> roc_auc;
  std::optional<double> pr_auc;
  std::optional<double> macro_ovr_auc;
  std::optional<double> macro_ovo_auc;
  std::optional<double> macro_precision;
  std::optional<double> macro_recall;
  std::optional<double> macro_f1;
  std::vector<double> per_class_f1;
  int fold_id = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

void write_roc_points(const std::string& path, const RocCurve& curve);
void write_pr_points(const std::string& path, const PrCurve& curve);

}  // namespace ldfs
