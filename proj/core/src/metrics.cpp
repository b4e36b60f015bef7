#include "ldfs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"

namespace ldfs {

namespace {

struct Counts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

Counts count_classes(std::span<const int> labels) {
  Counts c;
  for (int y : labels) {
    if (y == 1) ++c.pos;
    else ++c.neg;
  }
  return c;
}

// Indices sorted by descending score.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    raise(errc::shape_mismatch, "scores/labels lengths differ");
  }
  const Counts c = count_classes(labels);
  if (c.pos == 0 || c.neg == 0) {
    raise(errc::single_class, "roc_auc needs both classes present");
  }
  // Midrank sum of positives: AUC = (R+ - n+(n+ + 1)/2) / (n+ n-).
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  const std::size_t n = order.size();
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * double(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) rank_sum_pos += midrank;
    }
    i = j;
  }
  const double np = double(c.pos), nn = double(c.neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = count_classes(labels);
  if (c.pos == 0 || c.neg == 0) {
    raise(errc::single_class, "roc_curve needs both classes present");
  }
  const auto order = descending_order(scores);
  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double thr = scores[order[i]];
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == thr) {
      if (labels[order[j]] == 1) ++tp;
      else ++fp;
      ++j;
    }
    curve.points.push_back(
        {thr, double(fp) / double(c.neg), double(tp) / double(c.pos)});
    i = j;
  }
  if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
    curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  }
  double area = 0.0;
  for (std::size_t p = 1; p < curve.points.size(); ++p) {
    const auto& a = curve.points[p - 1];
    const auto& b = curve.points[p];
    area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  curve.auc = area;
  return curve;
}

PrCurve pr_curve(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = count_classes(labels);
  if (c.pos == 0) raise(errc::no_positives, "pr_curve needs a positive label");
  const auto order = descending_order(scores);
  PrCurve curve;
  std::size_t tp = 0, fp = 0;
  double prev_recall = 0.0;
  double ap = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double thr = scores[order[i]];
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == thr) {
      if (labels[order[j]] == 1) ++tp;
      else ++fp;
      ++j;
    }
    const double recall = double(tp) / double(c.pos);
    const double precision = double(tp) / double(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    curve.points.push_back({thr, recall, precision});
    i = j;
  }
  curve.auc = ap;
  return curve;
}

double pr_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    raise(errc::shape_mismatch, "scores/labels lengths differ");
  }
  return pr_curve(scores, labels).auc;
}

MacroAucResult macro_multiclass_auc(std::span<const double> prob_matrix,
                                    std::span<const int> labels, int k,
                                    MulticlassAucMode mode) {
  const std::size_t n = labels.size();
  if (k < 2 || prob_matrix.size() != n * std::size_t(k)) {
    raise(errc::shape_mismatch, "probability matrix is not n x k");
  }
  std::vector<std::size_t> class_count(k, 0);
  for (int y : labels) {
    if (y < 0 || y >= k) raise(errc::shape_mismatch, "label outside 0..k-1");
    ++class_count[y];
  }

  MacroAucResult out;
  if (mode == MulticlassAucMode::ovr) {
    for (int c = 0; c < k; ++c) {
      if (class_count[c] == 0) {
        raise(errc::degenerate_classes,
              "class " + std::to_string(c) + " absent (one-vs-rest)");
      }
    }
    double sum = 0.0;
    std::vector<double> score(n);
    std::vector<int> ind(n);
    for (int c = 0; c < k; ++c) {
      for (std::size_t r = 0; r < n; ++r) {
        score[r] = prob_matrix[r * k + c];
        ind[r] = labels[r] == c ? 1 : 0;
      }
      sum += roc_auc(score, ind);
    }
    out.value = sum / double(k);
    return out;
  }

  // Hand-and-Till one-vs-one: mean over unordered pairs (i, j) of
  // (A(i|j) + A(j|i)) / 2 restricted to rows of the two classes.
  int present = 0;
  for (int c = 0; c < k; ++c) present += class_count[c] > 0;
  if (present < 2) {
    raise(errc::degenerate_classes, "one-vs-one needs >= 2 classes present");
  }
  double sum = 0.0;
  int pairs = 0;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (class_count[a] == 0 || class_count[b] == 0) {
        ++out.skipped_pairs;
        continue;
      }
      std::vector<double> sa, sb;
      std::vector<int> ia, ib;
      for (std::size_t r = 0; r < n; ++r) {
        if (labels[r] != a && labels[r] != b) continue;
        sa.push_back(prob_matrix[r * k + a]);
        ia.push_back(labels[r] == a ? 1 : 0);
        sb.push_back(prob_matrix[r * k + b]);
        ib.push_back(labels[r] == b ? 1 : 0);
      }
      sum += 0.5 * (roc_auc(sa, ia) + roc_auc(sb, ib));
      ++pairs;
    }
  }
  out.value = sum / double(pairs);
  return out;
}

MacroPrf macro_prf(std::span<const int> predicted, std::span<const int> truth,
                   int k) {
  if (predicted.size() != truth.size()) {
    raise(errc::shape_mismatch, "predicted/truth lengths differ");
  }
  std::vector<std::size_t> tp(k, 0), fp(k, 0), fn(k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i], p = predicted[i];
    if (t < 0 || t >= k || p < 0 || p >= k) {
      raise(errc::shape_mismatch, "label outside 0..k-1");
    }
    if (p == t) ++tp[t];
    else {
      ++fp[p];
      ++fn[t];
    }
  }
  MacroPrf out;
  for (int c = 0; c < k; ++c) {
    const double denom_p = double(tp[c] + fp[c]);
    const double denom_r = double(tp[c] + fn[c]);
    const double prec = denom_p > 0 ? double(tp[c]) / denom_p : 0.0;
    const double rec = denom_r > 0 ? double(tp[c]) / denom_r : 0.0;
    const double f1 = (prec + rec) > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    out.per_class_precision.push_back(prec);
    out.per_class_recall.push_back(rec);
    out.per_class_f1.push_back(f1);
    out.precision += prec;
    out.recall += rec;
    out.f1 += f1;
  }
  out.precision /= double(k);
  out.recall /= double(k);
  out.f1 /= double(k);
  return out;
}

void write_roc_points(const std::string& path, const RocCurve& curve) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    out << csv::format_double(p.threshold) << ',' << csv::format_double(p.fpr)
        << ',' << csv::format_double(p.tpr) << '\n';
  }
}

void write_pr_points(const std::string& path, const PrCurve& curve) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write '" + path + "'");
  out << "threshold,recall,precision\n";
  for (const auto& p : curve.points) {
    out << csv::format_double(p.threshold) << ',' << csv::format_double(p.recall)
        << ',' << csv::format_double(p.precision) << '\n';
  }
}

}  // namespace ldfs
