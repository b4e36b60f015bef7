#include <algorithm>
#include <cmath>

#include "ldfs/error.hpp"
#include "ldfs/models.hpp"

namespace ldfs::detail {

std::vector<double> standardize_fit_mean(const FeatureMatrix& x) {
  std::vector<double> mean(x.n_cols, 0.0);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    for (std::size_t c = 0; c < x.n_cols; ++c) mean[c] += x.at(r, c);
  }
  for (double& m : mean) m /= double(x.n_rows);
  return mean;
}

std::vector<double> standardize_fit_std(const FeatureMatrix& x,
                                        std::span<const double> mean) {
  std::vector<double> sd(x.n_cols, 0.0);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    for (std::size_t c = 0; c < x.n_cols; ++c) {
      const double d = x.at(r, c) - mean[c];
      sd[c] += d * d;
    }
  }
  for (double& s : sd) {
    s = std::sqrt(s / double(x.n_rows));
    if (s <= 0.0) s = 1.0;  // constant columns pass through unscaled
  }
  return sd;
}

namespace {

// Full-batch subgradient descent on lambda/2 |w|^2 + mean hinge.
void fit_binary_hinge(const FeatureMatrix& x, std::span<const double> mean,
                      std::span<const double> sd, std::span<const int> ypm,
                      const SvmParams& params, std::span<double> w, double& b) {
  const std::size_t n = x.n_rows;
  const std::size_t d = x.n_cols;
  std::fill(w.begin(), w.end(), 0.0);
  b = 0.0;
  std::vector<double> gw(d);
  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    const double eta = 1.0 / (params.lambda * double(epoch + 1));
    for (std::size_t c = 0; c < d; ++c) gw[c] = params.lambda * w[c];
    double gb = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double score = b;
      for (std::size_t c = 0; c < d; ++c) {
        score += w[c] * (x.at(r, c) - mean[c]) / sd[c];
      }
      if (double(ypm[r]) * score < 1.0) {
        const double coef = -double(ypm[r]) / double(n);
        for (std::size_t c = 0; c < d; ++c) {
          gw[c] += coef * (x.at(r, c) - mean[c]) / sd[c];
        }
        gb += coef;
      }
    }
    for (std::size_t c = 0; c < d; ++c) w[c] -= eta * gw[c];
    b -= eta * gb;
  }
}

// Platt scaling: logistic fit p = sigma(a s + b) on the training scores,
// with the usual smoothed targets; damped Newton iterations.
void fit_platt(std::span<const double> scores, std::span<const int> y01,
               double& a, double& b) {
  const std::size_t n = scores.size();
  double n_pos = 0.0;
  for (int v : y01) n_pos += v;
  const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
  const double t_neg = 1.0 / (double(n) - n_pos + 2.0);

  a = 1.0;
  b = 0.0;
  for (int it = 0; it < 100; ++it) {
    double ga = 0.0, gb = 0.0, haa = 0.0, hab = 0.0, hbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = y01[i] == 1 ? t_pos : t_neg;
      const double z = a * scores[i] + b;
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double diff = p - t;
      ga += diff * scores[i];
      gb += diff;
      const double h = std::max(p * (1.0 - p), 1e-12);
      haa += h * scores[i] * scores[i];
      hab += h * scores[i];
      hbb += h;
    }
    haa += 1e-12;
    hbb += 1e-12;
    const double det = haa * hbb - hab * hab;
    if (std::abs(det) < 1e-300) break;
    const double da = (hbb * ga - hab * gb) / det;
    const double db = (haa * gb - hab * ga) / det;
    a -= da;
    b -= db;
    if (std::abs(da) + std::abs(db) < 1e-10) break;
  }
}

}  // namespace

LinearSvmModel train_svm(const FeatureMatrix& x, std::span<const int> y,
                         int n_classes, const SvmParams& params) {
  const std::size_t n = x.n_rows;
  const std::size_t d = x.n_cols;
  LinearSvmModel model;
  model.n_classes = n_classes;
  model.n_features = d;
  model.feat_mean = standardize_fit_mean(x);
  model.feat_std = standardize_fit_std(x, model.feat_mean);

  const int machines = n_classes == 2 ? 1 : n_classes;
  model.weights.assign(std::size_t(machines) * d, 0.0);
  model.bias.assign(machines, 0.0);
  model.platt_a.assign(machines, 1.0);
  model.platt_b.assign(machines, 0.0);

  std::vector<int> ypm(n);
  std::vector<int> y01(n);
  std::vector<double> scores(n);
  for (int m = 0; m < machines; ++m) {
    const int target = n_classes == 2 ? 1 : m;
    for (std::size_t r = 0; r < n; ++r) {
      y01[r] = y[r] == target ? 1 : 0;
      ypm[r] = y01[r] ? 1 : -1;
    }
    std::span<double> w(model.weights.data() + std::size_t(m) * d, d);
    fit_binary_hinge(x, model.feat_mean, model.feat_std, ypm, params, w,
                     model.bias[m]);
    for (std::size_t r = 0; r < n; ++r) {
      double s = model.bias[m];
      for (std::size_t c = 0; c < d; ++c) {
        s += w[c] * (x.at(r, c) - model.feat_mean[c]) / model.feat_std[c];
      }
      scores[r] = s;
    }
    fit_platt(scores, y01, model.platt_a[m], model.platt_b[m]);
  }
  return model;
}

std::vector<double> svm_proba(const LinearSvmModel& m,
                              std::span<const double> row) {
  const std::size_t d = m.n_features;
  const int machines = m.n_classes == 2 ? 1 : m.n_classes;
  std::vector<double> cal(machines);
  for (int k = 0; k < machines; ++k) {
    double s = m.bias[k];
    for (std::size_t c = 0; c < d; ++c) {
      s += m.weights[std::size_t(k) * d + c] * (row[c] - m.feat_mean[c]) /
           m.feat_std[c];
    }
    cal[k] = 1.0 / (1.0 + std::exp(-(m.platt_a[k] * s + m.platt_b[k])));
  }
  if (m.n_classes == 2) return {1.0 - cal[0], cal[0]};
  double sum = 0.0;
  for (double v : cal) sum += v;
  if (sum <= 0.0) return std::vector<double>(m.n_classes, 1.0 / m.n_classes);
  for (double& v : cal) v /= sum;
  return cal;
}

}  // namespace ldfs::detail
