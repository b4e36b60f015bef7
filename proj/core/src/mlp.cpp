#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldfs/error.hpp"
#include "ldfs/models.hpp"
#include "ldfs/rng.hpp"

namespace ldfs::detail {

namespace {

constexpr double kLnEps = 1e-5;

struct LayerCache {
  std::vector<double> z;     // dense output
  std::vector<double> xhat;  // normalized pre-activation
  double inv_sd = 0.0;       // 1 / sqrt(var + eps)
  std::vector<double> act;   // post relu (and dropout while training)
  std::vector<double> mask;  // dropout scale per unit (1 when off)
};

void dense_forward(std::span<const double> w, std::span<const double> b,
                   std::span<const double> in, std::vector<double>& out) {
  const std::size_t n_out = b.size();
  const std::size_t n_in = in.size();
  out.resize(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    double s = b[o];
    const double* wr = w.data() + o * n_in;
    for (std::size_t i = 0; i < n_in; ++i) s += wr[i] * in[i];
    out[o] = s;
  }
}

void layernorm_forward(std::span<const double> g, std::span<const double> be,
                       const std::vector<double>& z, LayerCache& cache,
                       std::vector<double>& out) {
  const std::size_t h = z.size();
  double mu = 0.0;
  for (double v : z) mu += v;
  mu /= double(h);
  double var = 0.0;
  for (double v : z) var += (v - mu) * (v - mu);
  var /= double(h);
  cache.inv_sd = 1.0 / std::sqrt(var + kLnEps);
  cache.xhat.resize(h);
  out.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    cache.xhat[i] = (z[i] - mu) * cache.inv_sd;
    out[i] = g[i] * cache.xhat[i] + be[i];
  }
}

// d(loss)/dz from d(loss)/dy of y = g * xhat + be.
void layernorm_backward(std::span<const double> g, const LayerCache& cache,
                        std::span<const double> dy, std::vector<double>& dz,
                        std::span<double> dg, std::span<double> dbe) {
  const std::size_t h = dy.size();
  double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
  std::vector<double> dxhat(h);
  for (std::size_t i = 0; i < h; ++i) {
    dxhat[i] = dy[i] * g[i];
    mean_dxhat += dxhat[i];
    mean_dxhat_xhat += dxhat[i] * cache.xhat[i];
    dg[i] += dy[i] * cache.xhat[i];
    dbe[i] += dy[i];
  }
  mean_dxhat /= double(h);
  mean_dxhat_xhat /= double(h);
  dz.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    dz[i] = cache.inv_sd *
            (dxhat[i] - mean_dxhat - cache.xhat[i] * mean_dxhat_xhat);
  }
}

struct Gradients {
  std::vector<double> w1, b1, g1, be1, w2, b2, g2, be2, w3, b3;

  explicit Gradients(const MlpModel& m)
      : w1(m.w1.size(), 0.0), b1(m.b1.size(), 0.0), g1(m.g1.size(), 0.0),
        be1(m.be1.size(), 0.0), w2(m.w2.size(), 0.0), b2(m.b2.size(), 0.0),
        g2(m.g2.size(), 0.0), be2(m.be2.size(), 0.0), w3(m.w3.size(), 0.0),
        b3(m.b3.size(), 0.0) {}
};

std::vector<double> standardized_row(const MlpModel& m,
                                     std::span<const double> row) {
  std::vector<double> out(m.n_in);
  for (int c = 0; c < m.n_in; ++c) {
    out[c] = (row[c] - m.feat_mean[c]) / m.feat_std[c];
  }
  return out;
}

// Forward pass; dropout masks are pre-filled in the caches (all ones for
// inference). Returns output logits.
std::vector<double> forward(const MlpModel& m, std::span<const double> x_std,
                            LayerCache& c1, LayerCache& c2) {
  std::vector<double> ln_out;
  dense_forward(m.w1, m.b1, x_std, c1.z);
  layernorm_forward(m.g1, m.be1, c1.z, c1, ln_out);
  c1.act.resize(ln_out.size());
  for (std::size_t i = 0; i < ln_out.size(); ++i) {
    c1.act[i] = std::max(0.0, ln_out[i]) * c1.mask[i];
  }
  dense_forward(m.w2, m.b2, c1.act, c2.z);
  layernorm_forward(m.g2, m.be2, c2.z, c2, ln_out);
  c2.act.resize(ln_out.size());
  for (std::size_t i = 0; i < ln_out.size(); ++i) {
    c2.act[i] = std::max(0.0, ln_out[i]) * c2.mask[i];
  }
  std::vector<double> logits;
  dense_forward(m.w3, m.b3, c2.act, logits);
  return logits;
}

// Cross-entropy of one sample plus logit gradient.
double loss_and_dlogits(std::span<const double> logits, int y, bool multiclass,
                        std::vector<double>& dlogits) {
  if (!multiclass) {
    const double p = 1.0 / (1.0 + std::exp(-logits[0]));
    dlogits = {p - double(y)};
    const double py = y == 1 ? p : 1.0 - p;
    return -std::log(std::max(py, 1e-300));
  }
  const std::size_t k = logits.size();
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  std::vector<double> p(k);
  for (std::size_t c = 0; c < k; ++c) {
    p[c] = std::exp(logits[c] - mx);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  dlogits.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    dlogits[c] = p[c] - (int(c) == y ? 1.0 : 0.0);
  }
  return -std::log(std::max(p[y], 1e-300));
}

// Accumulates parameter gradients for one sample; callers pre-scale dlogits.
void backward(const MlpModel& m, std::span<const double> x_std,
              const LayerCache& c1, const LayerCache& c2,
              std::span<const double> dlogits, Gradients& g) {
  const std::size_t h1 = std::size_t(m.h1), h2 = std::size_t(m.h2);
  const std::size_t n_out = std::size_t(m.n_out);

  // Output dense.
  std::vector<double> dact2(h2, 0.0);
  for (std::size_t o = 0; o < n_out; ++o) {
    const double dz = dlogits[o];
    g.b3[o] += dz;
    for (std::size_t i = 0; i < h2; ++i) {
      g.w3[o * h2 + i] += dz * c2.act[i];
      dact2[i] += m.w3[o * h2 + i] * dz;
    }
  }
  // Dropout + ReLU of layer 2 (act = relu(ln) * mask).
  std::vector<double> dln2(h2);
  for (std::size_t i = 0; i < h2; ++i) {
    const double relu_grad =
        (m.g2[i] * c2.xhat[i] + m.be2[i]) > 0.0 ? 1.0 : 0.0;
    dln2[i] = dact2[i] * c2.mask[i] * relu_grad;
  }
  std::vector<double> dz2;
  layernorm_backward(m.g2, c2, dln2, dz2, g.g2, g.be2);
  // Hidden dense 2.
  std::vector<double> dact1(h1, 0.0);
  for (std::size_t o = 0; o < h2; ++o) {
    g.b2[o] += dz2[o];
    for (std::size_t i = 0; i < h1; ++i) {
      g.w2[o * h1 + i] += dz2[o] * c1.act[i];
      dact1[i] += m.w2[o * h1 + i] * dz2[o];
    }
  }
  std::vector<double> dln1(h1);
  for (std::size_t i = 0; i < h1; ++i) {
    const double relu_grad =
        (m.g1[i] * c1.xhat[i] + m.be1[i]) > 0.0 ? 1.0 : 0.0;
    dln1[i] = dact1[i] * c1.mask[i] * relu_grad;
  }
  std::vector<double> dz1;
  layernorm_backward(m.g1, c1, dln1, dz1, g.g1, g.be1);
  for (std::size_t o = 0; o < h1; ++o) {
    g.b1[o] += dz1[o];
    for (std::size_t i = 0; i < std::size_t(m.n_in); ++i) {
      g.w1[o * m.n_in + i] += dz1[o] * x_std[i];
    }
  }
}

void apply_sgd(std::vector<double>& param, std::vector<double>& vel,
               const std::vector<double>& grad, double lr, double momentum) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    vel[i] = momentum * vel[i] - lr * grad[i];
    param[i] += vel[i];
  }
}

}  // namespace

MlpModel train_mlp(const FeatureMatrix& x, std::span<const int> y,
                   int n_classes, bool multiclass, const MlpParams& params,
                   std::uint64_t seed) {
  const std::size_t n = x.n_rows;
  MlpModel m;
  m.n_in = int(x.n_cols);
  m.h1 = params.hidden1;
  m.h2 = params.hidden2;
  m.n_out = multiclass ? n_classes : 1;
  m.feat_mean = standardize_fit_mean(x);
  m.feat_std = standardize_fit_std(x, m.feat_mean);

  Rng rng(derive_seed(seed, 0xfeedULL));
  auto he_init = [&](std::vector<double>& w, int fan_in, int fan_out) {
    w.resize(std::size_t(fan_out) * fan_in);
    const double sd = std::sqrt(2.0 / double(fan_in));
    for (double& v : w) v = rng.normal(0.0, sd);
  };
  he_init(m.w1, m.n_in, m.h1);
  m.b1.assign(m.h1, 0.0);
  m.g1.assign(m.h1, 1.0);
  m.be1.assign(m.h1, 0.0);
  he_init(m.w2, m.h1, m.h2);
  m.b2.assign(m.h2, 0.0);
  m.g2.assign(m.h2, 1.0);
  m.be2.assign(m.h2, 0.0);
  he_init(m.w3, m.h2, m.n_out);
  m.b3.assign(m.n_out, 0.0);

  MlpModel vel = m;  // same shapes, zeroed velocities
  for (auto* v : mlp_param_ptrs(vel)) *v = 0.0;
  auto vel_of = [&](std::vector<double> MlpModel::* member) -> std::vector<double>& {
    return vel.*member;
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double keep = 1.0 - params.dropout;

  LayerCache c1, c2;
  std::vector<double> dlogits;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += params.batch) {
      const std::size_t end = std::min(n, start + params.batch);
      Gradients grads(m);
      const double scale = 1.0 / double(end - start);
      for (std::size_t idx = start; idx < end; ++idx) {
        const std::size_t r = order[idx];
        // Inverted dropout masks, resampled per unit per sample.
        c1.mask.assign(std::size_t(m.h1), 1.0);
        c2.mask.assign(std::size_t(m.h2), 1.0);
        if (params.dropout > 0.0) {
          for (auto& v : c1.mask) v = rng.uniform() < keep ? 1.0 / keep : 0.0;
          for (auto& v : c2.mask) v = rng.uniform() < keep ? 1.0 / keep : 0.0;
        }
        const auto x_std = standardized_row(m, x.row(r));
        const auto logits = forward(m, x_std, c1, c2);
        loss_and_dlogits(logits, y[r], multiclass, dlogits);
        for (double& v : dlogits) v *= scale;
        backward(m, x_std, c1, c2, dlogits, grads);
      }
      apply_sgd(m.w1, vel_of(&MlpModel::w1), grads.w1, params.lr, params.momentum);
      apply_sgd(m.b1, vel_of(&MlpModel::b1), grads.b1, params.lr, params.momentum);
      apply_sgd(m.g1, vel_of(&MlpModel::g1), grads.g1, params.lr, params.momentum);
      apply_sgd(m.be1, vel_of(&MlpModel::be1), grads.be1, params.lr, params.momentum);
      apply_sgd(m.w2, vel_of(&MlpModel::w2), grads.w2, params.lr, params.momentum);
      apply_sgd(m.b2, vel_of(&MlpModel::b2), grads.b2, params.lr, params.momentum);
      apply_sgd(m.g2, vel_of(&MlpModel::g2), grads.g2, params.lr, params.momentum);
      apply_sgd(m.be2, vel_of(&MlpModel::be2), grads.be2, params.lr, params.momentum);
      apply_sgd(m.w3, vel_of(&MlpModel::w3), grads.w3, params.lr, params.momentum);
      apply_sgd(m.b3, vel_of(&MlpModel::b3), grads.b3, params.lr, params.momentum);
    }
  }
  return m;
}

std::vector<double> mlp_proba(const MlpModel& m, std::span<const double> row) {
  LayerCache c1, c2;
  c1.mask.assign(std::size_t(m.h1), 1.0);
  c2.mask.assign(std::size_t(m.h2), 1.0);
  const auto x_std = standardized_row(m, row);
  const auto logits = forward(m, x_std, c1, c2);
  if (m.n_out == 1) {
    const double p = 1.0 / (1.0 + std::exp(-logits[0]));
    return {1.0 - p, p};
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = std::exp(logits[c] - mx);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

double mlp_loss(const MlpModel& m, const FeatureMatrix& x,
                std::span<const int> y, bool multiclass) {
  LayerCache c1, c2;
  c1.mask.assign(std::size_t(m.h1), 1.0);
  c2.mask.assign(std::size_t(m.h2), 1.0);
  std::vector<double> dlogits;
  double loss = 0.0;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto x_std = standardized_row(m, x.row(r));
    const auto logits = forward(m, x_std, c1, c2);
    loss += loss_and_dlogits(logits, y[r], multiclass, dlogits);
  }
  return loss / double(x.n_rows);
}

std::vector<double> mlp_loss_gradient(const MlpModel& m, const FeatureMatrix& x,
                                      std::span<const int> y, bool multiclass) {
  Gradients grads(m);
  LayerCache c1, c2;
  c1.mask.assign(std::size_t(m.h1), 1.0);
  c2.mask.assign(std::size_t(m.h2), 1.0);
  std::vector<double> dlogits;
  const double scale = 1.0 / double(x.n_rows);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto x_std = standardized_row(m, x.row(r));
    const auto logits = forward(m, x_std, c1, c2);
    loss_and_dlogits(logits, y[r], multiclass, dlogits);
    for (double& v : dlogits) v *= scale;
    backward(m, x_std, c1, c2, dlogits, grads);
  }
  std::vector<double> flat;
  for (const auto* vec : {&grads.w1, &grads.b1, &grads.g1, &grads.be1,
                          &grads.w2, &grads.b2, &grads.g2, &grads.be2,
                          &grads.w3, &grads.b3}) {
    flat.insert(flat.end(), vec->begin(), vec->end());
  }
  return flat;
}

std::vector<double*> mlp_param_ptrs(MlpModel& m) {
  std::vector<double*> out;
  for (auto* vec : {&m.w1, &m.b1, &m.g1, &m.be1, &m.w2, &m.b2, &m.g2, &m.be2,
                    &m.w3, &m.b3}) {
    for (double& v : *vec) out.push_back(&v);
  }
  return out;
}

}  // namespace ldfs::detail
