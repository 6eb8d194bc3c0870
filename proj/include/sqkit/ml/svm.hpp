#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/ml/pca.hpp"
#include "sqkit/rng.hpp"

namespace sqkit {

struct SvmOptions {
  std::size_t epochs = 200;
  double lambda = 1e-3;
  std::uint64_t seed = 123;
};

/// One-vs-rest linear SVM. Each binary problem minimizes
/// lambda/2 ||w||^2 + mean hinge loss by full-batch subgradient steps with
/// learning rate 1/(lambda * t) at epoch t. The seeded shuffle fixes the
/// per-epoch summation order, so duplicated training data leaves the
/// averaged subgradient (and the solution) unchanged.
struct SvmModel {
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  Matrix weights;            // n_classes x n_features
  std::vector<double> bias;  // n_classes
  SvmOptions options;
};

inline double svm_margin(const SvmModel& m, std::size_t cls, const std::vector<double>& x) {
  double acc = m.bias[cls];
  for (std::size_t j = 0; j < m.n_features; ++j) acc += m.weights[cls][j] * x[j];
  return acc;
}

inline int svm_predict(const SvmModel& m, const std::vector<double>& x) {
  std::size_t best = 0;
  double best_margin = svm_margin(m, 0, x);
  for (std::size_t c = 1; c < m.n_classes; ++c) {
    const double margin = svm_margin(m, c, x);
    if (margin > best_margin) {  // ties keep the lowest class index
      best = c;
      best_margin = margin;
    }
  }
  return static_cast<int>(best);
}

inline SvmModel train_svm(const Matrix& x, const std::vector<int>& y, std::size_t n_classes,
                          const SvmOptions& opts = {}) {
  if (x.empty() || x.size() != y.size()) throw ParamError("train_svm: bad training data");
  if (!(opts.lambda > 0.0)) throw ParamError("train_svm: lambda must be positive");

  SvmModel m;
  m.n_classes = n_classes;
  m.n_features = x.front().size();
  m.weights.assign(n_classes, std::vector<double>(m.n_features, 0.0));
  m.bias.assign(n_classes, 0.0);
  m.options = opts;

  const std::size_t n = x.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t c = 0; c < n_classes; ++c) {
    Xoshiro256ss rng(mix_seed(opts.seed ^ static_cast<std::uint64_t>(c)));
    std::vector<double>& w = m.weights[c];
    double& b = m.bias[c];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
      for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i + 1));
        std::swap(order[i], order[j]);
      }

      std::vector<double> grad_w(m.n_features, 0.0);
      double grad_b = 0.0;
      for (std::size_t idx : order) {
        const double label = y[idx] == static_cast<int>(c) ? 1.0 : -1.0;
        double margin = b;
        for (std::size_t j = 0; j < m.n_features; ++j) margin += w[j] * x[idx][j];
        if (label * margin < 1.0) {
          for (std::size_t j = 0; j < m.n_features; ++j) grad_w[j] -= label * x[idx][j] * inv_n;
          grad_b -= label * inv_n;
        }
      }
      for (std::size_t j = 0; j < m.n_features; ++j) grad_w[j] += opts.lambda * w[j];

      const double step = 1.0 / (opts.lambda * static_cast<double>(epoch));
      for (std::size_t j = 0; j < m.n_features; ++j) w[j] -= step * grad_w[j];
      b -= step * grad_b;
    }
  }
  return m;
}

}  // namespace sqkit
