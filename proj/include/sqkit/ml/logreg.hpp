#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/ml/pca.hpp"

namespace sqkit {

struct LogRegOptions {
  double learning_rate = 0.1;
  std::size_t iterations = 2000;
  double l2 = 1e-3;
};

/// Multinomial logistic regression trained by full-batch gradient descent
/// from zero initialization. L2 applies to weights, not biases.
struct LogRegModel {
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  Matrix weights;             // n_classes x n_features
  std::vector<double> bias;   // n_classes
  LogRegOptions options;
  double final_loss = 0.0;
};

namespace logreg_detail {

inline std::vector<double> softmax(const std::vector<double>& logits) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    p[c] = std::exp(logits[c] - mx);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace logreg_detail

inline std::vector<double> logreg_probabilities(const LogRegModel& m,
                                                const std::vector<double>& x) {
  std::vector<double> logits(m.n_classes, 0.0);
  for (std::size_t c = 0; c < m.n_classes; ++c) {
    double acc = m.bias[c];
    for (std::size_t j = 0; j < m.n_features; ++j) acc += m.weights[c][j] * x[j];
    logits[c] = acc;
  }
  return logreg_detail::softmax(logits);
}

inline int logreg_predict(const LogRegModel& m, const std::vector<double>& x) {
  const auto p = logreg_probabilities(m, x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c) {
    if (p[c] > p[best]) best = c;  // ties keep the lowest class index
  }
  return static_cast<int>(best);
}

/// Mean softmax cross-entropy plus 0.5 * l2 * ||W||^2 (biases unpenalized).
inline double logreg_loss(const LogRegModel& m, const Matrix& x, const std::vector<int>& y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = logreg_probabilities(m, x[i]);
    loss += -std::log(std::max(p[static_cast<std::size_t>(y[i])], 1e-300));
  }
  loss /= static_cast<double>(x.size());
  double reg = 0.0;
  for (const auto& row : m.weights) {
    for (double w : row) reg += w * w;
  }
  return loss + 0.5 * m.options.l2 * reg;
}

/// Full-batch gradient of logreg_loss at the model's current parameters.
/// Returns {weight gradient, bias gradient}.
inline std::pair<Matrix, std::vector<double>> logreg_gradient(const LogRegModel& m,
                                                              const Matrix& x,
                                                              const std::vector<int>& y) {
  Matrix gw(m.n_classes, std::vector<double>(m.n_features, 0.0));
  std::vector<double> gb(m.n_classes, 0.0);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = logreg_probabilities(m, x[i]);
    for (std::size_t c = 0; c < m.n_classes; ++c) {
      const double err = p[c] - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0);
      gb[c] += err * inv_n;
      for (std::size_t j = 0; j < m.n_features; ++j) gw[c][j] += err * x[i][j] * inv_n;
    }
  }
  for (std::size_t c = 0; c < m.n_classes; ++c) {
    for (std::size_t j = 0; j < m.n_features; ++j) gw[c][j] += m.options.l2 * m.weights[c][j];
  }
  return {std::move(gw), std::move(gb)};
}

inline LogRegModel train_logreg(const Matrix& x, const std::vector<int>& y,
                                std::size_t n_classes, const LogRegOptions& opts = {}) {
  if (x.empty() || x.size() != y.size()) throw ParamError("train_logreg: bad training data");

  LogRegModel m;
  m.n_classes = n_classes;
  m.n_features = x.front().size();
  m.weights.assign(n_classes, std::vector<double>(m.n_features, 0.0));
  m.bias.assign(n_classes, 0.0);
  m.options = opts;

  double prev_loss = logreg_loss(m, x, y);
  int rising = 0;
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    const auto [gw, gb] = logreg_gradient(m, x, y);
    for (std::size_t c = 0; c < n_classes; ++c) {
      m.bias[c] -= opts.learning_rate * gb[c];
      for (std::size_t j = 0; j < m.n_features; ++j) {
        m.weights[c][j] -= opts.learning_rate * gw[c][j];
      }
    }
    const double loss = logreg_loss(m, x, y);
    rising = loss > prev_loss ? rising + 1 : 0;
    if (rising > 10) {
      throw TrainingError("train_logreg: loss increased for more than 10 consecutive steps");
    }
    prev_loss = loss;
  }
  m.final_loss = prev_loss;
  return m;
}

}  // namespace sqkit
