#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/ml/dataset.hpp"
#include "sqkit/ml/forest.hpp"
#include "sqkit/ml/logreg.hpp"
#include "sqkit/ml/svm.hpp"
#include "sqkit/rng.hpp"

namespace sqkit {

/// Fractional ranks (1-based), ties averaged.
inline std::vector<double> fractional_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : a < b;
  });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation: Pearson correlation of fractional ranks.
/// Constant input has no defined correlation and yields an empty optional.
inline std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParamError("spearman: length mismatch");
  if (x.size() < 3) throw ParamError("spearman: need at least 3 pairs");

  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

/// A fitted classifier, tagged with the fingerprint of the dataset whose
/// train split produced it.
struct TrainedModel {
  std::string kind;  // "logreg" | "random_forest" | "svm"
  std::variant<LogRegModel, ForestModel, SvmModel> model;
  std::uint64_t training_seed = 0;
  std::uint64_t dataset_fp = 0;
};

inline int model_predict(const TrainedModel& m, const std::vector<double>& x) {
  return std::visit(
      [&x](const auto& inner) -> int {
        using T = std::decay_t<decltype(inner)>;
        if constexpr (std::is_same_v<T, LogRegModel>) return logreg_predict(inner, x);
        else if constexpr (std::is_same_v<T, ForestModel>) return forest_predict(inner, x);
        else return svm_predict(inner, x);
      },
      m.model);
}

struct EvalReport {
  double accuracy = 0.0;
  std::array<std::array<std::size_t, 3>, 3> confusion{};  // rows true, cols predicted
  std::array<double, 3> precision{};
  std::array<double, 3> recall{};
  std::optional<double> spearman_pa;
  std::size_t n_test = 0;
  std::string model_kind;
};

inline constexpr std::uint64_t kRatingSeedSalt = 0x72616e6b73616c74ull;  // "ranksalt"
inline constexpr double kRatingRankNoiseSigma = 5.0;

/// Synthetic annoyance ratings for the rank-correlation demonstration:
/// the fractional rank of each test row's PA plus seeded Gaussian rank noise.
inline std::vector<double> synthetic_ratings(const std::vector<double>& pa,
                                             std::uint64_t base_seed) {
  std::vector<double> ratings = fractional_ranks(pa);
  Xoshiro256ss rng(mix_seed(base_seed ^ kRatingSeedSalt));
  for (double& r : ratings) r += kRatingRankNoiseSigma * rng.normal();
  return ratings;
}

/// Evaluates a model on the dataset's frozen test split.
inline EvalReport evaluate(const TrainedModel& model, const Dataset& ds) {
  if (model.dataset_fp != dataset_fingerprint(ds)) {
    throw MismatchError("evaluate: model was not trained on this dataset");
  }

  EvalReport report;
  report.model_kind = model.kind;
  report.n_test = ds.split.test.size();

  std::vector<double> test_pa;
  for (std::size_t idx : ds.split.test) {
    const auto x = standardize_row(ds, ds.rows[idx]);
    const int predicted = model_predict(model, std::vector<double>(x.begin(), x.end()));
    const int truth = static_cast<int>(ds.labels[idx]);
    report.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)]++;
    test_pa.push_back(ds.rows[idx].pa);
  }

  std::size_t correct = 0, total = 0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      total += report.confusion[r][c];
      if (r == c) correct += report.confusion[r][c];
    }
  }
  report.accuracy = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;

  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t col_sum = 0, row_sum = 0;
    for (std::size_t r = 0; r < 3; ++r) {
      col_sum += report.confusion[r][c];
      row_sum += report.confusion[c][r];
    }
    report.precision[c] =
        col_sum > 0 ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(col_sum)
                    : 0.0;
    report.recall[c] =
        row_sum > 0 ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(row_sum)
                    : 0.0;
  }

  report.spearman_pa = spearman(test_pa, synthetic_ratings(test_pa, ds.base_seed));
  return report;
}

// Convenience wrappers: train on the dataset's standardized train split.

namespace eval_detail {

inline std::pair<Matrix, std::vector<int>> train_matrix(const Dataset& ds) {
  Matrix x;
  std::vector<int> y;
  for (std::size_t idx : ds.split.train) {
    const auto row = standardize_row(ds, ds.rows[idx]);
    x.emplace_back(row.begin(), row.end());
    y.push_back(static_cast<int>(ds.labels[idx]));
  }
  return {std::move(x), std::move(y)};
}

}  // namespace eval_detail

inline TrainedModel train_logreg(const Dataset& ds, const LogRegOptions& opts = {}) {
  const auto [x, y] = eval_detail::train_matrix(ds);
  TrainedModel m;
  m.kind = "logreg";
  m.model = train_logreg(x, y, kNumClasses, opts);
  m.training_seed = ds.base_seed;
  m.dataset_fp = dataset_fingerprint(ds);
  return m;
}

inline TrainedModel train_random_forest(const Dataset& ds, const ForestOptions& opts = {}) {
  if (ds.split.train.size() < 10) {
    throw ParamError("train_random_forest: need at least 10 train rows");
  }
  const auto [x, y] = eval_detail::train_matrix(ds);
  TrainedModel m;
  m.kind = "random_forest";
  m.model = train_random_forest(x, y, kNumClasses, opts);
  m.training_seed = opts.seed;
  m.dataset_fp = dataset_fingerprint(ds);
  return m;
}

inline TrainedModel train_svm(const Dataset& ds, const SvmOptions& opts = {}) {
  const auto [x, y] = eval_detail::train_matrix(ds);
  TrainedModel m;
  m.kind = "svm";
  m.model = train_svm(x, y, kNumClasses, opts);
  m.training_seed = opts.seed;
  m.dataset_fp = dataset_fingerprint(ds);
  return m;
}

}  // namespace sqkit
