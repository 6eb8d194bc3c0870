#include <catch2/catch_amalgamated.hpp>

#include "sqkit/ml/eval.hpp"
#include "sqkit/ml/model_io.hpp"

#include <cmath>
#include <filesystem>

using namespace sqkit;

namespace {

/// Synthetic, perfectly clusterable 3-class feature data; quick and exact.
Dataset clustered_dataset(std::size_t per_class = 12, double spread = 0.05) {
  Dataset ds;
  ds.base_seed = 77;
  ds.n_per_class = per_class;
  Xoshiro256ss rng(5);
  const double centers[3][6] = {
      {1.0, 0.0, 0.5, 0.0, 0.0, 1.0},
      {0.0, 2.0, 0.0, 0.5, 8.0, 3.0},
      {-1.0, -2.0, 0.2, 0.1, 0.0, 0.5},
  };
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      FeatureVector fv;
      fv.n = std::abs(centers[c][0] + spread * rng.normal());
      fv.s = centers[c][1] + spread * rng.normal();
      fv.r = centers[c][2] + spread * rng.normal();
      fv.f = centers[c][3] + spread * rng.normal();
      fv.t = centers[c][4] + spread * rng.normal();
      fv.pa = annoyance(fv.n, fv.s, fv.r, fv.f).value;
      ds.rows.push_back(fv);
      ds.labels.push_back(static_cast<StimulusClass>(c));
    }
  }
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    if (i % per_class < (per_class * 7) / 10) {
      ds.split.train.push_back(i);
    } else {
      ds.split.test.push_back(i);
    }
  }
  ds.standardization = ml_detail::fit_standardization(ds);
  return ds;
}

}  // namespace

// ----------------------------------------------------------------- logreg

TEST_CASE("logreg separates linearly separable 1-feature data") {
  Matrix x;
  std::vector<int> y;
  for (int i = 0; i < 10; ++i) {
    x.push_back({-2.0 - 0.1 * i});
    y.push_back(0);
    x.push_back({2.0 + 0.1 * i});
    y.push_back(1);
  }
  const LogRegModel m = train_logreg(x, y, 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(logreg_predict(m, x[i]) == y[i]);
  }
}

TEST_CASE("zero iterations yields uniform class probabilities") {
  Matrix x{{0.5, -0.5}, {1.0, 1.0}, {-1.0, 0.0}};
  std::vector<int> y{0, 1, 2};
  LogRegOptions opts;
  opts.iterations = 0;
  const LogRegModel m = train_logreg(x, y, 3, opts);
  const auto p = logreg_probabilities(m, {0.3, 0.7});
  for (double v : p) REQUIRE(v == Catch::Approx(1.0 / 3.0).margin(1e-12));
}

TEST_CASE("logreg gradient matches central finite differences at zero") {
  Matrix x{{0.5, -1.2}, {1.5, 0.3}, {-0.7, 0.9}, {0.1, -0.4}};
  std::vector<int> y{0, 1, 2, 1};
  LogRegModel m;
  m.n_classes = 3;
  m.n_features = 2;
  m.weights.assign(3, std::vector<double>(2, 0.0));
  m.bias.assign(3, 0.0);

  const auto [gw, gb] = logreg_gradient(m, x, y);
  const double h = 1e-6;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < 2; ++j) {
      LogRegModel plus = m, minus = m;
      plus.weights[c][j] += h;
      minus.weights[c][j] -= h;
      const double fd = (logreg_loss(plus, x, y) - logreg_loss(minus, x, y)) / (2.0 * h);
      REQUIRE(gw[c][j] == Catch::Approx(fd).epsilon(1e-5).margin(1e-9));
    }
    LogRegModel plus = m, minus = m;
    plus.bias[c] += h;
    minus.bias[c] -= h;
    const double fd = (logreg_loss(plus, x, y) - logreg_loss(minus, x, y)) / (2.0 * h);
    REQUIRE(gb[c] == Catch::Approx(fd).epsilon(1e-5).margin(1e-9));
  }
}

TEST_CASE("logreg loss decreases monotonically on clustered data") {
  const Dataset ds = clustered_dataset();
  const auto [x, y] = eval_detail::train_matrix(ds);

  LogRegModel probe;
  probe.n_classes = 3;
  probe.n_features = 6;
  probe.weights.assign(3, std::vector<double>(6, 0.0));
  probe.bias.assign(3, 0.0);
  const double initial = logreg_loss(probe, x, y);

  const LogRegModel m = train_logreg(x, y, 3);
  REQUIRE(m.final_loss < initial);
}

TEST_CASE("softmax argmax is invariant to positive logit scaling") {
  const Dataset ds = clustered_dataset();
  const auto [x, y] = eval_detail::train_matrix(ds);
  const LogRegModel m = train_logreg(x, y, 3);

  LogRegModel scaled = m;
  for (auto& row : scaled.weights) {
    for (double& v : row) v *= 7.5;
  }
  for (double& v : scaled.bias) v *= 7.5;
  for (const auto& row : x) {
    REQUIRE(logreg_predict(m, row) == logreg_predict(scaled, row));
  }
}

// ----------------------------------------------------------------- forest

TEST_CASE("single unbagged tree reproduces the brute-force CART split") {
  // 4-row XOR table: every root split ties at Gini 0.5 exactly, so the
  // tie-break (first feature, lowest threshold) must match the oracle.
  const Matrix x{{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
  const std::vector<int> y{0, 1, 1, 0};

  ForestOptions opts;
  opts.n_trees = 1;
  opts.bootstrap = false;
  opts.mtry = 2;

  const ForestModel m = train_random_forest(x, y, 2, opts);

  // Brute-force oracle: all features, all midpoints, weighted Gini.
  double best_score = 1e300;
  int best_feature = -1;
  double best_threshold = 0.0;
  for (int f = 0; f < 2; ++f) {
    std::vector<double> vals;
    for (const auto& row : x) vals.push_back(row[static_cast<std::size_t>(f)]);
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      if (vals[i] == vals[i + 1]) continue;
      const double thr = 0.5 * (vals[i] + vals[i + 1]);
      std::size_t nl = 0, nr = 0, l1 = 0, r1 = 0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k][static_cast<std::size_t>(f)] <= thr) {
          ++nl;
          l1 += static_cast<std::size_t>(y[k]);
        } else {
          ++nr;
          r1 += static_cast<std::size_t>(y[k]);
        }
      }
      const auto gini2 = [](std::size_t ones, std::size_t n) {
        const double p = static_cast<double>(ones) / static_cast<double>(n);
        return 1.0 - p * p - (1.0 - p) * (1.0 - p);
      };
      const double score = (static_cast<double>(nl) * gini2(l1, nl) +
                            static_cast<double>(nr) * gini2(r1, nr)) /
                           static_cast<double>(x.size());
      if (score < best_score) {
        best_score = score;
        best_feature = f;
        best_threshold = thr;
      }
    }
  }

  const TreeNode& root = m.trees[0].nodes[0];
  REQUIRE(root.feature == best_feature);
  REQUIRE(root.threshold == Catch::Approx(best_threshold).margin(1e-12));

  // The deep tree memorizes the table.
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(tree_predict(m.trees[0], x[i]) == y[i]);
  }
}

TEST_CASE("forest training is deterministic per seed") {
  const Dataset ds = clustered_dataset();
  const TrainedModel a = train_random_forest(ds);
  const TrainedModel b = train_random_forest(ds);
  for (std::size_t idx : ds.split.test) {
    const auto row = standardize_row(ds, ds.rows[idx]);
    const std::vector<double> v(row.begin(), row.end());
    REQUIRE(model_predict(a, v) == model_predict(b, v));
  }
}

TEST_CASE("forest nearly memorizes its training set") {
  const Dataset ds = clustered_dataset(20, 0.3);
  const auto [x, y] = eval_detail::train_matrix(ds);
  const ForestModel m = train_random_forest(x, y, 3);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (forest_predict(m, x[i]) == y[i]) ++correct;
  }
  REQUIRE(static_cast<double>(correct) / static_cast<double>(x.size()) >= 0.99);
}

// -------------------------------------------------------------------- svm

TEST_CASE("svm separates 2-class data with margin 2 at the origin") {
  Matrix x;
  std::vector<int> y;
  for (int i = 0; i < 8; ++i) {
    x.push_back({1.0 + 0.05 * i});
    y.push_back(1);
    x.push_back({-1.0 - 0.05 * i});
    y.push_back(0);
  }
  const SvmModel m = train_svm(x, y, 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(svm_predict(m, x[i]) == y[i]);
  }
}

TEST_CASE("duplicating the training set leaves the svm unchanged") {
  const Dataset ds = clustered_dataset();
  const auto [x, y] = eval_detail::train_matrix(ds);

  Matrix x2 = x;
  x2.insert(x2.end(), x.begin(), x.end());
  std::vector<int> y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());

  const SvmModel a = train_svm(x, y, 3);
  const SvmModel b = train_svm(x2, y2, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    REQUIRE(a.bias[c] == Catch::Approx(b.bias[c]).margin(1e-6));
    for (std::size_t j = 0; j < 6; ++j) {
      REQUIRE(a.weights[c][j] == Catch::Approx(b.weights[c][j]).margin(1e-6));
    }
  }
}

TEST_CASE("svm training is deterministic per seed") {
  const Dataset ds = clustered_dataset();
  const auto [x, y] = eval_detail::train_matrix(ds);
  const SvmModel a = train_svm(x, y, 3);
  const SvmModel b = train_svm(x, y, 3);
  REQUIRE(a.weights == b.weights);
  REQUIRE(a.bias == b.bias);
}

// ------------------------------------------------------------- evaluation

TEST_CASE("well-separated clusters evaluate to a diagonal confusion matrix") {
  const Dataset ds = clustered_dataset();
  const TrainedModel m = train_random_forest(ds);
  const EvalReport report = evaluate(m, ds);

  REQUIRE(report.accuracy == 1.0);
  std::size_t total = 0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      total += report.confusion[r][c];
      if (r != c) REQUIRE(report.confusion[r][c] == 0);
    }
  }
  REQUIRE(total == report.n_test);
  for (std::size_t c = 0; c < 3; ++c) {
    REQUIRE(report.precision[c] == 1.0);
    REQUIRE(report.recall[c] == 1.0);
  }
}

TEST_CASE("accuracy equals trace over total exactly") {
  const Dataset ds = clustered_dataset(10, 2.0);  // noisy: imperfect classifier
  const TrainedModel m = train_logreg(ds);
  const EvalReport report = evaluate(m, ds);
  std::size_t trace = 0, total = 0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      total += report.confusion[r][c];
      if (r == c) trace += report.confusion[r][c];
    }
  }
  REQUIRE(report.accuracy == static_cast<double>(trace) / static_cast<double>(total));
}

TEST_CASE("evaluating against a different dataset is a usage error") {
  const Dataset ds = clustered_dataset();
  const Dataset other = clustered_dataset(12, 0.06);
  const TrainedModel m = train_svm(ds);
  REQUIRE_THROWS_AS(evaluate(m, other), MismatchError);
}

TEST_CASE("deterministic spearman_pa demo value") {
  const Dataset ds = clustered_dataset();
  const TrainedModel m = train_random_forest(ds);
  const EvalReport a = evaluate(m, ds);
  const EvalReport b = evaluate(m, ds);
  REQUIRE(a.spearman_pa.has_value());
  REQUIRE(*a.spearman_pa == *b.spearman_pa);
  REQUIRE(*a.spearman_pa >= -1.0);
  REQUIRE(*a.spearman_pa <= 1.0);
}

// --------------------------------------------------------------- spearman

TEST_CASE("spearman of monotone pairs") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> up{10.0, 20.0, 30.0, 40.0, 50.0};
  std::vector<double> down(up.rbegin(), up.rend());
  REQUIRE(*spearman(x, up) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(*spearman(x, down) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("spearman hand case with one swapped pair is 0.9") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> y{1.0, 2.0, 3.0, 5.0, 4.0};
  REQUIRE(*spearman(x, y) == Catch::Approx(0.9).margin(1e-12));
}

TEST_CASE("spearman averages tied ranks") {
  const std::vector<double> x{1.0, 1.0, 2.0};
  const std::vector<double> y{1.0, 2.0, 2.0};
  REQUIRE(*spearman(x, y) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("spearman sentinel and validation") {
  const std::vector<double> constant{2.0, 2.0, 2.0};
  const std::vector<double> varying{1.0, 2.0, 3.0};
  REQUIRE_FALSE(spearman(constant, varying).has_value());
  REQUIRE_FALSE(spearman(varying, constant).has_value());
  REQUIRE_THROWS_AS(spearman({1.0, 2.0}, {1.0, 2.0}), ParamError);
  REQUIRE_THROWS_AS(spearman({1.0, 2.0, 3.0}, {1.0, 2.0}), ParamError);
}

// ----------------------------------------------------------- model files

TEST_CASE("models round-trip through JSON") {
  const Dataset ds = clustered_dataset();
  const auto dir = std::filesystem::temp_directory_path();

  for (const TrainedModel& m :
       {train_logreg(ds), train_random_forest(ds), train_svm(ds)}) {
    const std::string path = (dir / ("sqkit_model_" + m.kind + ".json")).string();
    save_model(m, path);
    const TrainedModel back = load_model(path);
    REQUIRE(back.kind == m.kind);
    REQUIRE(back.dataset_fp == m.dataset_fp);
    for (std::size_t idx : ds.split.test) {
      const auto row = standardize_row(ds, ds.rows[idx]);
      const std::vector<double> v(row.begin(), row.end());
      REQUIRE(model_predict(back, v) == model_predict(m, v));
    }
    std::filesystem::remove(path);
  }
}

TEST_CASE("model loader rejects malformed files") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "sqkit_bad_model.json").string();
  write_text_file(path, "{\"kind\": \"mystery\"}");
  REQUIRE_THROWS_AS(load_model(path), FormatError);
  write_text_file(path, "not json");
  REQUIRE_THROWS_AS(load_model(path), FormatError);
  std::filesystem::remove(path);
  REQUIRE_THROWS_AS(load_model("/nonexistent/model.json"), IoError);
}
