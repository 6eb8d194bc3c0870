#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/ml/pca.hpp"
#include "sqkit/rng.hpp"

namespace sqkit {

struct ForestOptions {
  std::size_t n_trees = 100;
  std::size_t mtry = 2;          // features considered per split (sqrt(6) -> 2)
  bool bootstrap = true;
  std::uint64_t seed = 123;
  std::size_t min_samples_split = 2;
};

struct TreeNode {
  int feature = -1;          // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf_class = -1;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestOptions options;
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
};

namespace forest_detail {

inline double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // weighted child Gini
};

/// Exhaustive threshold search over the given features: candidate thresholds
/// are midpoints between consecutive distinct sorted values. First strictly
/// better candidate wins, so results are deterministic in feature order.
inline SplitChoice best_split(const Matrix& x, const std::vector<int>& y,
                              const std::vector<std::size_t>& idx,
                              const std::vector<std::size_t>& features, std::size_t n_classes) {
  SplitChoice best;
  std::vector<std::pair<double, int>> vals(idx.size());

  for (std::size_t f : features) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      vals[i] = {x[idx[i]][f], y[idx[i]]};
    }
    std::sort(vals.begin(), vals.end());

    std::vector<std::size_t> left_counts(n_classes, 0);
    std::vector<std::size_t> right_counts(n_classes, 0);
    for (const auto& [v, label] : vals) right_counts[static_cast<std::size_t>(label)]++;

    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      left_counts[static_cast<std::size_t>(vals[i].second)]++;
      right_counts[static_cast<std::size_t>(vals[i].second)]--;
      if (vals[i].first == vals[i + 1].first) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = vals.size() - nl;
      const double score = (static_cast<double>(nl) * gini(left_counts, nl) +
                            static_cast<double>(nr) * gini(right_counts, nr)) /
                           static_cast<double>(vals.size());
      if (!best.found || score < best.score) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        best.score = score;
      }
    }
  }
  return best;
}

inline int majority_class(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;  // ties keep the lowest class index
  }
  return static_cast<int>(best);
}

inline int grow_node(DecisionTree& tree, const Matrix& x, const std::vector<int>& y,
                     std::vector<std::size_t> idx, std::size_t n_classes,
                     const ForestOptions& opts, Xoshiro256ss& rng) {
  std::vector<std::size_t> counts(n_classes, 0);
  for (std::size_t i : idx) counts[static_cast<std::size_t>(y[i])]++;

  const bool pure = std::count_if(counts.begin(), counts.end(),
                                  [](std::size_t c) { return c > 0; }) <= 1;

  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();

  if (pure || idx.size() < opts.min_samples_split) {
    tree.nodes[static_cast<std::size_t>(node_id)].leaf_class = majority_class(counts);
    return node_id;
  }

  // Sample mtry distinct features for this split; the candidate set is
  // scanned in ascending index order so ties resolve deterministically.
  const std::size_t d = x.front().size();
  std::vector<std::size_t> features(d);
  std::iota(features.begin(), features.end(), 0);
  const std::size_t mtry = std::min(opts.mtry, d);
  if (mtry < d) {
    for (std::size_t i = 0; i < mtry; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
      std::swap(features[i], features[j]);
    }
    features.resize(mtry);
    std::sort(features.begin(), features.end());
  }

  const SplitChoice split = best_split(x, y, idx, features, n_classes);
  if (!split.found) {
    tree.nodes[static_cast<std::size_t>(node_id)].leaf_class = majority_class(counts);
    return node_id;
  }

  std::vector<std::size_t> left_idx, right_idx;
  for (std::size_t i : idx) {
    if (x[i][static_cast<std::size_t>(split.feature)] <= split.threshold) {
      left_idx.push_back(i);
    } else {
      right_idx.push_back(i);
    }
  }

  const int left = grow_node(tree, x, y, std::move(left_idx), n_classes, opts, rng);
  const int right = grow_node(tree, x, y, std::move(right_idx), n_classes, opts, rng);
  TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
  node.feature = split.feature;
  node.threshold = split.threshold;
  node.left = left;
  node.right = right;
  return node_id;
}

}  // namespace forest_detail

inline int tree_predict(const DecisionTree& tree, const std::vector<double>& x) {
  int i = 0;
  while (tree.nodes[static_cast<std::size_t>(i)].leaf_class < 0) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return tree.nodes[static_cast<std::size_t>(i)].leaf_class;
}

/// Majority vote across trees; ties break to the lowest class index.
inline int forest_predict(const ForestModel& m, const std::vector<double>& x) {
  std::vector<std::size_t> votes(m.n_classes, 0);
  for (const DecisionTree& tree : m.trees) {
    votes[static_cast<std::size_t>(tree_predict(tree, x))]++;
  }
  return forest_detail::majority_class(votes);
}

/// CART forest: Gini impurity, bootstrap resampling at train-set size, mtry
/// features per split, grown until pure or below min_samples_split. Per-tree
/// seed = SplitMix64(seed XOR tree_index), so any parallel schedule matches
/// serial output.
inline ForestModel train_random_forest(const Matrix& x, const std::vector<int>& y,
                                       std::size_t n_classes, const ForestOptions& opts = {}) {
  if (x.empty() || x.size() != y.size()) throw ParamError("train_random_forest: bad data");

  ForestModel model;
  model.options = opts;
  model.n_classes = n_classes;
  model.n_features = x.front().size();
  model.trees.resize(opts.n_trees);

  const std::size_t n = x.size();
  for (std::size_t t = 0; t < opts.n_trees; ++t) {
    Xoshiro256ss rng(mix_seed(opts.seed ^ static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> idx(n);
    if (opts.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::size_t>(rng.uniform_index(n));
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    forest_detail::grow_node(model.trees[t], x, y, std::move(idx), n_classes, opts, rng);
  }
  return model;
}

}  // namespace sqkit
