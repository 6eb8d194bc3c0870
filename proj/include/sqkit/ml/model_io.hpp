#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sqkit/errors.hpp"
#include "sqkit/io/csv.hpp"
#include "sqkit/ml/eval.hpp"

namespace sqkit {

namespace model_io_detail {

inline nlohmann::json to_json(const LogRegModel& m) {
  return {{"n_classes", m.n_classes},
          {"n_features", m.n_features},
          {"weights", m.weights},
          {"bias", m.bias},
          {"learning_rate", m.options.learning_rate},
          {"iterations", m.options.iterations},
          {"l2", m.options.l2},
          {"final_loss", m.final_loss}};
}

inline LogRegModel logreg_from_json(const nlohmann::json& j) {
  LogRegModel m;
  m.n_classes = j.at("n_classes").get<std::size_t>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.weights = j.at("weights").get<Matrix>();
  m.bias = j.at("bias").get<std::vector<double>>();
  m.options.learning_rate = j.at("learning_rate").get<double>();
  m.options.iterations = j.at("iterations").get<std::size_t>();
  m.options.l2 = j.at("l2").get<double>();
  m.final_loss = j.at("final_loss").get<double>();
  return m;
}

inline nlohmann::json to_json(const ForestModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const DecisionTree& tree : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_class});
    }
    trees.push_back(std::move(nodes));
  }
  return {{"n_classes", m.n_classes},
          {"n_features", m.n_features},
          {"n_trees", m.options.n_trees},
          {"mtry", m.options.mtry},
          {"bootstrap", m.options.bootstrap},
          {"seed", m.options.seed},
          {"min_samples_split", m.options.min_samples_split},
          {"trees", std::move(trees)}};
}

inline ForestModel forest_from_json(const nlohmann::json& j) {
  ForestModel m;
  m.n_classes = j.at("n_classes").get<std::size_t>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.options.n_trees = j.at("n_trees").get<std::size_t>();
  m.options.mtry = j.at("mtry").get<std::size_t>();
  m.options.bootstrap = j.at("bootstrap").get<bool>();
  m.options.seed = j.at("seed").get<std::uint64_t>();
  m.options.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  for (const auto& tree_json : j.at("trees")) {
    DecisionTree tree;
    for (const auto& n : tree_json) {
      TreeNode node;
      node.feature = n.at(0).get<int>();
      node.threshold = n.at(1).get<double>();
      node.left = n.at(2).get<int>();
      node.right = n.at(3).get<int>();
      node.leaf_class = n.at(4).get<int>();
      tree.nodes.push_back(node);
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

inline nlohmann::json to_json(const SvmModel& m) {
  return {{"n_classes", m.n_classes},
          {"n_features", m.n_features},
          {"weights", m.weights},
          {"bias", m.bias},
          {"epochs", m.options.epochs},
          {"lambda", m.options.lambda},
          {"seed", m.options.seed}};
}

inline SvmModel svm_from_json(const nlohmann::json& j) {
  SvmModel m;
  m.n_classes = j.at("n_classes").get<std::size_t>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.weights = j.at("weights").get<Matrix>();
  m.bias = j.at("bias").get<std::vector<double>>();
  m.options.epochs = j.at("epochs").get<std::size_t>();
  m.options.lambda = j.at("lambda").get<double>();
  m.options.seed = j.at("seed").get<std::uint64_t>();
  return m;
}

}  // namespace model_io_detail

inline void save_model(const TrainedModel& m, const std::string& path) {
  nlohmann::json j;
  j["kind"] = m.kind;
  j["training_seed"] = m.training_seed;
  j["dataset_fingerprint"] = m.dataset_fp;
  if (const auto* lr = std::get_if<LogRegModel>(&m.model)) {
    j["model"] = model_io_detail::to_json(*lr);
  } else if (const auto* rf = std::get_if<ForestModel>(&m.model)) {
    j["model"] = model_io_detail::to_json(*rf);
  } else if (const auto* svm = std::get_if<SvmModel>(&m.model)) {
    j["model"] = model_io_detail::to_json(*svm);
  }
  write_text_file(path, j.dump(2) + "\n");
}

inline TrainedModel load_model(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("model: '" + path + "' is not valid JSON: " + e.what());
  }
  TrainedModel m;
  try {
    m.kind = j.at("kind").get<std::string>();
    m.training_seed = j.at("training_seed").get<std::uint64_t>();
    m.dataset_fp = j.at("dataset_fingerprint").get<std::uint64_t>();
    if (m.kind == "logreg") {
      m.model = model_io_detail::logreg_from_json(j.at("model"));
    } else if (m.kind == "random_forest") {
      m.model = model_io_detail::forest_from_json(j.at("model"));
    } else if (m.kind == "svm") {
      m.model = model_io_detail::svm_from_json(j.at("model"));
    } else {
      throw FormatError("model: unknown kind '" + m.kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model: '" + path + "' missing fields: " + e.what());
  }
  return m;
}

inline nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["model_kind"] = r.model_kind;
  j["accuracy"] = r.accuracy;
  j["n_test"] = r.n_test;
  j["confusion"] = r.confusion;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  if (r.spearman_pa) {
    j["spearman_pa"] = *r.spearman_pa;
  } else {
    j["spearman_pa"] = nullptr;
  }
  j["class_order"] = {"engine_boom", "wind_whistle", "road_noise"};
  return j;
}

}  // namespace sqkit
