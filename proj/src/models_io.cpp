// SPDX-License-Identifier: Apache-2.0
#include "qnids/models_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qnids/errors.hpp"

namespace qnids {

namespace {

using nlohmann::json;

void expect_type(const json& j, const std::string& type) {
  if (!j.is_object() || j.value("model_type", "") != type) {
    throw DataError("model file is not a " + type + " model");
  }
}

json gates_to_json(const std::vector<Gate>& gates) {
  json arr = json::array();
  for (Gate g : gates) arr.push_back(gate_name(g));
  return arr;
}

std::vector<Gate> gates_from_json(const json& arr) {
  std::vector<Gate> gates;
  for (const auto& name : arr) gates.push_back(gate_from_name(name.get<std::string>()));
  return gates;
}

void check_dual_coeffs(const std::vector<double>& coeffs, const Matrix& support_rows, double C) {
  if (coeffs.size() != support_rows.size()) {
    throw DataError("model file: coefficient count != support-vector count");
  }
  for (double coeff : coeffs) {
    if (!std::isfinite(coeff) || std::abs(coeff) > C + 1e-9) {
      throw DataError("model file: dual coefficient outside [-C, C]");
    }
  }
  for (const auto& row : support_rows) {
    if (!support_rows.empty() && row.size() != support_rows.front().size()) {
      throw DataError("model file: ragged support-vector rows");
    }
  }
}

}  // namespace

json feature_map_spec_to_json(const FeatureMapSpec& spec) {
  json j;
  j["kind"] = feature_map_kind_name(spec.kind);
  j["num_qubits"] = spec.num_qubits;
  j["reps"] = spec.reps;
  j["entanglement"] = entanglement_name(spec.entanglement);
  j["pauli_strings"] = spec.pauli_strings;
  return j;
}

FeatureMapSpec feature_map_spec_from_json(const json& j) {
  FeatureMapSpec spec;
  spec.kind = feature_map_kind_from_name(j.at("kind").get<std::string>());
  spec.num_qubits = j.at("num_qubits").get<int>();
  spec.reps = j.value("reps", spec.reps);
  if (j.contains("entanglement")) {
    spec.entanglement = entanglement_from_name(j.at("entanglement").get<std::string>());
  }
  if (j.contains("pauli_strings")) {
    spec.pauli_strings = j.at("pauli_strings").get<std::vector<std::string>>();
  }
  spec.validate();
  return spec;
}

json ansatz_spec_to_json(const AnsatzSpec& spec) {
  json j;
  j["kind"] = ansatz_kind_name(spec.kind);
  j["num_qubits"] = spec.num_qubits;
  j["reps"] = spec.reps;
  j["entanglement"] = entanglement_name(spec.entanglement);
  j["rotation_blocks"] = gates_to_json(spec.rotation_blocks);
  return j;
}

AnsatzSpec ansatz_spec_from_json(const json& j) {
  AnsatzSpec spec;
  spec.kind = ansatz_kind_from_name(j.at("kind").get<std::string>());
  spec.num_qubits = j.at("num_qubits").get<int>();
  spec.reps = j.value("reps", spec.reps);
  if (j.contains("entanglement")) {
    spec.entanglement = entanglement_from_name(j.at("entanglement").get<std::string>());
  }
  if (j.contains("rotation_blocks")) {
    spec.rotation_blocks = gates_from_json(j.at("rotation_blocks"));
  }
  spec.validate();
  return spec;
}

json optimizer_config_to_json(const OptimizerConfig& config) {
  json j;
  j["kind"] = optimizer_kind_name(config.kind);
  j["max_iters"] = config.max_iters;
  j["learning_rate"] = config.learning_rate;
  j["spsa_a"] = config.spsa_a;
  j["spsa_c"] = config.spsa_c;
  j["simplex_step"] = config.simplex_step;
  j["seed"] = config.seed;
  j["tolerance"] = config.tolerance;
  return j;
}

OptimizerConfig optimizer_config_from_json(const json& j) {
  OptimizerConfig config;
  if (j.contains("kind")) config.kind = optimizer_kind_from_name(j.at("kind").get<std::string>());
  config.max_iters = j.value("max_iters", config.max_iters);
  config.learning_rate = j.value("learning_rate", config.learning_rate);
  config.spsa_a = j.value("spsa_a", config.spsa_a);
  config.spsa_c = j.value("spsa_c", config.spsa_c);
  config.simplex_step = j.value("simplex_step", config.simplex_step);
  config.seed = j.value("seed", config.seed);
  config.tolerance = j.value("tolerance", config.tolerance);
  config.validate();
  return config;
}

json vqc_to_json(const VqcModel& model) {
  json j;
  j["model_type"] = "vqc";
  j["feature_map"] = feature_map_spec_to_json(model.feature_map);
  j["ansatz"] = ansatz_spec_to_json(model.ansatz);
  j["observable"] = model.observable;
  j["optimizer"] = optimizer_config_to_json(model.optimizer);
  j["threshold"] = model.threshold;
  j["theta"] = model.theta;
  j["trained"] = model.trained;
  return j;
}

VqcModel vqc_from_json(const json& j) {
  expect_type(j, "vqc");
  VqcModel model;
  model.feature_map = feature_map_spec_from_json(j.at("feature_map"));
  model.ansatz = ansatz_spec_from_json(j.at("ansatz"));
  model.observable = j.value("observable", std::string());
  model.optimizer = optimizer_config_from_json(j.at("optimizer"));
  model.threshold = j.value("threshold", 0.0);
  model.theta = j.value("theta", std::vector<double>());
  model.trained = j.value("trained", false);
  if (model.feature_map.num_qubits != model.ansatz.num_qubits) {
    throw DataError("vqc model file: feature map and ansatz widths differ");
  }
  if (!model.observable.empty()) {
    if (model.observable.size() != static_cast<std::size_t>(model.ansatz.num_qubits)) {
      throw DataError("vqc model file: observable length != qubit count");
    }
    for (char c : model.observable) {
      if (c != 'I' && c != 'Z') throw DataError("vqc model file: observable must be I/Z");
    }
  }
  if (model.trained && model.theta.size() != build_ansatz(model.ansatz).num_params) {
    throw DataError("vqc model file: theta length != ansatz parameter count");
  }
  for (double t : model.theta) {
    if (!std::isfinite(t)) throw DataError("vqc model file: non-finite parameter");
  }
  return model;
}

json qsvm_to_json(const QsvmModel& model) {
  json j;
  j["model_type"] = "qsvm";
  j["feature_map"] = feature_map_spec_to_json(model.feature_map);
  j["C"] = model.C;
  j["support_rows"] = model.support_rows;
  j["coeffs"] = model.coeffs;
  j["b"] = model.b;
  j["trained"] = model.trained;
  return j;
}

QsvmModel qsvm_from_json(const json& j) {
  expect_type(j, "qsvm");
  QsvmModel model;
  model.feature_map = feature_map_spec_from_json(j.at("feature_map"));
  model.C = j.value("C", 1.0);
  model.support_rows = j.value("support_rows", Matrix());
  model.coeffs = j.value("coeffs", std::vector<double>());
  model.b = j.value("b", 0.0);
  model.trained = j.value("trained", false);
  if (model.C <= 0.0) throw DataError("qsvm model file: C must be positive");
  if (!std::isfinite(model.b)) throw DataError("qsvm model file: non-finite bias");
  check_dual_coeffs(model.coeffs, model.support_rows, model.C);
  return model;
}

json qcnn_to_json(const QcnnModel& model) {
  json j;
  j["model_type"] = "qcnn";
  j["feature_map"] = feature_map_spec_to_json(model.feature_map);
  j["optimizer"] = optimizer_config_to_json(model.optimizer);
  j["threshold"] = model.threshold;
  j["theta"] = model.theta;
  j["trained"] = model.trained;
  return j;
}

QcnnModel qcnn_from_json(const json& j) {
  expect_type(j, "qcnn");
  QcnnModel model;
  model.feature_map = feature_map_spec_from_json(j.at("feature_map"));
  model.optimizer = optimizer_config_from_json(j.at("optimizer"));
  model.threshold = j.value("threshold", 0.0);
  model.theta = j.value("theta", std::vector<double>());
  model.trained = j.value("trained", false);
  const QcnnPlan plan = qcnn_build(model.feature_map.num_qubits);
  if (model.trained && model.theta.size() != plan.num_params) {
    throw DataError("qcnn model file: theta length != plan parameter count");
  }
  for (double t : model.theta) {
    if (!std::isfinite(t)) throw DataError("qcnn model file: non-finite parameter");
  }
  return model;
}

json classical_svm_to_json(const ClassicalSvmModel& model) {
  json j;
  j["model_type"] = "svm";
  j["kernel"] = model.kernel;
  j["C"] = model.C;
  j["gamma"] = model.gamma;
  j["support_rows"] = model.support_rows;
  j["coeffs"] = model.coeffs;
  j["b"] = model.b;
  j["trained"] = model.trained;
  return j;
}

ClassicalSvmModel classical_svm_from_json(const json& j) {
  expect_type(j, "svm");
  ClassicalSvmModel model;
  model.kernel = j.value("kernel", std::string("rbf"));
  model.C = j.value("C", 1.0);
  model.gamma = j.value("gamma", 0.0);
  model.support_rows = j.value("support_rows", Matrix());
  model.coeffs = j.value("coeffs", std::vector<double>());
  model.b = j.value("b", 0.0);
  model.trained = j.value("trained", false);
  if (model.kernel != "rbf" && model.kernel != "linear") {
    throw DataError("svm model file: unknown kernel '" + model.kernel + "'");
  }
  if (model.C <= 0.0) throw DataError("svm model file: C must be positive");
  if (model.trained && model.kernel == "rbf" && model.gamma <= 0.0) {
    throw DataError("svm model file: trained rbf model needs gamma > 0");
  }
  check_dual_coeffs(model.coeffs, model.support_rows, model.C);
  return model;
}

json forest_to_json(const Forest& forest) {
  json trees = json::array();
  for (const DecisionTree& tree : forest.trees) {
    json nodes = json::array();
    for (const DecisionTree::Node& node : tree.nodes) {
      json n;
      n["leaf"] = node.leaf;
      if (node.leaf) {
        n["counts"] = node.counts;
      } else {
        n["feature"] = node.feature;
        n["threshold"] = node.threshold;
        n["left"] = node.left;
        n["right"] = node.right;
      }
      nodes.push_back(std::move(n));
    }
    trees.push_back(std::move(nodes));
  }
  json j;
  j["model_type"] = "random_forest";
  j["num_classes"] = forest.num_classes;
  j["config"] = {{"n_trees", forest.config.n_trees},
                 {"max_depth", forest.config.max_depth},
                 {"min_samples_leaf", forest.config.min_samples_leaf},
                 {"seed", forest.config.seed}};
  j["trees"] = std::move(trees);
  return j;
}

Forest forest_from_json(const json& j) {
  expect_type(j, "random_forest");
  Forest forest;
  forest.num_classes = j.at("num_classes").get<int>();
  if (forest.num_classes < 1) throw DataError("forest model file: num_classes must be >= 1");
  const json& config = j.at("config");
  forest.config.n_trees = config.value("n_trees", forest.config.n_trees);
  forest.config.max_depth = config.value("max_depth", forest.config.max_depth);
  forest.config.min_samples_leaf =
      config.value("min_samples_leaf", forest.config.min_samples_leaf);
  forest.config.seed = config.value("seed", forest.config.seed);
  forest.config.validate();
  for (const json& nodes : j.at("trees")) {
    DecisionTree tree;
    const auto count = static_cast<int>(nodes.size());
    for (const json& n : nodes) {
      DecisionTree::Node node;
      node.leaf = n.at("leaf").get<bool>();
      if (node.leaf) {
        node.counts = n.at("counts").get<std::vector<long long>>();
        if (node.counts.size() != static_cast<std::size_t>(forest.num_classes)) {
          throw DataError("forest model file: leaf count vector has the wrong length");
        }
      } else {
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        const int id = static_cast<int>(tree.nodes.size());
        if (!std::isfinite(node.threshold)) {
          throw DataError("forest model file: non-finite split threshold");
        }
        if (node.feature < 0 || node.left <= id || node.right <= id || node.left >= count ||
            node.right >= count) {
          throw DataError("forest model file: malformed tree links");
        }
      }
      tree.nodes.push_back(std::move(node));
    }
    if (tree.nodes.empty()) throw DataError("forest model file: empty tree");
    forest.trees.push_back(std::move(tree));
  }
  if (forest.trees.empty()) throw DataError("forest model file: no trees");
  return forest;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write json file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open json file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError("invalid json in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace qnids
