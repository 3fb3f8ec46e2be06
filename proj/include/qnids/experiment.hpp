// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: a model grid trained on a prepared train split
// and scored on the test split, producing per-model metric reports and an
// alert stream.  Binary runs collapse labels to {-1 benign, +1 attack};
// multiclass runs wrap each binary family one-vs-rest.  Every stochastic
// stage derives its seed from the experiment master seed, so a full run is
// reproducible from one number.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnids/baselines.hpp"
#include "qnids/dataset.hpp"
#include "qnids/executor.hpp"
#include "qnids/metrics.hpp"
#include "qnids/qcnn.hpp"
#include "qnids/qsvm.hpp"
#include "qnids/synthetic.hpp"
#include "qnids/vqc.hpp"

namespace qnids {

// One entry of the model grid.  `type` selects the family; the other fields
// that apply to it are read, the rest ignored.
struct ModelSpec {
  std::string id;    // unique row name in reports
  std::string type;  // "vqc" | "qsvm" | "qcnn" | "rf" | "svm"
  FeatureMapSpec feature_map;  // quantum families
  AnsatzSpec ansatz;           // vqc
  OptimizerConfig optimizer;   // vqc, qcnn
  std::string observable;      // vqc; empty = all-Z
  double threshold = 0.0;      // vqc, qcnn decision threshold
  double C = 1.0;              // svm families
  std::string svm_kernel = "rbf";  // classical svm: "rbf" | "linear"
  double gamma = 0.0;              // classical rbf; <= 0 selects 1/d
  ForestConfig forest;             // rf

  void validate() const;
};

ModelSpec model_spec_from_json(const nlohmann::json& j, int default_num_qubits);
nlohmann::json model_spec_to_json(const ModelSpec& spec);

// How labels collapse for a binary run.
struct BinaryMapping {
  std::vector<int> positive_ids;  // dataset class ids counted as attack
  std::string negative_name = "benign";
  std::string positive_name = "attack";

  std::vector<int> to_pm(const std::vector<int>& y) const;  // -1 / +1
};

// Resolve the attack side: explicitly named positive classes if given, else
// everything but the class named "benign", else everything but the lowest
// id.
BinaryMapping binary_mapping(const Dataset& ds, const std::vector<std::string>& positive_classes);

// A fitted grid entry: one binary sub-model, or one per class
// (one-vs-rest), or a forest.
struct TrainedModel {
  ModelSpec spec;
  std::string mode;         // "binary" | "multiclass"
  std::vector<int> classes;  // multiclass: class ids aligned with sub-models
  std::vector<std::string> class_names;  // aligned with `classes`
  BinaryMapping mapping;     // binary runs
  std::vector<VqcModel> vqc;
  std::vector<QsvmModel> qsvm;
  std::vector<QcnnModel> qcnn;
  std::vector<ClassicalSvmModel> svm;
  std::optional<Forest> forest;
  std::vector<OptimizeResult> traces;  // vqc/qcnn fits, aligned with sub-models
};

nlohmann::json trained_model_to_json(const TrainedModel& model);
TrainedModel trained_model_from_json(const nlohmann::json& j);

struct AlertRecord {
  std::size_t row_index = 0;  // position in the evaluated split
  std::string predicted_class;
  double score = 0.0;
};

struct ModelReport {
  std::string model_id;
  std::string model_type;
  std::string dataset;
  std::string mode;
  MetricsSummary metrics;
  std::vector<AlertRecord> alerts;
  double wall_clock_ms = 0.0;
  std::string error;  // non-empty = model failed; metrics are absent

  bool failed() const { return !error.empty(); }
};

nlohmann::json model_report_to_json(const ModelReport& report);

// Experiment-wide settings parsed from the config file.
struct ExperimentConfig {
  std::string dataset_path;
  std::optional<SyntheticConfig> generate;  // synth verb fills dataset_path
  std::string dataset_name;                 // report column label
  PreprocessConfig preprocess;
  EvalMode eval;
  std::string mode = "auto";  // "auto" | "binary" | "multiclass"
  std::vector<ModelSpec> models;
  std::uint64_t seed = 13;  // master seed; stages derive from it

  void validate() const;
};

// Parse a config json; `noise_presets` resolves an "eval.noise" preset name.
ExperimentConfig experiment_config_from_json(
    const nlohmann::json& j, const std::map<std::string, NoiseParams>& noise_presets);

// Re-derive every stage seed from the master seed (split, executor,
// optimizers, forests).
void apply_master_seed(ExperimentConfig& config);

// Resolve "auto" against the train split.
std::string resolve_mode(const ExperimentConfig& config, const Dataset& train);

TrainedModel train_model(const ModelSpec& spec, const Dataset& train, const std::string& mode,
                         const BinaryMapping& mapping, const Executor& exec);

ModelReport evaluate_model(const TrainedModel& model, const Dataset& test, const Executor& exec);

struct ExperimentResult {
  std::vector<TrainedModel> models;   // empty slot when the model failed
  std::vector<ModelReport> reports;   // one per grid entry, failures included
};

// Train and evaluate the whole grid; a single model's failure is recorded
// in its report and the rest continue.
ExperimentResult run_experiment(const Dataset& train, const Dataset& test,
                                const ExperimentConfig& config);

// FNV-1a 64-bit over the canonical dump, as fixed-width hex.
std::string config_hash(const nlohmann::json& j);

// Hash of all built-in defaults (optimizer, forest, preprocess, execution),
// recorded in manifests so default drift shows up.
std::string defaults_hash();

}  // namespace qnids
