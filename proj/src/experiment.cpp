// SPDX-License-Identifier: Apache-2.0
#include "qnids/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "qnids/coupling.hpp"
#include "qnids/errors.hpp"
#include "qnids/models_io.hpp"
#include "qnids/parallel.hpp"
#include "qnids/rng.hpp"
#include "qnids/transpiler.hpp"

namespace qnids {

namespace {

using nlohmann::json;

const std::set<std::string>& known_model_types() {
  static const std::set<std::string> types{"vqc", "qsvm", "qcnn", "rf", "svm"};
  return types;
}

bool is_quantum_type(const std::string& type) {
  return type == "vqc" || type == "qsvm" || type == "qcnn";
}

void check_observable(const std::string& observable, int num_qubits) {
  if (observable.empty()) return;
  if (observable.size() != static_cast<std::size_t>(num_qubits)) {
    throw std::invalid_argument("observable length != qubit count");
  }
  for (char c : observable) {
    if (c != 'I' && c != 'Z') {
      throw std::invalid_argument("observable may contain only 'I' and 'Z'");
    }
  }
}

}  // namespace

void ModelSpec::validate() const {
  if (id.empty()) throw std::invalid_argument("model spec: empty id");
  if (!known_model_types().count(type)) {
    throw std::invalid_argument("model spec '" + id + "': unknown type '" + type + "'");
  }
  if (is_quantum_type(type)) feature_map.validate();
  if (type == "vqc") {
    ansatz.validate();
    if (ansatz.num_qubits != feature_map.num_qubits) {
      throw std::invalid_argument("model spec '" + id +
                                  "': feature map and ansatz widths differ");
    }
    check_observable(observable, ansatz.num_qubits);
  }
  if (type == "vqc" || type == "qcnn") optimizer.validate();
  if (type == "qsvm" || type == "svm") {
    if (C <= 0.0) throw std::invalid_argument("model spec '" + id + "': C must be positive");
  }
  if (type == "svm") {
    if (svm_kernel != "rbf" && svm_kernel != "linear") {
      throw std::invalid_argument("model spec '" + id + "': unknown kernel '" + svm_kernel +
                                  "'");
    }
  }
  if (type == "rf") forest.validate();
}

ModelSpec model_spec_from_json(const json& j, int default_num_qubits) {
  ModelSpec spec;
  spec.type = j.at("type").get<std::string>();
  spec.id = j.value("id", spec.type);

  if (is_quantum_type(spec.type)) {
    json fm = j.value("feature_map", json::object());
    if (!fm.contains("kind")) fm["kind"] = "zz_feature_map";
    if (!fm.contains("num_qubits")) fm["num_qubits"] = default_num_qubits;
    spec.feature_map = feature_map_spec_from_json(fm);
  }
  if (spec.type == "vqc") {
    json an = j.value("ansatz", json::object());
    if (!an.contains("kind")) an["kind"] = "real_amplitudes";
    if (!an.contains("num_qubits")) an["num_qubits"] = spec.feature_map.num_qubits;
    spec.ansatz = ansatz_spec_from_json(an);
    spec.observable = j.value("observable", std::string());
  }
  if (spec.type == "vqc" || spec.type == "qcnn") {
    if (j.contains("optimizer")) {
      spec.optimizer = optimizer_config_from_json(j.at("optimizer"));
    }
    spec.threshold = j.value("threshold", 0.0);
  }
  if (spec.type == "qsvm" || spec.type == "svm") spec.C = j.value("C", 1.0);
  if (spec.type == "svm") {
    spec.svm_kernel = j.value("kernel", std::string("rbf"));
    spec.gamma = j.value("gamma", 0.0);
  }
  if (spec.type == "rf") {
    const json f = j.value("forest", json::object());
    spec.forest.n_trees = f.value("n_trees", spec.forest.n_trees);
    spec.forest.max_depth = f.value("max_depth", spec.forest.max_depth);
    spec.forest.min_samples_leaf = f.value("min_samples_leaf", spec.forest.min_samples_leaf);
  }
  spec.validate();
  return spec;
}

json model_spec_to_json(const ModelSpec& spec) {
  json j;
  j["id"] = spec.id;
  j["type"] = spec.type;
  if (is_quantum_type(spec.type)) j["feature_map"] = feature_map_spec_to_json(spec.feature_map);
  if (spec.type == "vqc") {
    j["ansatz"] = ansatz_spec_to_json(spec.ansatz);
    j["observable"] = spec.observable;
  }
  if (spec.type == "vqc" || spec.type == "qcnn") {
    j["optimizer"] = optimizer_config_to_json(spec.optimizer);
    j["threshold"] = spec.threshold;
  }
  if (spec.type == "qsvm" || spec.type == "svm") j["C"] = spec.C;
  if (spec.type == "svm") {
    j["kernel"] = spec.svm_kernel;
    j["gamma"] = spec.gamma;
  }
  if (spec.type == "rf") {
    j["forest"] = {{"n_trees", spec.forest.n_trees},
                   {"max_depth", spec.forest.max_depth},
                   {"min_samples_leaf", spec.forest.min_samples_leaf}};
  }
  return j;
}

std::vector<int> BinaryMapping::to_pm(const std::vector<int>& y) const {
  std::vector<int> pm(y.size(), -1);
  const std::set<int> positive(positive_ids.begin(), positive_ids.end());
  for (std::size_t s = 0; s < y.size(); ++s) pm[s] = positive.count(y[s]) ? 1 : -1;
  return pm;
}

BinaryMapping binary_mapping(const Dataset& ds, const std::vector<std::string>& positive_classes) {
  if (ds.class_names.size() < 2) {
    throw DataError("binary mapping needs at least two classes");
  }
  BinaryMapping mapping;
  if (!positive_classes.empty()) {
    std::set<int> positives;
    for (const std::string& name : positive_classes) {
      const auto it = std::find(ds.class_names.begin(), ds.class_names.end(), name);
      if (it == ds.class_names.end()) {
        throw DataError("positive class '" + name + "' is not a dataset class");
      }
      positives.insert(static_cast<int>(it - ds.class_names.begin()));
    }
    if (positives.size() >= ds.class_names.size()) {
      throw DataError("every class is marked positive; nothing is left as benign");
    }
    mapping.positive_ids.assign(positives.begin(), positives.end());
  } else {
    const auto benign = std::find(ds.class_names.begin(), ds.class_names.end(), "benign");
    const int benign_id =
        benign == ds.class_names.end() ? 0 : static_cast<int>(benign - ds.class_names.begin());
    for (int cls = 0; cls < static_cast<int>(ds.class_names.size()); ++cls) {
      if (cls != benign_id) mapping.positive_ids.push_back(cls);
    }
  }
  std::vector<int> negative_ids;
  const std::set<int> positive(mapping.positive_ids.begin(), mapping.positive_ids.end());
  for (int cls = 0; cls < static_cast<int>(ds.class_names.size()); ++cls) {
    if (!positive.count(cls)) negative_ids.push_back(cls);
  }
  if (negative_ids.size() == 1) {
    mapping.negative_name = ds.class_names[static_cast<std::size_t>(negative_ids.front())];
  }
  if (mapping.positive_ids.size() == 1) {
    mapping.positive_name = ds.class_names[static_cast<std::size_t>(mapping.positive_ids.front())];
  }
  return mapping;
}

json trained_model_to_json(const TrainedModel& model) {
  json j;
  j["spec"] = model_spec_to_json(model.spec);
  j["mode"] = model.mode;
  j["classes"] = model.classes;
  j["class_names"] = model.class_names;
  j["mapping"] = {{"positive_ids", model.mapping.positive_ids},
                  {"negative_name", model.mapping.negative_name},
                  {"positive_name", model.mapping.positive_name}};
  json subs = json::array();
  for (const auto& m : model.vqc) subs.push_back(vqc_to_json(m));
  for (const auto& m : model.qsvm) subs.push_back(qsvm_to_json(m));
  for (const auto& m : model.qcnn) subs.push_back(qcnn_to_json(m));
  for (const auto& m : model.svm) subs.push_back(classical_svm_to_json(m));
  j["sub_models"] = std::move(subs);
  if (model.forest) j["forest"] = forest_to_json(*model.forest);
  return j;
}

TrainedModel trained_model_from_json(const json& j) {
  TrainedModel model;
  // Re-parse the spec with the stored widths; no defaults needed.
  model.spec = model_spec_from_json(j.at("spec"), 0);
  model.mode = j.value("mode", std::string("binary"));
  if (model.mode != "binary" && model.mode != "multiclass") {
    throw DataError("trained model file: unknown mode '" + model.mode + "'");
  }
  model.classes = j.value("classes", std::vector<int>());
  model.class_names = j.value("class_names", std::vector<std::string>());
  if (j.contains("mapping")) {
    const json& m = j.at("mapping");
    model.mapping.positive_ids = m.value("positive_ids", std::vector<int>());
    model.mapping.negative_name = m.value("negative_name", std::string("benign"));
    model.mapping.positive_name = m.value("positive_name", std::string("attack"));
  }

  const json subs = j.value("sub_models", json::array());
  for (const json& sub : subs) {
    if (model.spec.type == "vqc") model.vqc.push_back(vqc_from_json(sub));
    if (model.spec.type == "qsvm") model.qsvm.push_back(qsvm_from_json(sub));
    if (model.spec.type == "qcnn") model.qcnn.push_back(qcnn_from_json(sub));
    if (model.spec.type == "svm") model.svm.push_back(classical_svm_from_json(sub));
  }
  if (j.contains("forest")) model.forest = forest_from_json(j.at("forest"));

  const std::size_t subs_count =
      model.vqc.size() + model.qsvm.size() + model.qcnn.size() + model.svm.size();
  if (model.spec.type == "rf") {
    if (!model.forest) throw DataError("trained model file: rf model without forest");
  } else if (model.mode == "binary") {
    if (subs_count != 1) throw DataError("trained model file: binary model needs 1 sub-model");
  } else {
    if (model.classes.size() < 2 || model.classes.size() != model.class_names.size() ||
        subs_count != model.classes.size()) {
      throw DataError("trained model file: one-vs-rest shape mismatch");
    }
  }
  return model;
}

json model_report_to_json(const ModelReport& report) {
  json j;
  j["model_id"] = report.model_id;
  j["model_type"] = report.model_type;
  j["dataset"] = report.dataset;
  j["mode"] = report.mode;
  j["wall_clock_ms"] = report.wall_clock_ms;
  if (report.failed()) {
    j["error"] = report.error;
    return j;
  }
  j["macro_f1"] = report.metrics.macro_f1;
  j["accuracy"] = report.metrics.accuracy;
  j["total"] = report.metrics.total;
  json per_class = json::array();
  for (const ClassMetrics& m : report.metrics.per_class) {
    per_class.push_back({{"class_id", m.class_id},
                         {"class_name", m.class_name},
                         {"support", m.support},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1}});
  }
  j["per_class"] = std::move(per_class);
  j["confusion"] = report.metrics.confusion;
  j["alert_count"] = report.alerts.size();
  return j;
}

void ExperimentConfig::validate() const {
  preprocess.validate();
  eval.validate();
  if (mode != "auto" && mode != "binary" && mode != "multiclass") {
    throw std::invalid_argument("experiment: unknown mode '" + mode + "'");
  }
  std::set<std::string> ids;
  for (const ModelSpec& spec : models) {
    spec.validate();
    if (!ids.insert(spec.id).second) {
      throw std::invalid_argument("experiment: duplicate model id '" + spec.id + "'");
    }
  }
  if (generate) generate->validate();
}

namespace {

NoiseParams noise_params_from_json(const json& j) {
  NoiseParams params;
  params.p1 = j.value("p1", 0.0);
  params.p2 = j.value("p2", 0.0);
  params.readout_p10 = j.value("readout_p10", 0.0);
  params.readout_p01 = j.value("readout_p01", 0.0);
  params.p_idle = j.value("p_idle", 0.0);
  return params;
}

bool params_are_ideal(const NoiseParams& p) {
  return p.p1 == 0.0 && p.p2 == 0.0 && p.readout_p10 == 0.0 && p.readout_p01 == 0.0 &&
         p.p_idle == 0.0;
}

}  // namespace

ExperimentConfig experiment_config_from_json(
    const json& j, const std::map<std::string, NoiseParams>& noise_presets) {
  ExperimentConfig cfg;
  const json ds = j.value("dataset", json::object());
  cfg.dataset_path = ds.value("path", std::string());
  cfg.dataset_name = ds.value("name", std::string());
  cfg.preprocess.label_column = ds.value("label_column", cfg.preprocess.label_column);
  cfg.preprocess.positive_classes =
      ds.value("positive_classes", cfg.preprocess.positive_classes);
  cfg.preprocess.categorical_columns =
      ds.value("categorical_columns", cfg.preprocess.categorical_columns);
  if (ds.contains("generate")) {
    const json& g = ds.at("generate");
    SyntheticConfig synth;
    synth.kind = synthetic_kind_from_name(g.at("kind").get<std::string>());
    synth.n_per_class = g.value("n_per_class", synth.n_per_class);
    synth.dim = g.value("dim", synth.dim);
    synth.num_classes = g.value("num_classes", synth.num_classes);
    cfg.generate = synth;
  }

  const json pp = j.value("preprocess", json::object());
  if (pp.contains("reducer")) {
    cfg.preprocess.reducer = reducer_from_name(pp.at("reducer").get<std::string>());
  }
  cfg.preprocess.target_dim = pp.value("target_dim", cfg.preprocess.target_dim);
  if (pp.contains("balance")) {
    cfg.preprocess.balance = balance_from_name(pp.at("balance").get<std::string>());
  }
  cfg.preprocess.split = pp.value("split", cfg.preprocess.split);

  const json ev = j.value("eval", json::object());
  if (ev.contains("exec")) {
    cfg.eval.exec = exec_mode_from_name(ev.at("exec").get<std::string>());
  }
  cfg.eval.shots = ev.value("shots", cfg.eval.shots);
  cfg.eval.resilience_level = ev.value("resilience_level", cfg.eval.resilience_level);
  cfg.eval.calibration_shots = ev.value("calibration_shots", cfg.eval.calibration_shots);
  cfg.eval.jobs = ev.value("jobs", cfg.eval.jobs);
  if (ev.contains("noise")) {
    NoiseParams params;
    if (ev.at("noise").is_string()) {
      const std::string name = ev.at("noise").get<std::string>();
      const auto it = noise_presets.find(name);
      if (it == noise_presets.end() && name != "ideal") {
        throw DataError("unknown noise preset '" + name + "'");
      }
      if (it != noise_presets.end()) params = it->second;
    } else {
      params = noise_params_from_json(ev.at("noise"));
    }
    if (!params_are_ideal(params)) {
      cfg.eval.noise = NoiseModel::from_params(params, cfg.preprocess.target_dim);
    }
  }
  if (ev.contains("optimization_level") || ev.contains("dynamic_decoupling") ||
      ev.contains("coupling")) {
    TranspileConfig tc;
    tc.optimization_level = ev.value("optimization_level", 1);
    tc.dynamic_decoupling = ev.value("dynamic_decoupling", 0);
    tc.resilience_level = cfg.eval.resilience_level;
    if (ev.contains("coupling")) {
      const json& c = ev.at("coupling");
      const auto n = static_cast<std::size_t>(cfg.preprocess.target_dim);
      if (c.is_string()) {
        const std::string kind = c.get<std::string>();
        if (kind == "line") {
          tc.coupling = CouplingGraph::line(n);
        } else if (kind == "ring") {
          tc.coupling = CouplingGraph::ring(n);
        } else if (kind == "complete") {
          tc.coupling = CouplingGraph::complete(n);
        } else {
          throw DataError("unknown coupling '" + kind + "' (use line|ring|complete)");
        }
      } else {
        tc.coupling = CouplingGraph::from_file(c.at("file").get<std::string>());
      }
    }
    cfg.eval.transpile = std::move(tc);
  }

  cfg.mode = j.value("mode", cfg.mode);
  cfg.seed = j.value("seed", cfg.seed);
  for (const json& m : j.value("models", json::array())) {
    cfg.models.push_back(model_spec_from_json(m, cfg.preprocess.target_dim));
  }
  apply_master_seed(cfg);
  cfg.validate();
  return cfg;
}

void apply_master_seed(ExperimentConfig& config) {
  if (config.generate) config.generate->seed = Rng::derive(config.seed, 0x5EED0);
  config.preprocess.seed = Rng::derive(config.seed, 0x5EED1);
  config.eval.seed = Rng::derive(config.seed, 0x5EED2);
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    config.models[i].optimizer.seed = Rng::derive(config.seed, 0x100 + i);
    config.models[i].forest.seed = Rng::derive(config.seed, 0x200 + i);
  }
}

std::string resolve_mode(const ExperimentConfig& config, const Dataset& train) {
  if (config.mode != "auto") return config.mode;
  if (!config.preprocess.positive_classes.empty()) return "binary";
  return train.present_classes().size() <= 2 ? "binary" : "multiclass";
}

namespace {

std::vector<int> pm_to_01(const std::vector<int>& pm) {
  std::vector<int> out(pm.size(), 0);
  for (std::size_t s = 0; s < pm.size(); ++s) out[s] = pm[s] == 1 ? 1 : 0;
  return out;
}

// Fit one +-1 sub-model of the spec's family and append it to the bundle.
void fit_binary_member(TrainedModel& out, const Dataset& train, const std::vector<int>& pm,
                       const Executor& exec, std::uint64_t seed_stream) {
  const ModelSpec& spec = out.spec;
  if (spec.type == "vqc") {
    VqcModel m;
    m.feature_map = spec.feature_map;
    m.ansatz = spec.ansatz;
    m.observable = spec.observable;
    m.optimizer = spec.optimizer;
    m.optimizer.seed = Rng::derive(spec.optimizer.seed, seed_stream);
    m.threshold = spec.threshold;
    out.traces.push_back(vqc_fit(m, train.x, pm, exec));
    out.vqc.push_back(std::move(m));
  } else if (spec.type == "qsvm") {
    QsvmModel m;
    m.feature_map = spec.feature_map;
    m.C = spec.C;
    qsvm_fit(m, train.x, pm, exec);
    out.qsvm.push_back(std::move(m));
  } else if (spec.type == "qcnn") {
    QcnnModel m;
    m.feature_map = spec.feature_map;
    m.optimizer = spec.optimizer;
    m.optimizer.seed = Rng::derive(spec.optimizer.seed, seed_stream);
    m.threshold = spec.threshold;
    out.traces.push_back(qcnn_fit(m, train.x, pm, exec));
    out.qcnn.push_back(std::move(m));
  } else if (spec.type == "svm") {
    ClassicalSvmModel m;
    m.kernel = spec.svm_kernel;
    m.C = spec.C;
    m.gamma = spec.gamma;
    classical_svm_fit(m, train.x, pm);
    out.svm.push_back(std::move(m));
  } else {
    throw std::logic_error("fit_binary_member: not a binary-capable family");
  }
}

// Raw scores of sub-model `k` of the bundle over the rows of `x`.
std::vector<double> member_scores(const TrainedModel& model, std::size_t k, const Matrix& x,
                                  const Executor& exec) {
  const ModelSpec& spec = model.spec;
  if (spec.type == "vqc") return vqc_scores(model.vqc[k], x, exec);
  if (spec.type == "qsvm") return qsvm_scores(model.qsvm[k], x, exec);
  if (spec.type == "qcnn") return qcnn_scores(model.qcnn[k], x, exec);
  if (spec.type == "svm") return classical_svm_scores(model.svm[k], x);
  throw std::logic_error("member_scores: not a score-based family");
}

// Binary label rule of the family: expectation models compare against the
// threshold, margin models against zero.  Ties resolve to +1.
int member_label(const ModelSpec& spec, double score) {
  const double threshold =
      spec.type == "vqc" || spec.type == "qcnn" ? spec.threshold : 0.0;
  return score - threshold >= 0.0 ? 1 : -1;
}

}  // namespace

TrainedModel train_model(const ModelSpec& spec, const Dataset& train, const std::string& mode,
                         const BinaryMapping& mapping, const Executor& exec) {
  spec.validate();
  train.check_consistent();
  TrainedModel out;
  out.spec = spec;
  out.mode = mode;
  out.mapping = mapping;

  if (mode == "binary") {
    const std::vector<int> pm = mapping.to_pm(train.y);
    if (spec.type == "rf") {
      out.classes = {0, 1};
      out.class_names = {mapping.negative_name, mapping.positive_name};
      out.forest = rf_fit(train.x, pm_to_01(pm), spec.forest);
    } else {
      fit_binary_member(out, train, pm, exec, 0);
    }
    return out;
  }

  // One-vs-rest: one sub-model per present class, lowest id first.
  out.classes = train.present_classes();
  if (out.classes.size() < 2) {
    throw DataError("multiclass training needs at least two classes present");
  }
  for (int cls : out.classes) {
    out.class_names.push_back(train.class_names[static_cast<std::size_t>(cls)]);
  }
  if (spec.type == "rf") {
    // Forest class k = index into out.classes.
    std::vector<int> remapped(train.y.size(), 0);
    for (std::size_t s = 0; s < train.y.size(); ++s) {
      const auto it = std::find(out.classes.begin(), out.classes.end(), train.y[s]);
      remapped[s] = static_cast<int>(it - out.classes.begin());
    }
    out.forest = rf_fit(train.x, remapped, spec.forest);
    return out;
  }
  for (std::size_t k = 0; k < out.classes.size(); ++k) {
    std::vector<int> pm(train.y.size(), -1);
    for (std::size_t s = 0; s < train.y.size(); ++s) {
      pm[s] = train.y[s] == out.classes[k] ? 1 : -1;
    }
    fit_binary_member(out, train, pm, exec, k);
  }
  return out;
}

ModelReport evaluate_model(const TrainedModel& model, const Dataset& test, const Executor& exec) {
  const auto start = std::chrono::steady_clock::now();
  test.check_consistent();
  ModelReport report;
  report.model_id = model.spec.id;
  report.model_type = model.spec.type;
  report.dataset = test.source;
  report.mode = model.mode;

  if (model.mode == "binary") {
    const std::vector<int> truth01 = pm_to_01(model.mapping.to_pm(test.y));
    std::vector<int> pred01(test.size(), 0);
    std::vector<double> attack_score(test.size(), 0.0);
    if (model.spec.type == "rf") {
      const Matrix shares = rf_vote_shares(*model.forest, test.x);
      const std::vector<int> votes = rf_predict(*model.forest, test.x);
      for (std::size_t s = 0; s < test.size(); ++s) {
        pred01[s] = votes[s];
        attack_score[s] = shares[s][1];
      }
    } else {
      const std::vector<double> scores = member_scores(model, 0, test.x, exec);
      for (std::size_t s = 0; s < test.size(); ++s) {
        pred01[s] = member_label(model.spec, scores[s]) == 1 ? 1 : 0;
        attack_score[s] = scores[s];
      }
    }
    report.metrics = compute_metrics(truth01, pred01, {0, 1},
                                     {model.mapping.negative_name, model.mapping.positive_name});
    for (std::size_t s = 0; s < test.size(); ++s) {
      if (pred01[s] == 1) {
        report.alerts.push_back({s, model.mapping.positive_name, attack_score[s]});
      }
    }
  } else {
    const std::size_t num_classes = model.classes.size();
    Matrix scores(test.size(), std::vector<double>(num_classes, 0.0));
    if (model.spec.type == "rf") {
      const Matrix shares = rf_vote_shares(*model.forest, test.x);
      for (std::size_t s = 0; s < test.size(); ++s) {
        for (std::size_t k = 0; k < num_classes; ++k) scores[s][k] = shares[s][k];
      }
    } else {
      for (std::size_t k = 0; k < num_classes; ++k) {
        const std::vector<double> column = member_scores(model, k, test.x, exec);
        for (std::size_t s = 0; s < test.size(); ++s) scores[s][k] = column[s];
      }
    }
    std::vector<int> predicted(test.size(), 0);
    std::vector<double> winning(test.size(), 0.0);
    for (std::size_t s = 0; s < test.size(); ++s) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < num_classes; ++k) {
        if (scores[s][k] > scores[s][best]) best = k;
      }
      predicted[s] = model.classes[best];
      winning[s] = scores[s][best];
    }
    report.metrics = compute_metrics(test.y, predicted, model.classes, model.class_names);

    const auto benign_it =
        std::find(model.class_names.begin(), model.class_names.end(), "benign");
    const int benign_id = benign_it == model.class_names.end()
                              ? model.classes.front()
                              : model.classes[static_cast<std::size_t>(
                                    benign_it - model.class_names.begin())];
    for (std::size_t s = 0; s < test.size(); ++s) {
      if (predicted[s] != benign_id) {
        const auto k = static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), predicted[s]) -
            model.classes.begin());
        report.alerts.push_back({s, model.class_names[k], winning[s]});
      }
    }
  }

  const auto elapsed = std::chrono::steady_clock::now() - start;
  report.wall_clock_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
  return report;
}

ExperimentResult run_experiment(const Dataset& train, const Dataset& test,
                                const ExperimentConfig& config) {
  config.validate();
  train.check_consistent();
  test.check_consistent();
  const std::string mode = resolve_mode(config, train);
  BinaryMapping mapping;
  if (mode == "binary") mapping = binary_mapping(train, config.preprocess.positive_classes);

  ExperimentResult result;
  result.models.resize(config.models.size());
  result.reports.resize(config.models.size());

  // The grid runs in parallel; leftover worker budget goes to each entry's
  // internal evaluation loops.
  const int total_jobs = std::max(1, config.eval.jobs);
  const int grid_jobs = std::min<int>(total_jobs, static_cast<int>(config.models.size()));
  EvalMode inner_mode = config.eval;
  inner_mode.jobs = std::max(1, total_jobs / std::max(1, grid_jobs));
  const Executor exec(inner_mode);

  parallel_for(config.models.size(), grid_jobs, [&](std::size_t m) {
    const auto start = std::chrono::steady_clock::now();
    try {
      TrainedModel trained = train_model(config.models[m], train, mode, mapping, exec);
      ModelReport report = evaluate_model(trained, test, exec);
      const auto elapsed = std::chrono::steady_clock::now() - start;
      report.wall_clock_ms =
          std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed)
              .count();
      result.models[m] = std::move(trained);
      result.reports[m] = std::move(report);
    } catch (const std::exception& e) {
      ModelReport failed;
      failed.model_id = config.models[m].id;
      failed.model_type = config.models[m].type;
      failed.dataset = test.source;
      failed.mode = mode;
      failed.error = e.what();
      result.reports[m] = std::move(failed);
    }
  });
  return result;
}

std::string config_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string defaults_hash() {
  json defaults;
  defaults["preprocess"] = {{"reducer", reducer_name(PreprocessConfig{}.reducer)},
                            {"target_dim", PreprocessConfig{}.target_dim},
                            {"balance", balance_name(PreprocessConfig{}.balance)},
                            {"split", PreprocessConfig{}.split}};
  defaults["optimizer"] = optimizer_config_to_json(OptimizerConfig{});
  defaults["forest"] = {{"n_trees", ForestConfig{}.n_trees},
                        {"max_depth", ForestConfig{}.max_depth},
                        {"min_samples_leaf", ForestConfig{}.min_samples_leaf}};
  defaults["eval"] = {{"shots", EvalMode{}.shots},
                      {"calibration_shots", EvalMode{}.calibration_shots},
                      {"resilience_level", EvalMode{}.resilience_level}};
  defaults["svm"] = {{"C", 1.0}};
  return config_hash(defaults);
}

}  // namespace qnids
