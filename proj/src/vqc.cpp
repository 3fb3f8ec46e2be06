// SPDX-License-Identifier: Apache-2.0
#include "qnids/vqc.hpp"

#include <atomic>
#include <numbers>
#include <stdexcept>

#include "qnids/parallel.hpp"

namespace qnids {

namespace {

void check_labels(const std::vector<int>& y) {
  for (int label : y) {
    if (label != 1 && label != -1) {
      throw std::invalid_argument("vqc: labels must be +1 or -1");
    }
  }
}

// Per-sample circuits with only the ansatz parameters left free, plus the
// encoded initial states when the feature map is amplitude encoding.
struct VqcEngine {
  const VqcModel& model;
  const Executor& exec;
  AnsatzCircuit ansatz;
  std::uint64_t mask = 0;
  bool raw_encoding = false;
  std::vector<Circuit> sample_circuits;   // theta symbols free
  std::vector<StateVector> sample_states; // raw encoding only

  VqcEngine(const VqcModel& m, const Matrix& x, const Executor& e) : model(m), exec(e) {
    if (m.feature_map.num_qubits != m.ansatz.num_qubits) {
      throw std::invalid_argument("vqc: feature map and ansatz widths differ");
    }
    ansatz = build_ansatz(m.ansatz);
    const int n = m.ansatz.num_qubits;
    const std::string observable =
        m.observable.empty() ? std::string(static_cast<std::size_t>(n), 'Z') : m.observable;
    mask = z_mask_from_string(observable, n);
    raw_encoding = m.feature_map.kind == FeatureMapKind::RawFeatureVector;

    FeatureEncoder encoder(m.feature_map);
    sample_circuits.reserve(x.size());
    if (raw_encoding) {
      sample_states.reserve(x.size());
      for (const auto& row : x) {
        sample_states.push_back(encoder.encode(row));
        sample_circuits.push_back(ansatz.circuit);
      }
    } else {
      for (const auto& row : x) {
        sample_circuits.push_back(compose(encoder.bound_circuit(row), ansatz.circuit));
      }
    }
  }

  std::size_t size() const { return sample_circuits.size(); }

  std::map<std::string, double> binding(const std::vector<double>& theta) const {
    if (theta.size() != ansatz.num_params) {
      throw std::invalid_argument("vqc: parameter vector length does not match ansatz");
    }
    std::map<std::string, double> bound;
    for (std::size_t k = 0; k < theta.size(); ++k) bound[ansatz.param_names[k]] = theta[k];
    return bound;
  }

  double score_one(std::size_t s, const std::map<std::string, double>& bound,
                   std::uint64_t stream) const {
    const StateVector* initial = raw_encoding ? &sample_states[s] : nullptr;
    return exec.expectation_z(sample_circuits[s].bind(bound), mask, stream, initial);
  }

  // Scores for every sample at one parameter point; stream_base spreads the
  // sampling randomness across evaluation rounds.
  std::vector<double> scores(const std::vector<double>& theta, std::uint64_t stream_base) const {
    const auto bound = binding(theta);
    std::vector<double> values(size(), 0.0);
    parallel_for(size(), exec.mode().jobs,
                 [&](std::size_t s) { values[s] = score_one(s, bound, stream_base + s); });
    return values;
  }
};

}  // namespace

OptimizeResult vqc_fit(VqcModel& model, const Matrix& x, const std::vector<int>& y,
                       const Executor& exec) {
  if (x.size() != y.size()) throw std::invalid_argument("vqc_fit: X and y sizes differ");
  if (x.empty()) throw std::invalid_argument("vqc_fit: empty training set");
  check_labels(y);
  model.feature_map.validate();
  model.ansatz.validate();

  VqcEngine engine(model, x, exec);
  const std::size_t num_samples = engine.size();

  // Each objective or per-parameter shift evaluation consumes one round of
  // `num_samples` streams.
  std::atomic<std::uint64_t> round{0};
  auto scores_at = [&](const std::vector<double>& theta) {
    const std::uint64_t base = round.fetch_add(1) * num_samples;
    return engine.scores(theta, base);
  };
  auto loss_of = [&](const std::vector<double>& scores) {
    double loss = 0.0;
    for (std::size_t s = 0; s < scores.size(); ++s) {
      const double residual = scores[s] - y[s];
      loss += residual * residual;
    }
    return loss / static_cast<double>(scores.size());
  };
  ObjectiveFn objective = [&](const std::vector<double>& theta) {
    return loss_of(scores_at(theta));
  };
  // Chain rule through the squared loss; each score's gradient uses the
  // two-point parameter-shift rule.
  GradientFn gradient = [&](const std::vector<double>& theta) {
    std::vector<double> base_scores = scores_at(theta);
    std::vector<double> grad(theta.size(), 0.0);
    std::vector<double> shifted = theta;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      shifted[k] = theta[k] + std::numbers::pi / 2.0;
      std::vector<double> up = scores_at(shifted);
      shifted[k] = theta[k] - std::numbers::pi / 2.0;
      std::vector<double> down = scores_at(shifted);
      shifted[k] = theta[k];
      double g = 0.0;
      for (std::size_t s = 0; s < num_samples; ++s) {
        g += 2.0 * (base_scores[s] - y[s]) * (up[s] - down[s]) / 2.0;
      }
      grad[k] = g / static_cast<double>(num_samples);
    }
    return grad;
  };

  std::vector<double> theta0 = model.theta.size() == engine.ansatz.num_params
                                   ? model.theta
                                   : std::vector<double>(engine.ansatz.num_params, 0.0);
  OptimizeResult result = minimize(model.optimizer, objective, std::move(theta0), gradient);
  model.theta = result.theta;
  model.trained = true;
  return result;
}

std::vector<double> vqc_scores(const VqcModel& model, const Matrix& x, const Executor& exec) {
  if (!model.trained) throw std::logic_error("vqc_scores: model is not trained");
  VqcEngine engine(model, x, exec);
  return engine.scores(model.theta, 0);
}

std::vector<int> vqc_predict(const VqcModel& model, const Matrix& x, const Executor& exec) {
  std::vector<int> labels;
  for (double score : vqc_scores(model, x, exec)) {
    labels.push_back(score - model.threshold >= 0.0 ? 1 : -1);
  }
  return labels;
}

}  // namespace qnids
