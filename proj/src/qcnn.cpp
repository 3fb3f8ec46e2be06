// SPDX-License-Identifier: Apache-2.0
#include "qnids/qcnn.hpp"

#include <atomic>
#include <numbers>
#include <stdexcept>

#include "qnids/parallel.hpp"
#include "qnids/statevector.hpp"

namespace qnids {

namespace {

constexpr int kMinQubits = 2;
constexpr int kMaxQubits = 12;

struct PlanBuilder {
  QcnnPlan plan;

  std::string fresh_instance(std::size_t shared_index) {
    const std::size_t instance = plan.num_instances++;
    plan.instances_of_shared[shared_index].push_back(instance);
    return "p" + std::to_string(instance);
  }

  std::size_t fresh_shared() {
    plan.instances_of_shared.emplace_back();
    return plan.num_params++;
  }

  void conv_pair(int i, int j, std::size_t a, std::size_t b, std::size_t c) {
    plan.circuit.ry(i, ParamExpr::symbol(fresh_instance(a)));
    plan.circuit.ry(j, ParamExpr::symbol(fresh_instance(a)));
    plan.circuit.cx(i, j);
    plan.circuit.ry(i, ParamExpr::symbol(fresh_instance(b)));
    plan.circuit.ry(j, ParamExpr::symbol(fresh_instance(c)));
  }
};

}  // namespace

std::map<std::string, double> QcnnPlan::binding(const std::vector<double>& theta) const {
  if (theta.size() != num_params) {
    throw std::invalid_argument("qcnn: parameter vector length does not match the plan");
  }
  std::map<std::string, double> bound;
  for (std::size_t shared = 0; shared < num_params; ++shared) {
    for (std::size_t instance : instances_of_shared[shared]) {
      bound["p" + std::to_string(instance)] = theta[shared];
    }
  }
  return bound;
}

QcnnPlan qcnn_build(int num_qubits) {
  if (num_qubits < kMinQubits || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qcnn: register width must be between 2 and 12 qubits");
  }
  PlanBuilder builder;
  builder.plan.circuit = Circuit(num_qubits);
  builder.plan.num_qubits = num_qubits;

  std::vector<int> active(static_cast<std::size_t>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) active[static_cast<std::size_t>(q)] = q;

  while (active.size() > 1) {
    // Convolution: pair neighbours on the active list, first (0,1),(2,3),...
    // then the offset pairing (1,2),(3,4),...; three angles shared by every
    // pair of the stage.
    const std::size_t a = builder.fresh_shared();
    const std::size_t b = builder.fresh_shared();
    const std::size_t c = builder.fresh_shared();
    for (std::size_t t = 0; t + 1 < active.size(); t += 2) {
      builder.conv_pair(active[t], active[t + 1], a, b, c);
    }
    for (std::size_t t = 1; t + 1 < active.size(); t += 2) {
      builder.conv_pair(active[t], active[t + 1], a, b, c);
    }

    // Pooling: fold each even-position qubit into its successor; an odd
    // leftover stays active untouched.
    const std::size_t p = builder.fresh_shared();
    std::vector<int> next;
    std::size_t t = 0;
    for (; t + 1 < active.size(); t += 2) {
      const int discard = active[t];
      const int keep = active[t + 1];
      builder.plan.circuit.cx(discard, keep);
      builder.plan.circuit.ry(keep, ParamExpr::symbol(builder.fresh_instance(p)));
      next.push_back(keep);
    }
    if (t < active.size()) next.push_back(active[t]);
    active = std::move(next);
  }

  builder.plan.readout_qubit = active.front();
  return builder.plan;
}

namespace {

void check_labels(const std::vector<int>& y) {
  for (int label : y) {
    if (label != 1 && label != -1) {
      throw std::invalid_argument("qcnn: labels must be +1 or -1");
    }
  }
}

// Per-sample circuits with the instance symbols left free, plus encoded
// initial states when the feature map is amplitude encoding.
struct QcnnEngine {
  const Executor& exec;
  QcnnPlan plan;
  std::uint64_t mask = 0;
  bool raw_encoding = false;
  std::vector<Circuit> sample_circuits;
  std::vector<StateVector> sample_states;

  QcnnEngine(const QcnnModel& model, const Matrix& x, const Executor& e) : exec(e) {
    plan = qcnn_build(model.feature_map.num_qubits);
    mask = std::uint64_t{1} << plan.readout_qubit;
    raw_encoding = model.feature_map.kind == FeatureMapKind::RawFeatureVector;

    FeatureEncoder encoder(model.feature_map);
    sample_circuits.reserve(x.size());
    if (raw_encoding) {
      sample_states.reserve(x.size());
      for (const auto& row : x) {
        sample_states.push_back(encoder.encode(row));
        sample_circuits.push_back(plan.circuit);
      }
    } else {
      for (const auto& row : x) {
        sample_circuits.push_back(compose(encoder.bound_circuit(row), plan.circuit));
      }
    }
  }

  std::size_t size() const { return sample_circuits.size(); }

  double score_one(std::size_t s, const std::map<std::string, double>& bound,
                   std::uint64_t stream) const {
    const StateVector* initial = raw_encoding ? &sample_states[s] : nullptr;
    return exec.expectation_z(sample_circuits[s].bind(bound), mask, stream, initial);
  }

  std::vector<double> scores_bound(const std::map<std::string, double>& bound,
                                   std::uint64_t stream_base) const {
    std::vector<double> values(size(), 0.0);
    parallel_for(size(), exec.mode().jobs,
                 [&](std::size_t s) { values[s] = score_one(s, bound, stream_base + s); });
    return values;
  }

  std::vector<double> scores(const std::vector<double>& theta, std::uint64_t stream_base) const {
    return scores_bound(plan.binding(theta), stream_base);
  }
};

}  // namespace

OptimizeResult qcnn_fit(QcnnModel& model, const Matrix& x, const std::vector<int>& y,
                        const Executor& exec) {
  if (x.size() != y.size()) throw std::invalid_argument("qcnn_fit: X and y sizes differ");
  if (x.empty()) throw std::invalid_argument("qcnn_fit: empty training set");
  check_labels(y);
  model.feature_map.validate();

  QcnnEngine engine(model, x, exec);
  const std::size_t num_samples = engine.size();

  std::atomic<std::uint64_t> round{0};
  auto next_base = [&]() { return round.fetch_add(1) * num_samples; };
  auto loss_of = [&](const std::vector<double>& scores) {
    double loss = 0.0;
    for (std::size_t s = 0; s < scores.size(); ++s) {
      const double residual = scores[s] - y[s];
      loss += residual * residual;
    }
    return loss / static_cast<double>(scores.size());
  };
  ObjectiveFn objective = [&](const std::vector<double>& theta) {
    return loss_of(engine.scores(theta, next_base()));
  };
  // A shared parameter's derivative sums the two-point shift rule applied to
  // each of its rotation instances, one instance at a time.
  GradientFn gradient = [&](const std::vector<double>& theta) {
    const auto bound = engine.plan.binding(theta);
    std::vector<double> base_scores = engine.scores_bound(bound, next_base());
    std::vector<double> grad(theta.size(), 0.0);
    for (std::size_t shared = 0; shared < theta.size(); ++shared) {
      double partial = 0.0;
      for (std::size_t instance : engine.plan.instances_of_shared[shared]) {
        const std::string name = "p" + std::to_string(instance);
        auto shifted = bound;
        shifted[name] = theta[shared] + std::numbers::pi / 2.0;
        std::vector<double> up = engine.scores_bound(shifted, next_base());
        shifted[name] = theta[shared] - std::numbers::pi / 2.0;
        std::vector<double> down = engine.scores_bound(shifted, next_base());
        for (std::size_t s = 0; s < num_samples; ++s) {
          partial += 2.0 * (base_scores[s] - y[s]) * (up[s] - down[s]) / 2.0;
        }
      }
      grad[shared] = partial / static_cast<double>(num_samples);
    }
    return grad;
  };

  std::vector<double> theta0 = model.theta.size() == engine.plan.num_params
                                   ? model.theta
                                   : std::vector<double>(engine.plan.num_params, 0.0);
  OptimizeResult result = minimize(model.optimizer, objective, std::move(theta0), gradient);
  model.theta = result.theta;
  model.trained = true;
  return result;
}

std::vector<double> qcnn_scores(const QcnnModel& model, const Matrix& x, const Executor& exec) {
  if (!model.trained) throw std::logic_error("qcnn_scores: model is not trained");
  QcnnEngine engine(model, x, exec);
  return engine.scores(model.theta, 0);
}

std::vector<int> qcnn_predict(const QcnnModel& model, const Matrix& x, const Executor& exec) {
  std::vector<int> labels;
  for (double score : qcnn_scores(model, x, exec)) {
    labels.push_back(score - model.threshold >= 0.0 ? 1 : -1);
  }
  return labels;
}

}  // namespace qnids
