// SPDX-License-Identifier: Apache-2.0
#include "qnids/feature_map.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace qnids {

namespace {

constexpr double kPi = std::numbers::pi;

ParamExpr data_symbol(int i) { return ParamExpr::symbol("x" + std::to_string(i)); }

// 2 * prod_i (pi - x_i): interaction phase angle for multi-qubit terms.
ParamExpr interaction_angle(const std::vector<int>& qubits) {
  ParamExpr angle = ParamExpr::constant(2.0);
  for (int q : qubits) angle = angle * (kPi - data_symbol(q));
  return angle;
}

// Diagonal phase e^{i*angle} on the joint parity of `qubits`, realized as a
// CX chain onto the last qubit, a Phase there, and the unchain.
void append_parity_phase(Circuit& c, const std::vector<int>& qubits, const ParamExpr& angle) {
  for (std::size_t k = 0; k + 1 < qubits.size(); ++k) c.cx(qubits[k], qubits[k + 1]);
  c.phase(qubits.back(), angle);
  for (std::size_t k = qubits.size() - 1; k-- > 0;) c.cx(qubits[k], qubits[k + 1]);
}

enum class Basis { Z, X, Y };

void open_basis(Circuit& c, const std::vector<int>& qubits, Basis basis) {
  for (int q : qubits) {
    if (basis == Basis::X) c.h(q);
    if (basis == Basis::Y) c.rx(q, kPi / 2);
  }
}

void close_basis(Circuit& c, const std::vector<int>& qubits, Basis basis) {
  for (int q : qubits) {
    if (basis == Basis::X) c.h(q);
    if (basis == Basis::Y) c.rx(q, -kPi / 2);
  }
}

// One data-interaction term for a Pauli string within a repetition.
void append_pauli_term(Circuit& c, const FeatureMapSpec& spec, const std::string& pauli) {
  const int n = spec.num_qubits;
  if (pauli == "Z" || pauli == "X" || pauli == "Y") {
    Basis basis = pauli == "Z" ? Basis::Z : (pauli == "X" ? Basis::X : Basis::Y);
    for (int q = 0; q < n; ++q) {
      open_basis(c, {q}, basis);
      c.phase(q, 2.0 * data_symbol(q));
      close_basis(c, {q}, basis);
    }
    return;
  }
  if (pauli == "ZZ" || pauli == "XX" || pauli == "YY") {
    Basis basis = pauli == "ZZ" ? Basis::Z : (pauli == "XX" ? Basis::X : Basis::Y);
    for (const auto& [i, j] : entanglement_pairs(n, spec.entanglement)) {
      std::vector<int> qubits{i, j};
      open_basis(c, qubits, basis);
      append_parity_phase(c, qubits, interaction_angle(qubits));
      close_basis(c, qubits, basis);
    }
    return;
  }
  if (pauli == "ZZZ") {
    for (const auto& [i, j, k] : entanglement_triples(n, spec.entanglement)) {
      std::vector<int> qubits{i, j, k};
      append_parity_phase(c, qubits, interaction_angle(qubits));
    }
    return;
  }
  throw std::invalid_argument("build_feature_map: unsupported Pauli string '" + pauli +
                              "' (supported: Z, ZZ, X, Y, XX, YY, ZZZ)");
}

}  // namespace

std::string feature_map_kind_name(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::RawFeatureVector:
      return "raw_feature_vector";
    case FeatureMapKind::ZFeatureMap:
      return "z_feature_map";
    case FeatureMapKind::ZZFeatureMap:
      return "zz_feature_map";
    case FeatureMapKind::PauliFeatureMap:
      return "pauli_feature_map";
  }
  throw std::logic_error("feature_map_kind_name: unknown value");
}

FeatureMapKind feature_map_kind_from_name(const std::string& name) {
  if (name == "raw_feature_vector") return FeatureMapKind::RawFeatureVector;
  if (name == "z_feature_map") return FeatureMapKind::ZFeatureMap;
  if (name == "zz_feature_map") return FeatureMapKind::ZZFeatureMap;
  if (name == "pauli_feature_map") return FeatureMapKind::PauliFeatureMap;
  throw std::invalid_argument("feature_map_kind_from_name: unknown kind '" + name + "'");
}

void FeatureMapSpec::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("FeatureMapSpec: num_qubits must be >= 1");
  if (reps < 1) throw std::invalid_argument("FeatureMapSpec: reps must be >= 1");
  if (kind == FeatureMapKind::PauliFeatureMap && pauli_strings.empty()) {
    throw std::invalid_argument("FeatureMapSpec: PauliFeatureMap needs at least one Pauli string");
  }
}

Circuit build_feature_map(const FeatureMapSpec& spec) {
  spec.validate();
  const int n = spec.num_qubits;
  Circuit c(n);
  switch (spec.kind) {
    case FeatureMapKind::RawFeatureVector:
      return c;  // marker circuit; realized via raw_feature_state
    case FeatureMapKind::ZFeatureMap:
      for (int r = 0; r < spec.reps; ++r) {
        for (int q = 0; q < n; ++q) c.h(q);
        for (int q = 0; q < n; ++q) c.phase(q, 2.0 * data_symbol(q));
      }
      return c;
    case FeatureMapKind::ZZFeatureMap:
      for (int r = 0; r < spec.reps; ++r) {
        for (int q = 0; q < n; ++q) c.h(q);
        for (int q = 0; q < n; ++q) c.phase(q, 2.0 * data_symbol(q));
        for (const auto& [i, j] : entanglement_pairs(n, spec.entanglement)) {
          std::vector<int> qubits{i, j};
          append_parity_phase(c, qubits, interaction_angle(qubits));
        }
      }
      return c;
    case FeatureMapKind::PauliFeatureMap:
      for (int r = 0; r < spec.reps; ++r) {
        for (int q = 0; q < n; ++q) c.h(q);
        for (const auto& pauli : spec.pauli_strings) append_pauli_term(c, spec, pauli);
      }
      return c;
  }
  throw std::logic_error("build_feature_map: unknown kind");
}

StateVector raw_feature_state(const std::vector<double>& features, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (features.size() > dim) {
    throw std::invalid_argument("raw_feature_state: " + std::to_string(features.size()) +
                                " features exceed 2^" + std::to_string(num_qubits) +
                                " amplitudes");
  }
  double norm_sq = 0.0;
  for (double v : features) norm_sq += v * v;
  if (norm_sq <= 0.0) {
    throw std::invalid_argument("raw_feature_state: feature vector has zero norm");
  }
  const double inv_norm = 1.0 / std::sqrt(norm_sq);
  std::vector<std::complex<double>> amps(dim, 0.0);
  for (std::size_t i = 0; i < features.size(); ++i) amps[i] = features[i] * inv_norm;
  return StateVector(num_qubits, std::move(amps));
}

int feature_dimension(const FeatureMapSpec& spec) {
  if (spec.kind == FeatureMapKind::RawFeatureVector) return 1 << spec.num_qubits;
  return spec.num_qubits;
}

FeatureEncoder::FeatureEncoder(FeatureMapSpec spec)
    : spec_(std::move(spec)), circuit_(build_feature_map(spec_)) {}

Circuit FeatureEncoder::bound_circuit(const std::vector<double>& x) const {
  if (spec_.kind == FeatureMapKind::RawFeatureVector) {
    throw std::logic_error(
        "FeatureEncoder: raw amplitude encoding has no bound circuit; use encode()");
  }
  if (static_cast<int>(x.size()) != spec_.num_qubits) {
    throw std::invalid_argument("FeatureEncoder: expected " + std::to_string(spec_.num_qubits) +
                                " features, got " + std::to_string(x.size()));
  }
  std::map<std::string, double> binding;
  for (std::size_t i = 0; i < x.size(); ++i) binding["x" + std::to_string(i)] = x[i];
  return circuit_.bind(binding);
}

StateVector FeatureEncoder::encode(const std::vector<double>& x) const {
  if (spec_.kind == FeatureMapKind::RawFeatureVector) {
    return raw_feature_state(x, spec_.num_qubits);
  }
  return evolve(bound_circuit(x));
}

}  // namespace qnids
