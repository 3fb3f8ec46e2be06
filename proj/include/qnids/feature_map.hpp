// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qnids/circuit.hpp"
#include "qnids/entanglement.hpp"
#include "qnids/statevector.hpp"

namespace qnids {

enum class FeatureMapKind {
  RawFeatureVector,  // amplitude encoding: features become the state vector
  ZFeatureMap,       // H + single-qubit phases, no entanglement
  ZZFeatureMap,      // adds pairwise phase interactions
  PauliFeatureMap,   // user-chosen Pauli interaction strings
};

std::string feature_map_kind_name(FeatureMapKind kind);
FeatureMapKind feature_map_kind_from_name(const std::string& name);

struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::ZZFeatureMap;
  int num_qubits = 2;
  int reps = 2;
  Entanglement entanglement = Entanglement::Linear;
  // PauliFeatureMap only.  Supported strings: Z, ZZ, X, Y, XX, YY, ZZZ.
  std::vector<std::string> pauli_strings;

  void validate() const;
};

// Build the data-encoding circuit with free symbols x0..x(n-1).  Phase
// angles use 2*x_i for single-qubit terms and 2*(pi-x_i)*(pi-x_j) (and the
// three-factor analogue) for interaction terms; data is expected pre-scaled
// to [0, pi].  X/Y interaction strings conjugate the Z-basis term with H or
// RX(+-pi/2).  RawFeatureVector returns an empty marker circuit: it is
// realized by direct amplitude initialization (raw_feature_state), not
// gates.
Circuit build_feature_map(const FeatureMapSpec& spec);

// Amplitude encoding: L2-normalize `features`, zero-pad to 2^n.  Throws on
// an all-zero vector or more than 2^n features.
StateVector raw_feature_state(const std::vector<double>& features, int num_qubits);

// Number of data symbols the map consumes: n for the angle maps, up to 2^n
// for RawFeatureVector.
int feature_dimension(const FeatureMapSpec& spec);

// Convenience wrapper caching the built circuit: maps one sample to its
// encoded quantum state.
class FeatureEncoder {
 public:
  explicit FeatureEncoder(FeatureMapSpec spec);

  const FeatureMapSpec& spec() const { return spec_; }
  const Circuit& circuit() const { return circuit_; }

  // Bind x into the encoding circuit (angle maps; throws for raw encoding).
  Circuit bound_circuit(const std::vector<double>& x) const;

  // Full encoding: |phi(x)> as a dense state.
  StateVector encode(const std::vector<double>& x) const;

 private:
  FeatureMapSpec spec_;
  Circuit circuit_;
};

}  // namespace qnids
