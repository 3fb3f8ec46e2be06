// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qnids/circuit.hpp"
#include "qnids/entanglement.hpp"

namespace qnids {

enum class AnsatzKind {
  RealAmplitudes,          // RY layers + CX entanglers (real-valued states)
  EfficientSU2,            // RY+RZ layers + CX entanglers
  TwoLocal,                // user-chosen rotation blocks + CX entanglers
  ExcitationPreserving,    // RZ layers + XXplusYY entanglers; conserves the
                           // number of excited qubits
};

std::string ansatz_kind_name(AnsatzKind kind);
AnsatzKind ansatz_kind_from_name(const std::string& name);

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::RealAmplitudes;
  int num_qubits = 2;
  int reps = 1;
  Entanglement entanglement = Entanglement::Linear;
  // TwoLocal only: which single-qubit rotations form each rotation layer
  // (subset of RX/RY/RZ, applied in order to every qubit).
  std::vector<Gate> rotation_blocks{Gate::RY};

  void validate() const;
};

// Trainable circuit with symbols theta0..theta(m-1), listed in param_names
// in the order the parameters first appear.
//
// Parameter counts: RealAmplitudes n*(reps+1); EfficientSU2 2n*(reps+1);
// TwoLocal n*(reps+1)*|rotation_blocks|; ExcitationPreserving n*(reps+1)
// + reps*|pairs|.
struct AnsatzCircuit {
  Circuit circuit;
  std::size_t num_params = 0;
  std::vector<std::string> param_names;
};

AnsatzCircuit build_ansatz(const AnsatzSpec& spec);

}  // namespace qnids
