// SPDX-License-Identifier: Apache-2.0
#include "qnids/ansatz.hpp"

#include <algorithm>
#include <stdexcept>

namespace qnids {

namespace {

// Hands out theta0, theta1, ... in order of use.
class ParamAllocator {
 public:
  ParamExpr next() {
    std::string name = "theta" + std::to_string(names_.size());
    names_.push_back(name);
    return ParamExpr::symbol(name);
  }
  std::vector<std::string> take_names() { return std::move(names_); }

 private:
  std::vector<std::string> names_;
};

void rotation_layer(Circuit& c, const std::vector<Gate>& blocks, ParamAllocator& params) {
  for (Gate block : blocks) {
    for (int q = 0; q < c.num_qubits(); ++q) {
      c.append(Instruction::rotation1(block, q, params.next()));
    }
  }
}

void cx_entangling_layer(Circuit& c, Entanglement e) {
  for (const auto& [i, j] : entanglement_pairs(c.num_qubits(), e)) c.cx(i, j);
}

}  // namespace

std::string ansatz_kind_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::RealAmplitudes:
      return "real_amplitudes";
    case AnsatzKind::EfficientSU2:
      return "efficient_su2";
    case AnsatzKind::TwoLocal:
      return "two_local";
    case AnsatzKind::ExcitationPreserving:
      return "excitation_preserving";
  }
  throw std::logic_error("ansatz_kind_name: unknown value");
}

AnsatzKind ansatz_kind_from_name(const std::string& name) {
  if (name == "real_amplitudes") return AnsatzKind::RealAmplitudes;
  if (name == "efficient_su2") return AnsatzKind::EfficientSU2;
  if (name == "two_local") return AnsatzKind::TwoLocal;
  if (name == "excitation_preserving") return AnsatzKind::ExcitationPreserving;
  throw std::invalid_argument("ansatz_kind_from_name: unknown kind '" + name + "'");
}

void AnsatzSpec::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("AnsatzSpec: num_qubits must be >= 1");
  if (reps < 1) throw std::invalid_argument("AnsatzSpec: reps must be >= 1");
  if (kind == AnsatzKind::TwoLocal) {
    if (rotation_blocks.empty()) {
      throw std::invalid_argument("AnsatzSpec: TwoLocal needs at least one rotation block");
    }
    for (Gate g : rotation_blocks) {
      if (g != Gate::RX && g != Gate::RY && g != Gate::RZ) {
        throw std::invalid_argument(
            "AnsatzSpec: TwoLocal rotation blocks must be RX, RY, or RZ");
      }
    }
  }
}

AnsatzCircuit build_ansatz(const AnsatzSpec& spec) {
  spec.validate();
  Circuit c(spec.num_qubits);
  ParamAllocator params;

  std::vector<Gate> blocks;
  switch (spec.kind) {
    case AnsatzKind::RealAmplitudes:
      blocks = {Gate::RY};
      break;
    case AnsatzKind::EfficientSU2:
      blocks = {Gate::RY, Gate::RZ};
      break;
    case AnsatzKind::TwoLocal:
      blocks = spec.rotation_blocks;
      break;
    case AnsatzKind::ExcitationPreserving:
      blocks = {Gate::RZ};
      break;
  }

  rotation_layer(c, blocks, params);
  for (int r = 0; r < spec.reps; ++r) {
    if (spec.kind == AnsatzKind::ExcitationPreserving) {
      for (const auto& [i, j] : entanglement_pairs(spec.num_qubits, spec.entanglement)) {
        c.xx_plus_yy(i, j, params.next());
      }
    } else {
      cx_entangling_layer(c, spec.entanglement);
    }
    rotation_layer(c, blocks, params);
  }

  AnsatzCircuit result;
  result.param_names = params.take_names();
  result.num_params = result.param_names.size();
  result.circuit = std::move(c);
  return result;
}

}  // namespace qnids
