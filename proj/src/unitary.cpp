// SPDX-License-Identifier: Apache-2.0
#include "qnids/unitary.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qnids {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
const std::complex<double> kI(0.0, 1.0);

double bound_angle(const Instruction& inst) { return inst.angle->evaluate({}); }

}  // namespace

Eigen::MatrixXcd gate_matrix(const Instruction& inst) {
  using M = Eigen::MatrixXcd;
  switch (inst.kind) {
    case Gate::H: {
      M m(2, 2);
      const double s = 1.0 / std::sqrt(2.0);
      m << s, s, s, -s;
      return m;
    }
    case Gate::X: {
      M m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case Gate::Y: {
      M m(2, 2);
      m << 0.0, -kI, kI, 0.0;
      return m;
    }
    case Gate::Z: {
      M m(2, 2);
      m << 1, 0, 0, -1;
      return m;
    }
    case Gate::S: {
      M m(2, 2);
      m << 1.0, 0.0, 0.0, kI;
      return m;
    }
    case Gate::T: {
      M m(2, 2);
      m << 1.0, 0.0, 0.0, std::exp(kI * (kPi / 4.0));
      return m;
    }
    case Gate::RX: {
      const double t = bound_angle(inst) / 2.0;
      M m(2, 2);
      m << std::cos(t), -kI * std::sin(t), -kI * std::sin(t), std::cos(t);
      return m;
    }
    case Gate::RY: {
      const double t = bound_angle(inst) / 2.0;
      M m(2, 2);
      m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      return m;
    }
    case Gate::RZ: {
      const double t = bound_angle(inst) / 2.0;
      M m(2, 2);
      m << std::exp(-kI * t), 0.0, 0.0, std::exp(kI * t);
      return m;
    }
    case Gate::Phase: {
      const double t = bound_angle(inst);
      M m(2, 2);
      m << 1.0, 0.0, 0.0, std::exp(kI * t);
      return m;
    }
    case Gate::Delay:
      return M::Identity(2, 2);
    case Gate::CX: {
      // Control is qubits[0] (local bit 0), target qubits[1] (local bit 1).
      M m = M::Zero(4, 4);
      m(0, 0) = 1.0;
      m(3, 1) = 1.0;
      m(2, 2) = 1.0;
      m(1, 3) = 1.0;
      return m;
    }
    case Gate::CZ: {
      M m = M::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    }
    case Gate::RZZ: {
      const double t = bound_angle(inst) / 2.0;
      M m = M::Zero(4, 4);
      m(0, 0) = std::exp(-kI * t);
      m(1, 1) = std::exp(kI * t);
      m(2, 2) = std::exp(kI * t);
      m(3, 3) = std::exp(-kI * t);
      return m;
    }
    case Gate::SWAP: {
      M m = M::Zero(4, 4);
      m(0, 0) = 1.0;
      m(2, 1) = 1.0;
      m(1, 2) = 1.0;
      m(3, 3) = 1.0;
      return m;
    }
    case Gate::XXplusYY: {
      // Rotation in the {|01>, |10>} subspace; preserves excitation count.
      const double t = bound_angle(inst) / 2.0;
      M m = M::Identity(4, 4);
      m(1, 1) = std::cos(t);
      m(2, 2) = std::cos(t);
      m(1, 2) = -kI * std::sin(t);
      m(2, 1) = -kI * std::sin(t);
      return m;
    }
  }
  throw std::logic_error("unitary: unknown gate kind");
}

Eigen::MatrixXcd embed_gate(const Instruction& inst, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  const Eigen::MatrixXcd g = gate_matrix(inst);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  if (inst.qubits.size() == 1) {
    const std::size_t bit = std::size_t{1} << inst.qubits[0];
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & bit) continue;
      const std::size_t i0 = base;
      const std::size_t i1 = base | bit;
      full(i0, i0) = g(0, 0);
      full(i0, i1) = g(0, 1);
      full(i1, i0) = g(1, 0);
      full(i1, i1) = g(1, 1);
    }
  } else {
    const std::size_t b0 = std::size_t{1} << inst.qubits[0];
    const std::size_t b1 = std::size_t{1} << inst.qubits[1];
    for (std::size_t base = 0; base < dim; ++base) {
      if ((base & b0) || (base & b1)) continue;
      const std::size_t idx[4] = {base, base | b0, base | b1, base | b0 | b1};
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          full(idx[r], idx[c]) = g(r, c);
        }
      }
    }
  }
  return full;
}

Eigen::MatrixXcd unitary_of(const Circuit& circuit) {
  if (!circuit.fully_bound()) {
    throw std::invalid_argument("unitary_of: circuit has unbound symbols");
  }
  if (circuit.num_qubits() > kMaxUnitaryQubits) {
    throw std::invalid_argument("unitary_of: width " + std::to_string(circuit.num_qubits()) +
                                " exceeds the dense-matrix cap of " +
                                std::to_string(kMaxUnitaryQubits));
  }
  const std::size_t dim = std::size_t{1} << circuit.num_qubits();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& inst : circuit.instructions()) {
    u = embed_gate(inst, circuit.num_qubits()) * u;
  }
  return u;
}

Eigen::MatrixXcd layout_permutation_matrix(const std::vector<int>& layout) {
  const int n = static_cast<int>(layout.size());
  std::vector<bool> seen(n, false);
  for (int p : layout) {
    if (p < 0 || p >= n || seen[p]) {
      throw std::invalid_argument("layout_permutation_matrix: not a permutation of [0, n)");
    }
    seen[p] = true;
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t mapped = 0;
    for (int q = 0; q < n; ++q) {
      if (idx & (std::size_t{1} << q)) mapped |= std::size_t{1} << layout[q];
    }
    perm(mapped, idx) = 1.0;
  }
  return perm;
}

double unitary_distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("unitary_distance_up_to_phase: shape mismatch");
  }
  // Align global phase on the largest-magnitude entry of b.
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  std::complex<double> phase(1.0, 0.0);
  if (std::abs(b(r, c)) > 1e-12 && std::abs(a(r, c)) > 1e-12) {
    phase = (a(r, c) / std::abs(a(r, c))) / (b(r, c) / std::abs(b(r, c)));
  }
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace qnids
