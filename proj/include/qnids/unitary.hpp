// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "qnids/circuit.hpp"

namespace qnids {

/// Width cap for dense unitary construction (2^n x 2^n matrices).
constexpr int kMaxUnitaryQubits = 10;

/// 2x2 or 4x4 matrix of a fully bound instruction. For two-qubit gates the
/// local basis index is (bit of qubits[1]) << 1 | (bit of qubits[0]).
Eigen::MatrixXcd gate_matrix(const Instruction& inst);

/// Instruction embedded into the full 2^n-dimensional space.
Eigen::MatrixXcd embed_gate(const Instruction& inst, int num_qubits);

/// Dense unitary of a fully bound circuit, built by brute-force matrix
/// products. Quadratic memory and cubic time per gate: intended as a
/// small-width reference implementation, capped at kMaxUnitaryQubits.
Eigen::MatrixXcd unitary_of(const Circuit& circuit);

/// Permutation matrix of a qubit relabeling: bit q of the input index is
/// moved to bit layout[q] of the output index. layout must be a
/// permutation of [0, n).
Eigen::MatrixXcd layout_permutation_matrix(const std::vector<int>& layout);

/// Max-norm distance between unitaries after aligning global phase.
double unitary_distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace qnids
