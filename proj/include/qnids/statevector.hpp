// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qnids/circuit.hpp"

namespace qnids {

using cdouble = std::complex<double>;

/// Width cap for dense statevector evolution.
constexpr int kMaxEvolveQubits = 24;

/// Dense 2^n-amplitude state. Gate application walks the amplitude array
/// with masked stride arithmetic; no gate ever materializes a full matrix.
class StateVector {
 public:
  /// |0...0> on num_qubits qubits.
  explicit StateVector(int num_qubits);
  /// Takes ownership of an amplitude vector; size must be 2^num_qubits.
  StateVector(int num_qubits, std::vector<cdouble> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  cdouble amplitude(std::size_t index) const { return amps_.at(index); }
  double probability(std::size_t index) const { return std::norm(amps_.at(index)); }
  std::vector<double> probabilities() const;
  double norm() const;

  /// Apply one fully bound instruction in place.
  void apply(const Instruction& inst);
  /// Apply a single Pauli ('X', 'Y' or 'Z') to one qubit; used by the
  /// stochastic noise model.
  void apply_pauli(char pauli, int qubit);

  /// <a|b>; widths must match.
  static cdouble inner(const StateVector& a, const StateVector& b);

 private:
  void apply_1q(const cdouble m00, const cdouble m01, const cdouble m10, const cdouble m11,
                int target);
  void apply_cx(int control, int target);
  void apply_cz(int a, int b);
  void apply_swap(int a, int b);
  void apply_rzz(double theta, int a, int b);
  void apply_xx_plus_yy(double theta, int a, int b);

  int num_qubits_ = 0;
  std::vector<cdouble> amps_;
};

/// Evolve |0...0> (or `initial` when given) through a fully bound circuit.
/// Delay instructions are identities here; only the noisy sampler charges
/// them with idle error.
StateVector evolve(const Circuit& circuit, int max_qubits = kMaxEvolveQubits);
StateVector evolve(const Circuit& circuit, const StateVector& initial,
                   int max_qubits = kMaxEvolveQubits);

/// Expectation value of a Pauli-Z string given as a bitmask of qubits.
double expectation_z_mask(const StateVector& state, std::uint64_t mask);

/// Expectation value of an observable string over {'I','Z'} of length n,
/// printed like bitstrings (leftmost character = qubit n-1).
double expectation_z(const StateVector& state, const std::string& observable);

/// Parse an 'I'/'Z' observable string into a qubit bitmask.
std::uint64_t z_mask_from_string(const std::string& observable, int num_qubits);

/// Basis index -> bitstring with qubit n-1 leftmost.
std::string index_to_bitstring(std::size_t index, int num_qubits);
/// Bitstring (qubit n-1 leftmost) -> basis index.
std::size_t bitstring_to_index(const std::string& bits);

}  // namespace qnids
