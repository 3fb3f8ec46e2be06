// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qnids/circuit.hpp"
#include "qnids/noise.hpp"
#include "qnids/rng.hpp"
#include "qnids/statevector.hpp"

namespace qnids {

/// Measurement outcome histogram. Keys are bitstrings with qubit n-1
/// leftmost; every key has the full register length.
struct Counts {
  std::map<std::string, long long> histogram;
  long long shots = 0;
  int num_qubits = 0;

  long long at(const std::string& key) const;
  /// Empirical distribution (count / shots).
  std::map<std::string, double> distribution() const;
  /// Key-sorted JSON object {bitstring: count, ..., "_shots": shots}.
  std::string to_json() const;
  static Counts from_json(const std::string& text);
};

/// Signed probability table produced by readout mitigation; entries sum to
/// 1 within numerical tolerance but individual values may be negative.
struct QuasiDistribution {
  std::map<std::string, double> probs;
  double sum() const;
  double at(const std::string& key) const;
  /// Expectation of a Z-parity mask under the quasi-probabilities.
  double expectation_z_mask(std::uint64_t mask, int num_qubits) const;
};

/// Sample measurement outcomes in the computational basis.
///
/// Without gate/idle noise the state is evolved once and outcomes are drawn
/// from the Born distribution; with stochastic-Pauli noise each shot replays
/// the circuit as an independent trajectory. Readout confusion is applied
/// per measured bit. Identical seeds give identical counts.
Counts sample(const Circuit& circuit, long long shots, const NoiseModel* noise, std::uint64_t seed,
              const StateVector* initial = nullptr);

/// One stochastic-Pauli trajectory through the circuit (no measurement).
StateVector noisy_trajectory(const Circuit& circuit, const NoiseModel& noise, Rng& rng,
                             const StateVector* initial = nullptr);

/// Estimate per-qubit confusion matrices by running the |0> and |1>
/// basis-preparation circuits under the model's readout noise (gate noise
/// is excluded so the estimate isolates readout error).
std::vector<Confusion> calibrate_readout(const NoiseModel& noise, long long shots,
                                         std::uint64_t seed);

/// Matrix-free readout mitigation: applies each qubit's inverse confusion
/// factor along its own axis of the empirical distribution. Never forms the
/// 2^n x 2^n tensor-product matrix.
QuasiDistribution mitigate(const Counts& counts, const std::vector<Confusion>& calibration);
QuasiDistribution mitigate_distribution(const std::map<std::string, double>& distribution,
                                        int num_qubits, const std::vector<Confusion>& calibration);

/// Total-variation distance between two distributions over bitstrings.
double tv_distance(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

}  // namespace qnids
