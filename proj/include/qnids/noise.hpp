// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qnids {

/// Row-stochastic 2x2 readout confusion matrix: m[true][observed].
struct Confusion {
  std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

  static Confusion from_error_rates(double p10, double p01);
  bool is_identity() const;
  /// Determinant p(0|0) + p(1|1) - 1; invertibility margin.
  double determinant() const;
  /// Exact 2x2 inverse; throws std::invalid_argument when |det| <= 1e-6.
  Confusion inverse_unchecked_rows() const;
};

/// Scalar noise parameters, independent of device width.
struct NoiseParams {
  double p1 = 0.0;           // 1-qubit depolarizing insertion probability
  double p2 = 0.0;           // 2-qubit depolarizing insertion probability
  double readout_p10 = 0.0;  // P(observe 1 | true 0)
  double readout_p01 = 0.0;  // P(observe 0 | true 1)
  double p_idle = 0.0;       // per-time-unit dephasing probability on Delay
};

/// Stochastic-Pauli noise model:
///  - after each non-Delay gate, with probability p1 (1q) / p2 (2q) a
///    uniformly random non-identity Pauli is applied to the touched qubits;
///  - each Delay time unit applies Z with probability p_idle, scaled by
///    dd_idle_factor on delays the decoupling pass bracketed with X pulses;
///  - measured bits are flipped through per-qubit confusion matrices.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<Confusion> readout;  // per qubit; empty = ideal readout
  double p_idle = 0.0;
  double dd_idle_factor = 0.5;
  std::uint64_t seed = 0;

  static NoiseModel from_params(const NoiseParams& params, int num_qubits);
  static NoiseModel depolarizing(double p1, double p2);
  static NoiseModel readout_only(double p10, double p01, int num_qubits);

  void validate() const;
  bool has_gate_noise() const { return p1 > 0.0 || p2 > 0.0; }
  bool has_idle_noise() const { return p_idle > 0.0; }
  bool has_readout_noise() const;
  /// Confusion matrix for one qubit; identity when none was configured.
  Confusion confusion(int qubit) const;
};

/// Built-in synthetic backend presets, ordered here by increasing severity.
/// Keys: ideal, cairo_like, kyoto_like, brisbane_like, osaka_like,
/// sherbrooke_like.
const std::map<std::string, NoiseParams>& builtin_noise_presets();

/// Load presets from a JSON file of the form
///   {"name": {"p1":..,"p2":..,"readout_p10":..,"readout_p01":..,"p_idle":..}, ...}
std::map<std::string, NoiseParams> load_noise_presets(const std::string& path);

/// Resolve a preset by name from the builtin table.
NoiseParams noise_preset(const std::string& name);

}  // namespace qnids
