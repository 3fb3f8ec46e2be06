// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnids/circuit.hpp"
#include "qnids/coupling.hpp"

namespace qnids {

// Knobs for the circuit-rewriting pipeline.
//
// Optimization levels build on each other:
//   0  identity rewrite
//   1  adjacent inverse-pair cancellation + constant-angle rotation merging
//   2  level 1, then the same cancellations allowed to look through
//      commuting (diagonal) gates, run to a fixpoint
//   3  level 2, then noise-adaptive layout (busiest logical qubit onto the
//      lowest-error physical qubit) and, when a coupling graph is given,
//      greedy SWAP routing of two-qubit gates
//
// `resilience_level` is validated here but acted on at sampling time
// (level 1 switches on readout-error mitigation).  `dynamic_decoupling`
// runs apply_dd() on the final circuit.
struct TranspileConfig {
  int optimization_level = 1;
  int resilience_level = 0;
  int dynamic_decoupling = 0;
  std::optional<CouplingGraph> coupling;
  std::optional<std::vector<double>> qubit_error_rates;
};

// Rewritten circuit plus the logical->physical qubit maps at circuit start
// and end (they differ only when routing inserted SWAPs).  The output
// satisfies  U_out = P(final) * U_in * P(initial)^dagger  up to global phase,
// where P(m) is the permutation unitary moving logical qubit q to m[q].
struct TranspileResult {
  Circuit circuit;
  std::vector<std::size_t> initial_layout;
  std::vector<std::size_t> final_layout;
};

TranspileResult transpile(const Circuit& circuit, const TranspileConfig& config);

// Serialize a layout map as a JSON object {"logical": physical, ...}.
std::string layout_to_json(const std::vector<std::size_t>& layout);

// --- Scheduling and dynamic decoupling ---------------------------------

// Abstract time units per gate kind.  Delay instructions always use their
// own stored duration regardless of this map.
std::map<Gate, int> default_gate_durations();

// Duration of one instruction under the given table (falls back to 1 unit
// for 1-qubit and 2 units for 2-qubit kinds missing from the map).
int gate_duration(const Instruction& inst, const std::map<Gate, int>& durations);

// As-soon-as-possible start times, one per instruction, in abstract units.
struct Schedule {
  std::vector<long long> start;
  long long makespan = 0;
};
Schedule schedule_asap(const Circuit& circuit, const std::map<Gate, int>& durations);

// Dynamic decoupling: find every idle window (between a qubit's operations,
// and after its last operation until the circuit ends) and fill it.  Windows
// of w >= 2 units become Delay(w/4) X Delay(w/2) X Delay(w - w/4 - w/2)
// with the delays flagged as decoupling-protected (idle noise is damped on
// them); zero-length delays are omitted and the X pulses are not charged
// against the window.  Windows of 1 unit become a plain Delay(1).  Existing
// Delay instructions inside a window are absorbed into it.  The X pairs
// cancel, so the noiseless unitary is unchanged.
Circuit apply_dd(const Circuit& circuit,
                 const std::map<Gate, int>& durations = default_gate_durations());

// Companion pass for fair comparisons against apply_dd: fills every idle
// window with a plain (unprotected) Delay of the window's length, so a
// circuit without decoupling is charged the same idle time.
Circuit fill_idle(const Circuit& circuit,
                  const std::map<Gate, int>& durations = default_gate_durations());

}  // namespace qnids
