// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "qnids/circuit.hpp"
#include "qnids/noise.hpp"
#include "qnids/sampler.hpp"
#include "qnids/statevector.hpp"
#include "qnids/transpiler.hpp"

namespace qnids {

enum class ExecMode {
  Exact,  // dense statevector expectations, no sampling error
  Shots,  // finite-shot estimates, optionally with noise and mitigation
};

std::string exec_mode_name(ExecMode mode);
ExecMode exec_mode_from_name(const std::string& name);

// How model circuits are executed.  Exact mode ignores the sampling fields
// (shots, noise, resilience, calibration) but still honors `transpile`.
// Resilience level 1 wraps every sampled estimate in readout-error
// mitigation backed by a cached calibration run.
struct EvalMode {
  ExecMode exec = ExecMode::Exact;
  long long shots = 4096;
  std::optional<NoiseModel> noise;
  int resilience_level = 0;
  std::optional<TranspileConfig> transpile;
  long long calibration_shots = 4096;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

// Executes bound circuits under one EvalMode.  `stream` values decorrelate
// the sampling randomness of independent estimates; results are
// deterministic in (mode.seed, stream) and independent of thread count.
// Const methods are safe to call concurrently.
class Executor {
 public:
  explicit Executor(EvalMode mode);

  const EvalMode& mode() const { return mode_; }

  // <Z-parity of mask> for the state prepared by `bound` from |0...0> (or
  // `initial`).  The mask addresses the circuit's own (logical) qubits even
  // when transpilation relocates them.
  double expectation_z(const Circuit& bound, std::uint64_t mask, std::uint64_t stream = 0,
                       const StateVector* initial = nullptr) const;

  // Probability of the all-zeros outcome after `bound`, clamped to [0, 1]
  // (mitigated quasi-probabilities can overshoot slightly).
  double all_zeros_probability(const Circuit& bound, std::uint64_t stream = 0) const;

 private:
  struct Prepared {
    Circuit circuit;
    std::vector<std::size_t> initial_layout;  // logical -> physical at entry
    std::vector<std::size_t> final_layout;    // logical -> physical at exit
  };
  Prepared prepare(const Circuit& bound) const;
  std::vector<Confusion> calibration(int num_qubits) const;
  QuasiDistribution sampled_quasi(const Prepared& prepared, std::uint64_t stream,
                                  const StateVector* initial) const;

  EvalMode mode_;
  mutable std::mutex calibration_mutex_;
  mutable std::map<int, std::vector<Confusion>> calibration_by_width_;
};

// Scatter a logical qubit mask through a logical->physical layout.
std::uint64_t permute_mask(std::uint64_t mask, const std::vector<std::size_t>& layout);

// Reindex amplitudes so logical qubit q's bit lands at layout[q].
StateVector permute_state(const StateVector& state, const std::vector<std::size_t>& layout);

}  // namespace qnids
