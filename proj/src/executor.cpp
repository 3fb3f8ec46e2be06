// SPDX-License-Identifier: Apache-2.0
#include "qnids/executor.hpp"

#include <bit>
#include <stdexcept>

namespace qnids {

std::string exec_mode_name(ExecMode mode) {
  return mode == ExecMode::Exact ? "exact" : "shots";
}

ExecMode exec_mode_from_name(const std::string& name) {
  if (name == "exact") return ExecMode::Exact;
  if (name == "shots") return ExecMode::Shots;
  throw std::invalid_argument("exec_mode_from_name: unknown mode '" + name +
                              "' (expected exact or shots)");
}

void EvalMode::validate() const {
  if (shots < 1) throw std::invalid_argument("EvalMode: shots must be >= 1");
  if (calibration_shots < 1) {
    throw std::invalid_argument("EvalMode: calibration_shots must be >= 1");
  }
  if (resilience_level != 0 && resilience_level != 1) {
    throw std::invalid_argument("EvalMode: resilience_level must be 0 or 1");
  }
  if (jobs < 1) throw std::invalid_argument("EvalMode: jobs must be >= 1");
  if (noise) noise->validate();
}

Executor::Executor(EvalMode mode) : mode_(std::move(mode)) { mode_.validate(); }

Executor::Prepared Executor::prepare(const Circuit& bound) const {
  if (!mode_.transpile) {
    std::vector<std::size_t> identity(static_cast<std::size_t>(bound.num_qubits()));
    for (std::size_t q = 0; q < identity.size(); ++q) identity[q] = q;
    return Prepared{bound, identity, identity};
  }
  TranspileResult result = transpile(bound, *mode_.transpile);
  return Prepared{std::move(result.circuit), std::move(result.initial_layout),
                  std::move(result.final_layout)};
}

std::vector<Confusion> Executor::calibration(int num_qubits) const {
  std::lock_guard<std::mutex> lock(calibration_mutex_);
  auto it = calibration_by_width_.find(num_qubits);
  if (it != calibration_by_width_.end()) return it->second;
  std::vector<Confusion> estimate;
  if (mode_.noise) {
    estimate = calibrate_readout(*mode_.noise, mode_.calibration_shots,
                                 Rng::derive(mode_.seed, 0x43414c49));  // "CALI" stream
  }
  estimate.resize(static_cast<std::size_t>(num_qubits));  // identity beyond configured qubits
  calibration_by_width_[num_qubits] = estimate;
  return estimate;
}

QuasiDistribution Executor::sampled_quasi(const Prepared& prepared, std::uint64_t stream,
                                          const StateVector* initial) const {
  const NoiseModel* noise = mode_.noise ? &*mode_.noise : nullptr;
  Counts counts =
      sample(prepared.circuit, mode_.shots, noise, Rng::derive(mode_.seed, stream), initial);
  if (mode_.resilience_level == 1) {
    return mitigate(counts, calibration(counts.num_qubits));
  }
  QuasiDistribution quasi;
  for (const auto& [key, count] : counts.histogram) {
    quasi.probs[key] = static_cast<double>(count) / static_cast<double>(counts.shots);
  }
  return quasi;
}

double Executor::expectation_z(const Circuit& bound, std::uint64_t mask, std::uint64_t stream,
                               const StateVector* initial) const {
  Prepared prepared = prepare(bound);
  const std::uint64_t physical_mask = permute_mask(mask, prepared.final_layout);
  StateVector permuted_initial(1);
  const StateVector* effective_initial = initial;
  if (initial != nullptr && mode_.transpile) {
    // The initial state is expressed on logical qubits; relocate it to the
    // circuit's physical wires as of the start of the circuit.
    permuted_initial = permute_state(*initial, prepared.initial_layout);
    effective_initial = &permuted_initial;
  }
  if (mode_.exec == ExecMode::Exact) {
    StateVector state = effective_initial != nullptr
                            ? evolve(prepared.circuit, *effective_initial)
                            : evolve(prepared.circuit);
    return expectation_z_mask(state, physical_mask);
  }
  QuasiDistribution quasi = sampled_quasi(prepared, stream, effective_initial);
  return quasi.expectation_z_mask(physical_mask, prepared.circuit.num_qubits());
}

double Executor::all_zeros_probability(const Circuit& bound, std::uint64_t stream) const {
  Prepared prepared = prepare(bound);
  if (mode_.exec == ExecMode::Exact) {
    StateVector state = evolve(prepared.circuit);
    return state.probability(0);
  }
  QuasiDistribution quasi = sampled_quasi(prepared, stream, nullptr);
  const std::string zeros(static_cast<std::size_t>(prepared.circuit.num_qubits()), '0');
  double p = quasi.at(zeros);
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

std::uint64_t permute_mask(std::uint64_t mask, const std::vector<std::size_t>& layout) {
  std::uint64_t out = 0;
  for (std::size_t q = 0; q < layout.size(); ++q) {
    if (mask >> q & 1) out |= std::uint64_t{1} << layout[q];
  }
  const std::uint64_t high = mask >> layout.size();
  if (high != 0) {
    throw std::invalid_argument("permute_mask: mask addresses qubits beyond the layout");
  }
  return out;
}

StateVector permute_state(const StateVector& state, const std::vector<std::size_t>& layout) {
  if (static_cast<std::size_t>(state.num_qubits()) != layout.size()) {
    throw std::invalid_argument("permute_state: layout size does not match state width");
  }
  std::vector<cdouble> out(state.dim());
  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    std::size_t mapped = 0;
    for (std::size_t q = 0; q < layout.size(); ++q) {
      if (idx >> q & 1) mapped |= std::size_t{1} << layout[q];
    }
    out[mapped] = state.amplitude(idx);
  }
  return StateVector(state.num_qubits(), std::move(out));
}

}  // namespace qnids
