// SPDX-License-Identifier: Apache-2.0
#include "qnids/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace qnids {

long long Counts::at(const std::string& key) const {
  auto it = histogram.find(key);
  return it == histogram.end() ? 0 : it->second;
}

std::map<std::string, double> Counts::distribution() const {
  if (shots <= 0) throw std::logic_error("Counts: no shots recorded");
  std::map<std::string, double> out;
  for (const auto& [key, count] : histogram) {
    out[key] = static_cast<double>(count) / static_cast<double>(shots);
  }
  return out;
}

std::string Counts::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, count] : histogram) j[key] = count;
  j["_shots"] = shots;
  return j.dump();
}

Counts Counts::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("_shots")) {
    throw std::invalid_argument("Counts: JSON must be an object with a _shots field");
  }
  Counts out;
  out.shots = j.at("_shots").get<long long>();
  for (const auto& [key, value] : j.items()) {
    if (key == "_shots") continue;
    out.histogram[key] = value.get<long long>();
    out.num_qubits = static_cast<int>(key.size());
  }
  return out;
}

double QuasiDistribution::sum() const {
  double acc = 0.0;
  for (const auto& [key, p] : probs) acc += p;
  return acc;
}

double QuasiDistribution::at(const std::string& key) const {
  auto it = probs.find(key);
  return it == probs.end() ? 0.0 : it->second;
}

double QuasiDistribution::expectation_z_mask(std::uint64_t mask, int num_qubits) const {
  (void)num_qubits;
  double acc = 0.0;
  for (const auto& [key, p] : probs) {
    const std::size_t idx = bitstring_to_index(key);
    const int parity = std::popcount(idx & mask) & 1;
    acc += (parity ? -1.0 : 1.0) * p;
  }
  return acc;
}

namespace {

/// Draw a basis index from cumulative probabilities by inverse transform.
std::size_t draw_index(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::vector<double> cumulative_probabilities(const StateVector& state) {
  const auto probs = state.probabilities();
  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cumulative[i] = acc;
  }
  return cumulative;
}

std::size_t apply_readout_flips(std::size_t index, int num_qubits, const NoiseModel& noise,
                                Rng& rng) {
  std::size_t observed = 0;
  for (int q = 0; q < num_qubits; ++q) {
    const int bit = (index >> q) & 1;
    const Confusion c = noise.confusion(q);
    const int out_bit = (rng.uniform() < c.m[bit][1]) ? 1 : 0;
    if (out_bit) observed |= std::size_t{1} << q;
  }
  return observed;
}

bool circuit_has_delay(const Circuit& circuit) {
  for (const auto& inst : circuit.instructions()) {
    if (inst.kind == Gate::Delay) return true;
  }
  return false;
}

}  // namespace

StateVector noisy_trajectory(const Circuit& circuit, const NoiseModel& noise, Rng& rng,
                             const StateVector* initial) {
  StateVector state = initial ? *initial : StateVector(circuit.num_qubits());
  if (state.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("noisy_trajectory: initial state width mismatch");
  }
  static const char kPaulis[3] = {'X', 'Y', 'Z'};
  for (const auto& inst : circuit.instructions()) {
    if (inst.kind == Gate::Delay) {
      if (noise.p_idle > 0.0) {
        const double p_eff =
            noise.p_idle * (inst.dd_protected ? noise.dd_idle_factor : 1.0);
        for (int unit = 0; unit < inst.duration; ++unit) {
          if (rng.uniform() < p_eff) state.apply_pauli('Z', inst.qubits[0]);
        }
      }
      continue;
    }
    state.apply(inst);
    if (inst.qubits.size() == 1) {
      if (noise.p1 > 0.0 && rng.uniform() < noise.p1) {
        state.apply_pauli(kPaulis[rng.uniform_int(3)], inst.qubits[0]);
      }
    } else {
      if (noise.p2 > 0.0 && rng.uniform() < noise.p2) {
        // Uniform over the 15 non-identity two-qubit Pauli pairs.
        const std::uint64_t r = 1 + rng.uniform_int(15);
        const int pa = static_cast<int>(r & 3);
        const int pb = static_cast<int>(r >> 2);
        if (pa != 0) state.apply_pauli(kPaulis[pa - 1], inst.qubits[0]);
        if (pb != 0) state.apply_pauli(kPaulis[pb - 1], inst.qubits[1]);
      }
    }
  }
  return state;
}

Counts sample(const Circuit& circuit, long long shots, const NoiseModel* noise, std::uint64_t seed,
              const StateVector* initial) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  if (noise) noise->validate();
  const int n = circuit.num_qubits();
  Rng rng(Rng::derive(seed, noise ? noise->seed : 0));
  Counts out;
  out.shots = shots;
  out.num_qubits = n;
  std::map<std::size_t, long long> tally;

  const bool trajectories =
      noise && (noise->has_gate_noise() || (noise->has_idle_noise() && circuit_has_delay(circuit)));
  const bool readout = noise && noise->has_readout_noise();

  if (!trajectories) {
    const StateVector state = initial ? evolve(circuit, *initial) : evolve(circuit);
    const auto cumulative = cumulative_probabilities(state);
    for (long long shot = 0; shot < shots; ++shot) {
      std::size_t idx = draw_index(cumulative, rng);
      if (readout) idx = apply_readout_flips(idx, n, *noise, rng);
      ++tally[idx];
    }
  } else {
    for (long long shot = 0; shot < shots; ++shot) {
      const StateVector state = noisy_trajectory(circuit, *noise, rng, initial);
      const auto cumulative = cumulative_probabilities(state);
      std::size_t idx = draw_index(cumulative, rng);
      if (readout) idx = apply_readout_flips(idx, n, *noise, rng);
      ++tally[idx];
    }
  }
  for (const auto& [idx, count] : tally) {
    out.histogram[index_to_bitstring(idx, n)] = count;
  }
  return out;
}

std::vector<Confusion> calibrate_readout(const NoiseModel& noise, long long shots,
                                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("calibrate_readout: shots must be >= 1");
  const int n = static_cast<int>(noise.readout.size());
  std::vector<Confusion> estimates;
  estimates.reserve(n);
  for (int q = 0; q < n; ++q) {
    // Single-qubit slice with gate noise disabled: calibration circuits
    // measure the readout channel alone.
    NoiseModel slice;
    slice.readout = {noise.readout[q]};
    slice.seed = noise.seed;
    Circuit prep0(1);
    Circuit prep1(1);
    prep1.x(0);
    const Counts c0 = sample(prep0, shots, &slice, Rng::derive(seed, 2 * q));
    const Counts c1 = sample(prep1, shots, &slice, Rng::derive(seed, 2 * q + 1));
    Confusion est;
    est.m[0][0] = static_cast<double>(c0.at("0")) / shots;
    est.m[0][1] = static_cast<double>(c0.at("1")) / shots;
    est.m[1][0] = static_cast<double>(c1.at("0")) / shots;
    est.m[1][1] = static_cast<double>(c1.at("1")) / shots;
    estimates.push_back(est);
  }
  return estimates;
}

QuasiDistribution mitigate_distribution(const std::map<std::string, double>& distribution,
                                        int num_qubits,
                                        const std::vector<Confusion>& calibration) {
  if (static_cast<int>(calibration.size()) != num_qubits) {
    throw std::invalid_argument("mitigate: calibration size must equal the register width");
  }
  if (num_qubits < 1 || num_qubits > 20) {
    throw std::invalid_argument("mitigate: register width must be in [1, 20]");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<double> p(dim, 0.0);
  for (const auto& [key, value] : distribution) {
    if (static_cast<int>(key.size()) != num_qubits) {
      throw std::invalid_argument("mitigate: bitstring '" + key + "' has wrong length");
    }
    p[bitstring_to_index(key)] = value;
  }
  // Observed = true . (M_0 x ... x M_{n-1}); invert one factor at a time:
  // p_true[b] = sum_obs p_obs[o] * inv[o][b] along each qubit axis.
  for (int q = 0; q < num_qubits; ++q) {
    const Confusion inv = calibration[q].inverse_unchecked_rows();
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & bit) continue;
      const double v0 = p[base];
      const double v1 = p[base | bit];
      p[base] = v0 * inv.m[0][0] + v1 * inv.m[1][0];
      p[base | bit] = v0 * inv.m[0][1] + v1 * inv.m[1][1];
    }
  }
  QuasiDistribution out;
  for (std::size_t i = 0; i < dim; ++i) {
    if (std::abs(p[i]) > 1e-12) out.probs[index_to_bitstring(i, num_qubits)] = p[i];
  }
  return out;
}

QuasiDistribution mitigate(const Counts& counts, const std::vector<Confusion>& calibration) {
  return mitigate_distribution(counts.distribution(), counts.num_qubits, calibration);
}

double tv_distance(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double acc = 0.0;
  for (const auto& [key, pa] : a) {
    auto it = b.find(key);
    const double pb = it == b.end() ? 0.0 : it->second;
    acc += std::abs(pa - pb);
  }
  for (const auto& [key, pb] : b) {
    if (a.find(key) == a.end()) acc += std::abs(pb);
  }
  return 0.5 * acc;
}

}  // namespace qnids
