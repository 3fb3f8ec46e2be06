// SPDX-License-Identifier: Apache-2.0
#include "qnids/noise.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qnids {

Confusion Confusion::from_error_rates(double p10, double p01) {
  if (p10 < 0.0 || p10 > 1.0 || p01 < 0.0 || p01 > 1.0) {
    throw std::invalid_argument("Confusion: error rates must lie in [0, 1]");
  }
  Confusion c;
  c.m[0][0] = 1.0 - p10;
  c.m[0][1] = p10;
  c.m[1][0] = p01;
  c.m[1][1] = 1.0 - p01;
  return c;
}

bool Confusion::is_identity() const {
  return m[0][0] == 1.0 && m[0][1] == 0.0 && m[1][0] == 0.0 && m[1][1] == 1.0;
}

double Confusion::determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Confusion Confusion::inverse_unchecked_rows() const {
  const double det = determinant();
  if (std::abs(det) <= 1e-6) {
    throw std::invalid_argument("Confusion: matrix is numerically singular (|det| <= 1e-6)");
  }
  Confusion inv;
  inv.m[0][0] = m[1][1] / det;
  inv.m[0][1] = -m[0][1] / det;
  inv.m[1][0] = -m[1][0] / det;
  inv.m[1][1] = m[0][0] / det;
  return inv;
}

NoiseModel NoiseModel::from_params(const NoiseParams& params, int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("NoiseModel: num_qubits must be >= 1");
  NoiseModel model;
  model.p1 = params.p1;
  model.p2 = params.p2;
  model.p_idle = params.p_idle;
  if (params.readout_p10 > 0.0 || params.readout_p01 > 0.0) {
    model.readout.assign(num_qubits,
                         Confusion::from_error_rates(params.readout_p10, params.readout_p01));
  }
  model.validate();
  return model;
}

NoiseModel NoiseModel::depolarizing(double p1, double p2) {
  NoiseModel model;
  model.p1 = p1;
  model.p2 = p2;
  model.validate();
  return model;
}

NoiseModel NoiseModel::readout_only(double p10, double p01, int num_qubits) {
  NoiseModel model;
  model.readout.assign(num_qubits, Confusion::from_error_rates(p10, p01));
  model.validate();
  return model;
}

void NoiseModel::validate() const {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string("NoiseModel: ") + name + " must lie in [0, 1]");
    }
  };
  check_prob(p1, "p1");
  check_prob(p2, "p2");
  check_prob(p_idle, "p_idle");
  if (!(dd_idle_factor >= 0.0 && dd_idle_factor <= 1.0)) {
    throw std::invalid_argument("NoiseModel: dd_idle_factor must lie in [0, 1]");
  }
  for (const auto& c : readout) {
    for (const auto& row : c.m) {
      const double sum = row[0] + row[1];
      if (row[0] < 0.0 || row[1] < 0.0 || std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("NoiseModel: confusion rows must be probabilities summing to 1");
      }
    }
  }
}

bool NoiseModel::has_readout_noise() const {
  for (const auto& c : readout) {
    if (!c.is_identity()) return true;
  }
  return false;
}

Confusion NoiseModel::confusion(int qubit) const {
  if (qubit < 0) throw std::out_of_range("NoiseModel: negative qubit index");
  if (qubit < static_cast<int>(readout.size())) return readout[qubit];
  return Confusion{};
}

const std::map<std::string, NoiseParams>& builtin_noise_presets() {
  static const std::map<std::string, NoiseParams> presets = {
      {"ideal", {0.0, 0.0, 0.0, 0.0, 0.0}},
      {"cairo_like", {0.0005, 0.005, 0.010, 0.020, 0.001}},
      {"kyoto_like", {0.0010, 0.010, 0.015, 0.030, 0.002}},
      {"brisbane_like", {0.0020, 0.020, 0.020, 0.040, 0.004}},
      {"osaka_like", {0.0030, 0.030, 0.025, 0.050, 0.006}},
      {"sherbrooke_like", {0.0050, 0.050, 0.030, 0.060, 0.008}},
  };
  return presets;
}

std::map<std::string, NoiseParams> load_noise_presets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("noise presets: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("noise presets: malformed JSON in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("noise presets: top level must be an object");
  std::map<std::string, NoiseParams> out;
  for (const auto& [name, entry] : j.items()) {
    if (!entry.is_object()) {
      throw std::invalid_argument("noise presets: entry '" + name + "' must be an object");
    }
    NoiseParams p;
    p.p1 = entry.value("p1", 0.0);
    p.p2 = entry.value("p2", 0.0);
    p.readout_p10 = entry.value("readout_p10", 0.0);
    p.readout_p01 = entry.value("readout_p01", 0.0);
    p.p_idle = entry.value("p_idle", 0.0);
    out[name] = p;
  }
  return out;
}

NoiseParams noise_preset(const std::string& name) {
  const auto& presets = builtin_noise_presets();
  auto it = presets.find(name);
  if (it == presets.end()) {
    std::string names;
    for (const auto& [key, value] : presets) {
      (void)value;
      if (!names.empty()) names += ", ";
      names += key;
    }
    throw std::invalid_argument("noise preset '" + name + "' not found (available: " + names + ")");
  }
  return it->second;
}

}  // namespace qnids
