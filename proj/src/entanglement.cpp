// SPDX-License-Identifier: Apache-2.0
#include "qnids/entanglement.hpp"

#include <stdexcept>

namespace qnids {

std::string entanglement_name(Entanglement e) {
  switch (e) {
    case Entanglement::Linear:
      return "linear";
    case Entanglement::Circular:
      return "circular";
    case Entanglement::Full:
      return "full";
  }
  throw std::logic_error("entanglement_name: unknown value");
}

Entanglement entanglement_from_name(const std::string& name) {
  if (name == "linear") return Entanglement::Linear;
  if (name == "circular") return Entanglement::Circular;
  if (name == "full") return Entanglement::Full;
  throw std::invalid_argument("entanglement_from_name: unknown pattern '" + name +
                              "' (expected linear, circular, or full)");
}

std::vector<std::array<int, 2>> entanglement_pairs(int num_qubits, Entanglement e) {
  std::vector<std::array<int, 2>> pairs;
  if (e == Entanglement::Full) {
    for (int i = 0; i < num_qubits; ++i) {
      for (int j = i + 1; j < num_qubits; ++j) pairs.push_back({i, j});
    }
    return pairs;
  }
  for (int i = 0; i + 1 < num_qubits; ++i) pairs.push_back({i, i + 1});
  if (e == Entanglement::Circular && num_qubits > 2) pairs.push_back({num_qubits - 1, 0});
  return pairs;
}

std::vector<std::array<int, 3>> entanglement_triples(int num_qubits, Entanglement e) {
  std::vector<std::array<int, 3>> triples;
  if (e == Entanglement::Full) {
    for (int i = 0; i < num_qubits; ++i) {
      for (int j = i + 1; j < num_qubits; ++j) {
        for (int k = j + 1; k < num_qubits; ++k) triples.push_back({i, j, k});
      }
    }
    return triples;
  }
  for (int i = 0; i + 2 < num_qubits; ++i) triples.push_back({i, i + 1, i + 2});
  if (e == Entanglement::Circular && num_qubits > 3) {
    triples.push_back({num_qubits - 2, num_qubits - 1, 0});
  }
  return triples;
}

}  // namespace qnids
