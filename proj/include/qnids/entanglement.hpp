// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

namespace qnids {

// Which qubit pairs (or triples) the entangling layers of feature maps and
// ansatz circuits touch.
enum class Entanglement {
  Linear,    // (0,1), (1,2), ..., (n-2, n-1)
  Circular,  // linear plus the closing pair (n-1, 0); the closing pair is
             // only added for n > 2 so it never duplicates a linear pair
  Full,      // every pair i < j
};

std::string entanglement_name(Entanglement e);
Entanglement entanglement_from_name(const std::string& name);

std::vector<std::array<int, 2>> entanglement_pairs(int num_qubits, Entanglement e);

// Triples for three-body interaction terms, built by analogy with the pair
// patterns: linear = consecutive (i, i+1, i+2); circular adds the single
// wrap-around triple (n-2, n-1, 0) for n > 3; full = all i < j < k.
std::vector<std::array<int, 3>> entanglement_triples(int num_qubits, Entanglement e);

}  // namespace qnids
