// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qnids {

// Undirected connectivity graph over physical qubits.  Two-qubit gates may
// only act on adjacent pairs once a circuit has been routed.
class CouplingGraph {
 public:
  // Fully connected graph (no routing constraints).
  static CouplingGraph complete(std::size_t num_qubits);

  // Path 0-1-2-...-(n-1).
  static CouplingGraph line(std::size_t num_qubits);

  // Ring: line plus the closing edge (n-1, 0).  Requires n >= 3.
  static CouplingGraph ring(std::size_t num_qubits);

  // Build from an explicit edge list.  Edges are undirected; duplicates and
  // self-loops are rejected.
  CouplingGraph(std::size_t num_qubits, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  // Parse a text file with one "u v" pair per line ('#' starts a comment).
  // The qubit count is 1 + the largest endpoint mentioned.
  static CouplingGraph from_file(const std::string& path);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  bool adjacent(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbors(std::size_t q) const;

  // True when every qubit can reach every other.
  bool connected() const;

  // Shortest-path hop count between two qubits; throws if unreachable.
  std::size_t distance(std::size_t a, std::size_t b) const;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  // Lazily filled all-pairs hop counts (kNoPath when unreachable).
  mutable std::vector<std::vector<std::size_t>> distances_;

  static constexpr std::size_t kNoPath = static_cast<std::size_t>(-1);

  void ensure_distances() const;
};

}  // namespace qnids
