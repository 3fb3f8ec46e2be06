// SPDX-License-Identifier: Apache-2.0
#include "qnids/coupling.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qnids {

CouplingGraph CouplingGraph::complete(std::size_t num_qubits) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < num_qubits; ++i) {
    for (std::size_t j = i + 1; j < num_qubits; ++j) edges.emplace_back(i, j);
  }
  return CouplingGraph(num_qubits, edges);
}

CouplingGraph CouplingGraph::line(std::size_t num_qubits) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < num_qubits; ++i) edges.emplace_back(i, i + 1);
  return CouplingGraph(num_qubits, edges);
}

CouplingGraph CouplingGraph::ring(std::size_t num_qubits) {
  if (num_qubits < 3) throw std::invalid_argument("CouplingGraph::ring: need at least 3 qubits");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < num_qubits; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(num_qubits - 1, 0);
  return CouplingGraph(num_qubits, edges);
}

CouplingGraph::CouplingGraph(std::size_t num_qubits,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : num_qubits_(num_qubits), adjacency_(num_qubits) {
  for (auto [a, b] : edges) {
    if (a >= num_qubits_ || b >= num_qubits_) {
      throw std::out_of_range("CouplingGraph: edge endpoint out of range");
    }
    if (a == b) throw std::invalid_argument("CouplingGraph: self-loop edge");
    if (adjacent(a, b)) throw std::invalid_argument("CouplingGraph: duplicate edge");
    std::size_t lo = std::min(a, b), hi = std::max(a, b);
    edges_.emplace_back(lo, hi);
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

CouplingGraph CouplingGraph::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("CouplingGraph::from_file: cannot open " + path);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_qubit = 0;
  std::string line;
  std::size_t line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    long long a = 0, b = 0;
    if (!(ls >> a)) continue;  // blank or comment-only line
    if (!(ls >> b)) {
      throw std::runtime_error("CouplingGraph::from_file: line " + std::to_string(line_no) +
                               ": expected two qubit indices");
    }
    std::string extra;
    if (ls >> extra) {
      throw std::runtime_error("CouplingGraph::from_file: line " + std::to_string(line_no) +
                               ": trailing token '" + extra + "'");
    }
    if (a < 0 || b < 0) {
      throw std::runtime_error("CouplingGraph::from_file: line " + std::to_string(line_no) +
                               ": negative qubit index");
    }
    edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    max_qubit = std::max({max_qubit, static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
    any = true;
  }
  if (!any) throw std::runtime_error("CouplingGraph::from_file: no edges in " + path);
  return CouplingGraph(max_qubit + 1, edges);
}

bool CouplingGraph::adjacent(std::size_t a, std::size_t b) const {
  if (a >= num_qubits_ || b >= num_qubits_) {
    throw std::out_of_range("CouplingGraph::adjacent: qubit out of range");
  }
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b) ||
         std::find(nbrs.begin(), nbrs.end(), b) != nbrs.end();
}

const std::vector<std::size_t>& CouplingGraph::neighbors(std::size_t q) const {
  if (q >= num_qubits_) throw std::out_of_range("CouplingGraph::neighbors: qubit out of range");
  return adjacency_[q];
}

void CouplingGraph::ensure_distances() const {
  if (!distances_.empty()) return;
  distances_.assign(num_qubits_, std::vector<std::size_t>(num_qubits_, kNoPath));
  for (std::size_t src = 0; src < num_qubits_; ++src) {
    auto& dist = distances_[src];
    dist[src] = 0;
    std::deque<std::size_t> frontier{src};
    while (!frontier.empty()) {
      std::size_t cur = frontier.front();
      frontier.pop_front();
      for (std::size_t nb : adjacency_[cur]) {
        if (dist[nb] == kNoPath) {
          dist[nb] = dist[cur] + 1;
          frontier.push_back(nb);
        }
      }
    }
  }
}

bool CouplingGraph::connected() const {
  if (num_qubits_ == 0) return true;
  ensure_distances();
  const auto& from0 = distances_[0];
  return std::none_of(from0.begin(), from0.end(),
                      [](std::size_t d) { return d == kNoPath; });
}

std::size_t CouplingGraph::distance(std::size_t a, std::size_t b) const {
  if (a >= num_qubits_ || b >= num_qubits_) {
    throw std::out_of_range("CouplingGraph::distance: qubit out of range");
  }
  ensure_distances();
  std::size_t d = distances_[a][b];
  if (d == kNoPath) {
    throw std::runtime_error("CouplingGraph::distance: qubits " + std::to_string(a) + " and " +
                             std::to_string(b) + " are not connected");
  }
  return d;
}

}  // namespace qnids
