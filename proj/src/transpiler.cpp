// SPDX-License-Identifier: Apache-2.0
#include "qnids/transpiler.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace qnids {

namespace {

bool is_self_inverse(Gate g) {
  switch (g) {
    case Gate::H:
    case Gate::X:
    case Gate::Y:
    case Gate::Z:
    case Gate::CX:
    case Gate::CZ:
    case Gate::SWAP:
      return true;
    default:
      return false;
  }
}

bool is_rotation(Gate g) { return gate_has_angle(g); }

// Two-qubit gates whose unitary is unchanged under operand exchange.
bool is_symmetric_2q(Gate g) {
  return g == Gate::CZ || g == Gate::SWAP || g == Gate::RZZ || g == Gate::XXplusYY;
}

// True when a and b are the same gate kind acting on the same wires (up to
// operand exchange for symmetric kinds), i.e. candidates for cancellation
// or merging.
bool same_operation_site(const Instruction& a, const Instruction& b) {
  if (a.kind != b.kind) return false;
  if (a.qubits == b.qubits) return true;
  if (a.qubits.size() == 2 && is_symmetric_2q(a.kind)) {
    return a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0];
  }
  return false;
}

// Qubits on which the instruction acts diagonally in the computational
// basis: all of them for fully diagonal gates (Delay included), only the
// control for CX, none otherwise.
std::vector<int> diagonal_qubits(const Instruction& inst) {
  if (gate_is_diagonal(inst.kind)) return inst.qubits;
  if (inst.kind == Gate::CX) return {inst.qubits[0]};
  return {};
}

// Sufficient structural commutation test: a and b commute whenever every
// qubit they share is one both act on diagonally.
bool commutes(const Instruction& a, const Instruction& b) {
  std::vector<int> da = diagonal_qubits(a);
  std::vector<int> db = diagonal_qubits(b);
  for (int q : a.qubits) {
    if (!b.touches(q)) continue;
    bool ok = std::find(da.begin(), da.end(), q) != da.end() &&
              std::find(db.begin(), db.end(), q) != db.end();
    if (!ok) return false;
  }
  return true;
}

// One sweep of the cancellation/merging pass.  Returns true when a rewrite
// happened (callers loop to a fixpoint).  With `through_commuting` the
// search for a partner may look past intermediate gates that commute with
// the candidate; otherwise only past gates on disjoint qubits.
bool cancel_sweep(std::vector<Instruction>& ins, bool through_commuting) {
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const Instruction g = ins[i];
    if (g.kind == Gate::Delay) continue;
    for (std::size_t j = i + 1; j < ins.size(); ++j) {
      const Instruction& h = ins[j];
      if (!g.overlaps(h)) continue;
      if (same_operation_site(g, h)) {
        if (is_self_inverse(g.kind)) {
          ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(j));
          ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(i));
          return true;
        }
        if (is_rotation(g.kind) && g.angle->is_constant() && h.angle->is_constant()) {
          double merged = g.angle->constant_value() + h.angle->constant_value();
          if (merged == 0.0) {
            ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(j));
            ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(i));
          } else {
            // The merged rotation must stay after whatever g commuted past,
            // so it lands in h's slot and g's slot is dropped.
            Instruction combined = h;
            combined.angle = ParamExpr::constant(merged);
            ins[j] = combined;
            ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(i));
          }
          return true;
        }
        // Same site but symbolic angles: fall through to the commutation
        // check (diagonal rotations may still slide past each other).
      }
      if (through_commuting && commutes(g, h)) continue;
      break;
    }
  }
  return false;
}

void run_to_fixpoint(std::vector<Instruction>& ins, bool through_commuting) {
  while (cancel_sweep(ins, through_commuting)) {
  }
}

Circuit rebuild(int num_qubits, const std::vector<Instruction>& ins) {
  Circuit out(num_qubits);
  for (const auto& inst : ins) out.append(inst);
  return out;
}

// Busiest-first qubit order used by the noise-adaptive layout.
std::vector<std::size_t> logical_by_gate_count(int num_qubits,
                                               const std::vector<Instruction>& ins) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_qubits), 0);
  for (const auto& inst : ins) {
    if (inst.kind == Gate::Delay) continue;
    for (int q : inst.qubits) ++counts[static_cast<std::size_t>(q)];
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  return order;
}

std::vector<std::size_t> physical_by_error_rate(std::size_t n,
                                                const std::optional<std::vector<double>>& rates) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (rates) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return (*rates)[a] < (*rates)[b]; });
  }
  return order;
}

struct Router {
  const CouplingGraph* coupling = nullptr;  // null when no routing constraints
  std::vector<std::size_t> phys;            // logical -> physical
  std::vector<std::size_t> logical_at;      // physical -> logical

  void swap_physical(std::size_t s, std::size_t t, std::vector<Instruction>& out) {
    out.push_back(Instruction::gate2(Gate::SWAP, static_cast<int>(std::min(s, t)),
                                     static_cast<int>(std::max(s, t))));
    std::size_t ls = logical_at[s], lt = logical_at[t];
    std::swap(logical_at[s], logical_at[t]);
    phys[ls] = t;
    phys[lt] = s;
  }

  // Bring the physical images of logical qubits a and b next to each other,
  // greedily choosing the single SWAP that most reduces their distance
  // (ties: lower-indexed swap partner, then lower-indexed endpoint).
  void make_adjacent(std::size_t a, std::size_t b, std::vector<Instruction>& out) {
    while (coupling->distance(phys[a], phys[b]) > 1) {
      std::size_t best_s = 0, best_t = 0;
      std::size_t best_dist = static_cast<std::size_t>(-1);
      for (std::size_t endpoint : {phys[a], phys[b]}) {
        std::size_t other = endpoint == phys[a] ? phys[b] : phys[a];
        for (std::size_t t : coupling->neighbors(endpoint)) {
          std::size_t d = coupling->distance(t, other);
          if (std::tuple(d, t, endpoint) < std::tuple(best_dist, best_t, best_s)) {
            best_dist = d;
            best_t = t;
            best_s = endpoint;
          }
        }
      }
      swap_physical(best_s, best_t, out);
    }
  }
};

}  // namespace

TranspileResult transpile(const Circuit& circuit, const TranspileConfig& config) {
  if (config.optimization_level < 0 || config.optimization_level > 3) {
    throw std::invalid_argument("transpile: optimization_level must be in [0, 3]");
  }
  if (config.resilience_level != 0 && config.resilience_level != 1) {
    throw std::invalid_argument("transpile: resilience_level must be 0 or 1");
  }
  if (config.dynamic_decoupling != 0 && config.dynamic_decoupling != 1) {
    throw std::invalid_argument("transpile: dynamic_decoupling must be 0 or 1");
  }
  const std::size_t n = static_cast<std::size_t>(circuit.num_qubits());
  if (config.coupling) {
    if (config.coupling->num_qubits() != n) {
      throw std::invalid_argument("transpile: coupling graph size does not match circuit width");
    }
    if (!config.coupling->connected()) {
      throw std::invalid_argument("transpile: coupling graph is not connected");
    }
  }
  if (config.qubit_error_rates && config.qubit_error_rates->size() != n) {
    throw std::invalid_argument("transpile: qubit_error_rates size does not match circuit width");
  }

  std::vector<Instruction> ins = circuit.instructions();
  if (config.optimization_level >= 1) run_to_fixpoint(ins, /*through_commuting=*/false);
  if (config.optimization_level >= 2) run_to_fixpoint(ins, /*through_commuting=*/true);

  std::vector<std::size_t> initial_layout(n);
  std::iota(initial_layout.begin(), initial_layout.end(), 0);
  std::vector<std::size_t> final_layout = initial_layout;

  if (config.optimization_level >= 3 && n > 0) {
    std::vector<std::size_t> logical_order = logical_by_gate_count(circuit.num_qubits(), ins);
    std::vector<std::size_t> physical_order = physical_by_error_rate(n, config.qubit_error_rates);
    for (std::size_t k = 0; k < n; ++k) initial_layout[logical_order[k]] = physical_order[k];

    Router router;
    router.coupling = config.coupling ? &*config.coupling : nullptr;
    router.phys = initial_layout;
    router.logical_at.assign(n, 0);
    for (std::size_t l = 0; l < n; ++l) router.logical_at[initial_layout[l]] = l;

    std::vector<Instruction> placed;
    placed.reserve(ins.size());
    for (const auto& inst : ins) {
      if (inst.qubits.size() == 2 && router.coupling) {
        router.make_adjacent(static_cast<std::size_t>(inst.qubits[0]),
                             static_cast<std::size_t>(inst.qubits[1]), placed);
      }
      Instruction mapped = inst;
      for (int& q : mapped.qubits) {
        q = static_cast<int>(router.phys[static_cast<std::size_t>(q)]);
      }
      placed.push_back(mapped);
    }
    ins = std::move(placed);
    final_layout = router.phys;
  }

  Circuit out = rebuild(circuit.num_qubits(), ins);
  if (config.dynamic_decoupling == 1) out = apply_dd(out);
  return TranspileResult{std::move(out), std::move(initial_layout), std::move(final_layout)};
}

std::string layout_to_json(const std::vector<std::size_t>& layout) {
  std::ostringstream os;
  os << "{";
  for (std::size_t l = 0; l < layout.size(); ++l) {
    if (l) os << ", ";
    os << "\"" << l << "\": " << layout[l];
  }
  os << "}";
  return os.str();
}

std::map<Gate, int> default_gate_durations() {
  std::map<Gate, int> durations;
  for (Gate g : {Gate::H, Gate::X, Gate::Y, Gate::Z, Gate::S, Gate::T, Gate::RX, Gate::RY,
                 Gate::RZ, Gate::Phase}) {
    durations[g] = 1;
  }
  for (Gate g : {Gate::CX, Gate::CZ, Gate::RZZ, Gate::SWAP, Gate::XXplusYY}) durations[g] = 2;
  return durations;
}

int gate_duration(const Instruction& inst, const std::map<Gate, int>& durations) {
  if (inst.kind == Gate::Delay) return inst.duration;
  auto it = durations.find(inst.kind);
  int d = it != durations.end() ? it->second : (inst.qubits.size() == 2 ? 2 : 1);
  if (d <= 0) throw std::invalid_argument("gate_duration: durations must be positive");
  return d;
}

Schedule schedule_asap(const Circuit& circuit, const std::map<Gate, int>& durations) {
  Schedule sched;
  sched.start.reserve(circuit.size());
  std::vector<long long> ready(static_cast<std::size_t>(circuit.num_qubits()), 0);
  for (const auto& inst : circuit.instructions()) {
    long long start = 0;
    for (int q : inst.qubits) start = std::max(start, ready[static_cast<std::size_t>(q)]);
    long long end = start + gate_duration(inst, durations);
    for (int q : inst.qubits) ready[static_cast<std::size_t>(q)] = end;
    sched.start.push_back(start);
    sched.makespan = std::max(sched.makespan, end);
  }
  return sched;
}

namespace {

// Idle interval on one qubit, closed by the instruction at `closer` (or by
// the end of the circuit when closer == npos).  `absorbed` lists explicit
// Delay instructions the window swallows.
struct IdleWindow {
  int qubit = 0;
  long long length = 0;
  std::size_t closer = static_cast<std::size_t>(-1);
  std::vector<std::size_t> absorbed;
};

std::vector<IdleWindow> find_idle_windows(const Circuit& circuit,
                                          const std::map<Gate, int>& durations) {
  Schedule sched = schedule_asap(circuit, durations);
  const auto& ins = circuit.instructions();
  std::vector<IdleWindow> windows;
  for (int q = 0; q < circuit.num_qubits(); ++q) {
    // Walk this qubit's instructions in program order (which ASAP keeps
    // time-ordered).  Leading idle time before the first real operation is
    // left alone: the qubit still holds |0>, where dephasing is harmless.
    bool seen_op = false;
    long long idle_from = 0;
    std::vector<std::size_t> absorbed;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (!ins[i].touches(q)) continue;
      if (ins[i].kind == Gate::Delay) {
        if (seen_op) absorbed.push_back(i);
        continue;
      }
      if (seen_op && sched.start[i] > idle_from) {
        windows.push_back(IdleWindow{q, sched.start[i] - idle_from, i, absorbed});
      }
      absorbed.clear();
      seen_op = true;
      idle_from = sched.start[i] + gate_duration(ins[i], durations);
    }
    if (seen_op && sched.makespan > idle_from) {
      windows.push_back(
          IdleWindow{q, sched.makespan - idle_from, static_cast<std::size_t>(-1), absorbed});
    }
  }
  return windows;
}

void append_delay(std::vector<Instruction>& out, int q, long long units, bool protected_) {
  if (units <= 0) return;
  out.push_back(Instruction::delay(q, static_cast<int>(units), protected_));
}

// Replacement for one idle window: either the decoupling pattern or a plain
// delay covering the same number of time units.
std::vector<Instruction> window_filling(const IdleWindow& w, bool decouple) {
  std::vector<Instruction> filling;
  if (decouple && w.length >= 2) {
    long long quarter = w.length / 4;
    long long half = w.length / 2;
    append_delay(filling, w.qubit, quarter, true);
    filling.push_back(Instruction::gate1(Gate::X, w.qubit));
    append_delay(filling, w.qubit, half, true);
    filling.push_back(Instruction::gate1(Gate::X, w.qubit));
    append_delay(filling, w.qubit, w.length - quarter - half, true);
  } else {
    append_delay(filling, w.qubit, w.length, false);
  }
  return filling;
}

Circuit fill_windows(const Circuit& circuit, const std::map<Gate, int>& durations, bool decouple) {
  std::vector<IdleWindow> windows = find_idle_windows(circuit, durations);
  const auto& ins = circuit.instructions();
  std::vector<std::vector<Instruction>> before(ins.size());
  std::vector<Instruction> trailing;
  std::vector<bool> dropped(ins.size(), false);
  for (const auto& w : windows) {
    for (std::size_t i : w.absorbed) dropped[i] = true;
    auto filling = window_filling(w, decouple);
    auto& slot = w.closer == static_cast<std::size_t>(-1) ? trailing : before[w.closer];
    slot.insert(slot.end(), filling.begin(), filling.end());
  }
  Circuit out(circuit.num_qubits());
  for (std::size_t i = 0; i < ins.size(); ++i) {
    for (const auto& inst : before[i]) out.append(inst);
    if (!dropped[i]) out.append(ins[i]);
  }
  for (const auto& inst : trailing) out.append(inst);
  return out;
}

}  // namespace

Circuit apply_dd(const Circuit& circuit, const std::map<Gate, int>& durations) {
  return fill_windows(circuit, durations, /*decouple=*/true);
}

Circuit fill_idle(const Circuit& circuit, const std::map<Gate, int>& durations) {
  return fill_windows(circuit, durations, /*decouple=*/false);
}

}  // namespace qnids
