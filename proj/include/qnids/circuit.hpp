// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qnids/param_expr.hpp"

namespace qnids {

// Bit order convention used across the library: qubit 0 is the least
// significant bit of basis-state indices. Bitstrings (counts keys,
// observable strings) are printed with qubit n-1 leftmost.

enum class Gate {
  H,
  X,
  Y,
  Z,
  S,
  T,
  RX,
  RY,
  RZ,
  Phase,
  CX,
  CZ,
  RZZ,
  SWAP,
  XXplusYY,
  Delay,
};

/// Serialization name, e.g. "CX", "XXPLUSYY".
const char* gate_name(Gate g);
/// Inverse of gate_name; throws std::invalid_argument for unknown names.
Gate gate_from_name(const std::string& name);
/// Number of qubit operands (Delay acts on one qubit).
int gate_arity(Gate g);
/// True for the rotation/phase family that carries an angle expression.
bool gate_has_angle(Gate g);
/// True when the gate's matrix is diagonal in the computational basis.
bool gate_is_diagonal(Gate g);

/// One circuit operation: gate kind, qubit operands, optional angle.
/// Delay additionally carries an integer duration in schedule time units;
/// dd_protected marks delays emitted by the dynamical-decoupling pass so
/// the noisy simulator can apply the reduced idle error rate.
struct Instruction {
  Gate kind = Gate::H;
  std::vector<int> qubits;
  std::optional<ParamExpr> angle;
  int duration = 0;
  bool dd_protected = false;

  static Instruction gate1(Gate kind, int qubit);
  static Instruction gate2(Gate kind, int a, int b);
  static Instruction rotation1(Gate kind, int qubit, ParamExpr angle);
  static Instruction rotation2(Gate kind, int a, int b, ParamExpr angle);
  static Instruction delay(int qubit, int duration, bool dd_protected = false);

  bool touches(int qubit) const;
  bool overlaps(const Instruction& other) const;
  bool operator==(const Instruction& other) const;
  bool operator!=(const Instruction& other) const { return !(*this == other); }
};

/// A fixed-width sequence of instructions plus the set of free symbols.
///
/// append() validates each instruction against the circuit width and the
/// gate contract (arity, distinct qubit operands, angle present exactly
/// for the rotation family, Delay duration >= 1).
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return instructions_.size(); }
  const std::vector<Instruction>& instructions() const { return instructions_; }
  const std::set<std::string>& free_symbols() const { return free_symbols_; }
  bool fully_bound() const { return free_symbols_.empty(); }

  Circuit& append(Instruction inst);

  // Builder conveniences; all return *this for chaining.
  Circuit& h(int q) { return append(Instruction::gate1(Gate::H, q)); }
  Circuit& x(int q) { return append(Instruction::gate1(Gate::X, q)); }
  Circuit& y(int q) { return append(Instruction::gate1(Gate::Y, q)); }
  Circuit& z(int q) { return append(Instruction::gate1(Gate::Z, q)); }
  Circuit& s(int q) { return append(Instruction::gate1(Gate::S, q)); }
  Circuit& t(int q) { return append(Instruction::gate1(Gate::T, q)); }
  Circuit& rx(int q, ParamExpr a) { return append(Instruction::rotation1(Gate::RX, q, a)); }
  Circuit& ry(int q, ParamExpr a) { return append(Instruction::rotation1(Gate::RY, q, a)); }
  Circuit& rz(int q, ParamExpr a) { return append(Instruction::rotation1(Gate::RZ, q, a)); }
  Circuit& phase(int q, ParamExpr a) { return append(Instruction::rotation1(Gate::Phase, q, a)); }
  Circuit& rx(int q, double a) { return rx(q, ParamExpr::constant(a)); }
  Circuit& ry(int q, double a) { return ry(q, ParamExpr::constant(a)); }
  Circuit& rz(int q, double a) { return rz(q, ParamExpr::constant(a)); }
  Circuit& phase(int q, double a) { return phase(q, ParamExpr::constant(a)); }
  Circuit& cx(int c, int t) { return append(Instruction::gate2(Gate::CX, c, t)); }
  Circuit& cz(int a, int b) { return append(Instruction::gate2(Gate::CZ, a, b)); }
  Circuit& swap(int a, int b) { return append(Instruction::gate2(Gate::SWAP, a, b)); }
  Circuit& rzz(int a, int b, ParamExpr t) {
    return append(Instruction::rotation2(Gate::RZZ, a, b, t));
  }
  Circuit& rzz(int a, int b, double t) { return rzz(a, b, ParamExpr::constant(t)); }
  Circuit& xx_plus_yy(int a, int b, ParamExpr t) {
    return append(Instruction::rotation2(Gate::XXplusYY, a, b, t));
  }
  Circuit& xx_plus_yy(int a, int b, double t) { return xx_plus_yy(a, b, ParamExpr::constant(t)); }
  Circuit& delay(int q, int duration) { return append(Instruction::delay(q, duration)); }

  /// Substitute symbol values (partial bindings allowed); returns a new
  /// circuit. Fully determined angles fold to constants.
  Circuit bind(const std::map<std::string, double>& binding) const;

  /// Adjoint circuit; requires a fully bound circuit.
  Circuit inverse() const;

  bool operator==(const Circuit& other) const;
  bool operator!=(const Circuit& other) const { return !(*this == other); }

  /// Line-oriented text form:
  ///   qubits <n>
  ///   <GATE> <q0>[,<q1>] [angle-expression]
  ///   DELAY <q> <duration> [dd]
  /// Round-trips losslessly through from_text().
  std::string to_text() const;
  static Circuit from_text(const std::string& text);

 private:
  int num_qubits_ = 0;
  std::vector<Instruction> instructions_;
  std::set<std::string> free_symbols_;
};

/// Concatenation of two equal-width circuits (a's instructions first).
Circuit compose(const Circuit& a, const Circuit& b);

}  // namespace qnids
