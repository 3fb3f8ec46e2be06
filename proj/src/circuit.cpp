// SPDX-License-Identifier: Apache-2.0
#include "qnids/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qnids {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct GateInfo {
  Gate gate;
  const char* name;
  int arity;
  bool has_angle;
  bool diagonal;
};

constexpr GateInfo kGateTable[] = {
    {Gate::H, "H", 1, false, false},
    {Gate::X, "X", 1, false, false},
    {Gate::Y, "Y", 1, false, false},
    {Gate::Z, "Z", 1, false, true},
    {Gate::S, "S", 1, false, true},
    {Gate::T, "T", 1, false, true},
    {Gate::RX, "RX", 1, true, false},
    {Gate::RY, "RY", 1, true, false},
    {Gate::RZ, "RZ", 1, true, true},
    {Gate::Phase, "PHASE", 1, true, true},
    {Gate::CX, "CX", 2, false, false},
    {Gate::CZ, "CZ", 2, false, true},
    {Gate::RZZ, "RZZ", 2, true, true},
    {Gate::SWAP, "SWAP", 2, false, false},
    {Gate::XXplusYY, "XXPLUSYY", 2, true, false},
    {Gate::Delay, "DELAY", 1, false, true},
};

const GateInfo& info(Gate g) {
  for (const auto& e : kGateTable) {
    if (e.gate == g) return e;
  }
  throw std::logic_error("Circuit: unknown gate kind");
}

}  // namespace

const char* gate_name(Gate g) { return info(g).name; }

Gate gate_from_name(const std::string& name) {
  for (const auto& e : kGateTable) {
    if (name == e.name) return e.gate;
  }
  throw std::invalid_argument("Circuit: unknown gate name '" + name + "'");
}

int gate_arity(Gate g) { return info(g).arity; }

bool gate_has_angle(Gate g) { return info(g).has_angle; }

bool gate_is_diagonal(Gate g) { return info(g).diagonal; }

Instruction Instruction::gate1(Gate kind, int qubit) {
  Instruction i;
  i.kind = kind;
  i.qubits = {qubit};
  return i;
}

Instruction Instruction::gate2(Gate kind, int a, int b) {
  Instruction i;
  i.kind = kind;
  i.qubits = {a, b};
  return i;
}

Instruction Instruction::rotation1(Gate kind, int qubit, ParamExpr angle) {
  Instruction i;
  i.kind = kind;
  i.qubits = {qubit};
  i.angle = std::move(angle);
  return i;
}

Instruction Instruction::rotation2(Gate kind, int a, int b, ParamExpr angle) {
  Instruction i;
  i.kind = kind;
  i.qubits = {a, b};
  i.angle = std::move(angle);
  return i;
}

Instruction Instruction::delay(int qubit, int duration, bool dd_protected) {
  Instruction i;
  i.kind = Gate::Delay;
  i.qubits = {qubit};
  i.duration = duration;
  i.dd_protected = dd_protected;
  return i;
}

bool Instruction::touches(int qubit) const {
  return std::find(qubits.begin(), qubits.end(), qubit) != qubits.end();
}

bool Instruction::overlaps(const Instruction& other) const {
  for (int q : qubits) {
    if (other.touches(q)) return true;
  }
  return false;
}

bool Instruction::operator==(const Instruction& other) const {
  if (kind != other.kind || qubits != other.qubits || duration != other.duration ||
      dd_protected != other.dd_protected) {
    return false;
  }
  if (angle.has_value() != other.angle.has_value()) return false;
  if (angle.has_value() && !(*angle == *other.angle)) return false;
  return true;
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) {
    throw std::invalid_argument("Circuit: num_qubits must be >= 1");
  }
}

Circuit& Circuit::append(Instruction inst) {
  const int arity = gate_arity(inst.kind);
  if (static_cast<int>(inst.qubits.size()) != arity) {
    throw std::invalid_argument(std::string("Circuit: ") + gate_name(inst.kind) + " expects " +
                                std::to_string(arity) + " qubit operand(s)");
  }
  for (int q : inst.qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw std::out_of_range("Circuit: qubit index " + std::to_string(q) +
                              " out of range for width " + std::to_string(num_qubits_));
    }
  }
  if (arity == 2 && inst.qubits[0] == inst.qubits[1]) {
    throw std::invalid_argument(std::string("Circuit: ") + gate_name(inst.kind) +
                                " operands must be distinct qubits");
  }
  if (inst.angle.has_value() != gate_has_angle(inst.kind)) {
    throw std::invalid_argument(std::string("Circuit: ") + gate_name(inst.kind) +
                                (gate_has_angle(inst.kind) ? " requires an angle"
                                                           : " does not take an angle"));
  }
  if (inst.kind == Gate::Delay) {
    if (inst.duration < 1) {
      throw std::invalid_argument("Circuit: DELAY duration must be >= 1 time unit");
    }
  } else {
    if (inst.duration != 0) {
      throw std::invalid_argument("Circuit: only DELAY carries a duration");
    }
    if (inst.dd_protected) {
      throw std::invalid_argument("Circuit: only DELAY can be marked dd-protected");
    }
  }
  if (inst.angle) inst.angle->collect_symbols(free_symbols_);
  instructions_.push_back(std::move(inst));
  return *this;
}

Circuit Circuit::bind(const std::map<std::string, double>& binding) const {
  Circuit out(num_qubits_);
  for (const auto& inst : instructions_) {
    Instruction copy = inst;
    if (copy.angle) copy.angle = copy.angle->substitute(binding);
    out.append(std::move(copy));
  }
  return out;
}

Circuit Circuit::inverse() const {
  if (!fully_bound()) {
    throw std::invalid_argument("Circuit: inverse requires a fully bound circuit");
  }
  Circuit out(num_qubits_);
  for (auto it = instructions_.rbegin(); it != instructions_.rend(); ++it) {
    Instruction inv = *it;
    switch (it->kind) {
      case Gate::H:
      case Gate::X:
      case Gate::Y:
      case Gate::Z:
      case Gate::CX:
      case Gate::CZ:
      case Gate::SWAP:
      case Gate::Delay:
        break;  // self-adjoint (Delay keeps its duration and protection tag)
      case Gate::S:
        inv = Instruction::rotation1(Gate::Phase, it->qubits[0], ParamExpr::constant(-kPi / 2));
        break;
      case Gate::T:
        inv = Instruction::rotation1(Gate::Phase, it->qubits[0], ParamExpr::constant(-kPi / 4));
        break;
      case Gate::RX:
      case Gate::RY:
      case Gate::RZ:
      case Gate::Phase:
      case Gate::RZZ:
      case Gate::XXplusYY:
        inv.angle = ParamExpr::constant(-it->angle->evaluate({}));
        break;
    }
    out.append(std::move(inv));
  }
  return out;
}

bool Circuit::operator==(const Circuit& other) const {
  return num_qubits_ == other.num_qubits_ && instructions_ == other.instructions_;
}

std::string Circuit::to_text() const {
  std::ostringstream out;
  out << "qubits " << num_qubits_ << '\n';
  for (const auto& inst : instructions_) {
    out << gate_name(inst.kind) << ' ';
    for (std::size_t i = 0; i < inst.qubits.size(); ++i) {
      if (i > 0) out << ',';
      out << inst.qubits[i];
    }
    if (inst.kind == Gate::Delay) {
      out << ' ' << inst.duration;
      if (inst.dd_protected) out << " dd";
    } else if (inst.angle) {
      out << ' ' << inst.angle->to_text();
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<int> parse_qubit_list(const std::string& token) {
  std::vector<int> qubits;
  std::string current;
  std::istringstream ss(token);
  while (std::getline(ss, current, ',')) {
    std::size_t used = 0;
    int q = 0;
    try {
      q = std::stoi(current, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("Circuit: malformed qubit index '" + current + "'");
    }
    if (used != current.size()) {
      throw std::invalid_argument("Circuit: malformed qubit index '" + current + "'");
    }
    qubits.push_back(q);
  }
  if (qubits.empty()) throw std::invalid_argument("Circuit: missing qubit operands");
  return qubits;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Circuit Circuit::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  Circuit out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (!have_header) {
      if (head != "qubits") {
        throw std::invalid_argument("Circuit: expected 'qubits <n>' header, got '" + line + "'");
      }
      int n = 0;
      if (!(ls >> n)) throw std::invalid_argument("Circuit: malformed qubit count");
      out = Circuit(n);
      have_header = true;
      continue;
    }
    const Gate kind = gate_from_name(head);
    std::string qubit_token;
    if (!(ls >> qubit_token)) {
      throw std::invalid_argument("Circuit: missing qubit operands in '" + line + "'");
    }
    const std::vector<int> qubits = parse_qubit_list(qubit_token);
    Instruction inst;
    inst.kind = kind;
    inst.qubits = qubits;
    if (kind == Gate::Delay) {
      int duration = 0;
      if (!(ls >> duration)) {
        throw std::invalid_argument("Circuit: DELAY requires a duration in '" + line + "'");
      }
      inst.duration = duration;
      std::string tag;
      if (ls >> tag) {
        if (tag != "dd") {
          throw std::invalid_argument("Circuit: unexpected token '" + tag + "' after DELAY");
        }
        inst.dd_protected = true;
      }
    } else if (gate_has_angle(kind)) {
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      if (rest.empty()) {
        throw std::invalid_argument("Circuit: missing angle expression in '" + line + "'");
      }
      inst.angle = ParamExpr::parse(rest);
    } else {
      std::string extra;
      if (ls >> extra) {
        throw std::invalid_argument("Circuit: unexpected token '" + extra + "' in '" + line + "'");
      }
    }
    out.append(std::move(inst));
  }
  if (!have_header) throw std::invalid_argument("Circuit: empty circuit text");
  return out;
}

Circuit compose(const Circuit& a, const Circuit& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("Circuit: compose requires equal widths (" +
                                std::to_string(a.num_qubits()) + " vs " +
                                std::to_string(b.num_qubits()) + ")");
  }
  Circuit out(a.num_qubits());
  for (const auto& inst : a.instructions()) out.append(inst);
  for (const auto& inst : b.instructions()) out.append(inst);
  return out;
}

}  // namespace qnids
