// SPDX-License-Identifier: Apache-2.0
#include "qnids/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qnids {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
const cdouble kI(0.0, 1.0);

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxEvolveQubits) {
    throw std::invalid_argument("StateVector: width must be in [1, " +
                                std::to_string(kMaxEvolveQubits) + "]");
  }
  amps_.assign(std::size_t{1} << num_qubits, cdouble(0.0, 0.0));
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<cdouble> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits < 1 || num_qubits > kMaxEvolveQubits) {
    throw std::invalid_argument("StateVector: width must be in [1, " +
                                std::to_string(kMaxEvolveQubits) + "]");
  }
  if (amps_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count must be 2^num_qubits");
  }
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::apply_1q(const cdouble m00, const cdouble m01, const cdouble m10,
                           const cdouble m11, int target) {
  const std::size_t mask = std::size_t{1} << target;
  const std::size_t lo_mask = mask - 1;
  const std::size_t hi_mask = ~lo_mask;
  const std::size_t half = amps_.size() >> 1;
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
    const std::size_t i1 = i0 | mask;
    const cdouble a0 = amps_[i0];
    const cdouble a1 = amps_[i1];
    amps_[i0] = m00 * a0 + m01 * a1;
    amps_[i1] = m10 * a0 + m11 * a1;
  }
}

void StateVector::apply_cx(int control, int target) {
  const std::size_t cb = std::size_t{1} << control;
  const std::size_t tb = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cb) && !(i & tb)) std::swap(amps_[i], amps_[i | tb]);
  }
}

void StateVector::apply_cz(int a, int b) {
  const std::size_t ab = std::size_t{1} << a;
  const std::size_t bb = std::size_t{1} << b;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & ab) && (i & bb)) amps_[i] = -amps_[i];
  }
}

void StateVector::apply_swap(int a, int b) {
  const std::size_t ab = std::size_t{1} << a;
  const std::size_t bb = std::size_t{1} << b;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & ab) && !(i & bb)) std::swap(amps_[i], amps_[(i & ~ab) | bb]);
  }
}

void StateVector::apply_rzz(double theta, int a, int b) {
  const std::size_t ab = std::size_t{1} << a;
  const std::size_t bb = std::size_t{1} << b;
  const cdouble same = std::exp(-kI * (theta / 2.0));
  const cdouble diff = std::exp(kI * (theta / 2.0));
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const bool ba = (i & ab) != 0;
    const bool bbit = (i & bb) != 0;
    amps_[i] *= (ba == bbit) ? same : diff;
  }
}

void StateVector::apply_xx_plus_yy(double theta, int a, int b) {
  const std::size_t ab = std::size_t{1} << a;
  const std::size_t bb = std::size_t{1} << b;
  const double c = std::cos(theta / 2.0);
  const cdouble s = -kI * std::sin(theta / 2.0);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & ab) && !(i & bb)) {
      const std::size_t j = (i & ~ab) | bb;  // partner with the excitation moved
      const cdouble u = amps_[i];
      const cdouble v = amps_[j];
      amps_[i] = c * u + s * v;
      amps_[j] = s * u + c * v;
    }
  }
}

void StateVector::apply(const Instruction& inst) {
  if (inst.angle && !inst.angle->is_constant()) {
    throw std::invalid_argument("StateVector: instruction has unbound angle");
  }
  for (int q : inst.qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw std::out_of_range("StateVector: qubit index out of range");
    }
  }
  const double angle = inst.angle ? inst.angle->constant_value() : 0.0;
  switch (inst.kind) {
    case Gate::H: {
      const double s = 1.0 / std::sqrt(2.0);
      apply_1q(s, s, s, -s, inst.qubits[0]);
      return;
    }
    case Gate::X:
      apply_1q(0.0, 1.0, 1.0, 0.0, inst.qubits[0]);
      return;
    case Gate::Y:
      apply_1q(0.0, -kI, kI, 0.0, inst.qubits[0]);
      return;
    case Gate::Z:
      apply_1q(1.0, 0.0, 0.0, -1.0, inst.qubits[0]);
      return;
    case Gate::S:
      apply_1q(1.0, 0.0, 0.0, kI, inst.qubits[0]);
      return;
    case Gate::T:
      apply_1q(1.0, 0.0, 0.0, std::exp(kI * (kPi / 4.0)), inst.qubits[0]);
      return;
    case Gate::RX: {
      const double t = angle / 2.0;
      apply_1q(std::cos(t), -kI * std::sin(t), -kI * std::sin(t), std::cos(t), inst.qubits[0]);
      return;
    }
    case Gate::RY: {
      const double t = angle / 2.0;
      apply_1q(std::cos(t), -std::sin(t), std::sin(t), std::cos(t), inst.qubits[0]);
      return;
    }
    case Gate::RZ: {
      const double t = angle / 2.0;
      apply_1q(std::exp(-kI * t), 0.0, 0.0, std::exp(kI * t), inst.qubits[0]);
      return;
    }
    case Gate::Phase:
      apply_1q(1.0, 0.0, 0.0, std::exp(kI * angle), inst.qubits[0]);
      return;
    case Gate::CX:
      apply_cx(inst.qubits[0], inst.qubits[1]);
      return;
    case Gate::CZ:
      apply_cz(inst.qubits[0], inst.qubits[1]);
      return;
    case Gate::RZZ:
      apply_rzz(angle, inst.qubits[0], inst.qubits[1]);
      return;
    case Gate::SWAP:
      apply_swap(inst.qubits[0], inst.qubits[1]);
      return;
    case Gate::XXplusYY:
      apply_xx_plus_yy(angle, inst.qubits[0], inst.qubits[1]);
      return;
    case Gate::Delay:
      return;  // noiseless identity; the sampler charges idle error
  }
  throw std::logic_error("StateVector: unknown gate kind");
}

void StateVector::apply_pauli(char pauli, int qubit) {
  switch (pauli) {
    case 'X':
      apply_1q(0.0, 1.0, 1.0, 0.0, qubit);
      return;
    case 'Y':
      apply_1q(0.0, -kI, kI, 0.0, qubit);
      return;
    case 'Z':
      apply_1q(1.0, 0.0, 0.0, -1.0, qubit);
      return;
    default:
      throw std::invalid_argument(std::string("StateVector: unknown Pauli '") + pauli + "'");
  }
}

cdouble StateVector::inner(const StateVector& a, const StateVector& b) {
  if (a.num_qubits_ != b.num_qubits_) {
    throw std::invalid_argument("StateVector: inner product requires equal widths");
  }
  cdouble acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.amps_.size(); ++i) {
    acc += std::conj(a.amps_[i]) * b.amps_[i];
  }
  return acc;
}

StateVector evolve(const Circuit& circuit, int max_qubits) {
  return evolve(circuit, StateVector(circuit.num_qubits()), max_qubits);
}

StateVector evolve(const Circuit& circuit, const StateVector& initial, int max_qubits) {
  if (!circuit.fully_bound()) {
    throw std::invalid_argument("evolve: circuit has unbound symbols");
  }
  if (circuit.num_qubits() > max_qubits) {
    throw std::invalid_argument("evolve: width " + std::to_string(circuit.num_qubits()) +
                                " exceeds the cap of " + std::to_string(max_qubits));
  }
  if (initial.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("evolve: initial state width mismatch");
  }
  StateVector state = initial;
  for (const auto& inst : circuit.instructions()) state.apply(inst);
  return state;
}

double expectation_z_mask(const StateVector& state, std::uint64_t mask) {
  if (state.num_qubits() < 64 && (mask >> state.num_qubits()) != 0) {
    throw std::invalid_argument("expectation_z_mask: mask addresses qubits beyond width");
  }
  double acc = 0.0;
  const auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const int parity = std::popcount(i & mask) & 1;
    acc += (parity ? -1.0 : 1.0) * std::norm(amps[i]);
  }
  return acc;
}

std::uint64_t z_mask_from_string(const std::string& observable, int num_qubits) {
  if (static_cast<int>(observable.size()) != num_qubits) {
    throw std::invalid_argument("observable length must equal the qubit count");
  }
  std::uint64_t mask = 0;
  for (int i = 0; i < num_qubits; ++i) {
    const char c = observable[i];
    const int qubit = num_qubits - 1 - i;
    if (c == 'Z') {
      mask |= std::uint64_t{1} << qubit;
    } else if (c != 'I') {
      throw std::invalid_argument(std::string("observable characters must be 'I' or 'Z', got '") +
                                  c + "'");
    }
  }
  return mask;
}

double expectation_z(const StateVector& state, const std::string& observable) {
  return expectation_z_mask(state, z_mask_from_string(observable, state.num_qubits()));
}

std::string index_to_bitstring(std::size_t index, int num_qubits) {
  std::string bits(num_qubits, '0');
  for (int q = 0; q < num_qubits; ++q) {
    if (index & (std::size_t{1} << q)) bits[num_qubits - 1 - q] = '1';
  }
  return bits;
}

std::size_t bitstring_to_index(const std::string& bits) {
  std::size_t index = 0;
  const int n = static_cast<int>(bits.size());
  for (int i = 0; i < n; ++i) {
    const char c = bits[i];
    if (c == '1') {
      index |= std::size_t{1} << (n - 1 - i);
    } else if (c != '0') {
      throw std::invalid_argument("bitstring characters must be '0' or '1'");
    }
  }
  return index;
}

}  // namespace qnids
