// SPDX-License-Identifier: Apache-2.0
//
// Suites for the dense statevector simulator, reference unitary
// construction, the shot sampler, the stochastic-Pauli noise model, and
// readout calibration/mitigation.
//
// Reference amplitudes and matrices were computed with an independent
// little-endian linear-algebra implementation and are embedded as exact
// decimal literals.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnids/circuit.hpp"
#include "qnids/noise.hpp"
#include "qnids/rng.hpp"
#include "qnids/sampler.hpp"
#include "qnids/statevector.hpp"
#include "qnids/unitary.hpp"

using namespace qnids;

namespace {

constexpr double kPi = 3.14159265358979323846;
const cdouble kI{0.0, 1.0};

double amp_err(const StateVector& s, const std::vector<cdouble>& expected) {
  REQUIRE(s.dim() == expected.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    worst = std::max(worst, std::abs(s.amplitude(i) - expected[i]));
  }
  return worst;
}

// Uniformly random fully bound circuit used by equivalence checks.
Circuit random_circuit(int num_qubits, int depth, Rng& rng) {
  Circuit c(num_qubits);
  const std::vector<Gate> one{Gate::H, Gate::X, Gate::Y, Gate::Z, Gate::S, Gate::T,
                              Gate::RX, Gate::RY, Gate::RZ, Gate::Phase};
  const std::vector<Gate> two{Gate::CX, Gate::CZ, Gate::RZZ, Gate::SWAP, Gate::XXplusYY};
  for (int d = 0; d < depth; ++d) {
    if (num_qubits >= 2 && rng.uniform() < 0.4) {
      const Gate g = two[rng.uniform_int(two.size())];
      int a = static_cast<int>(rng.uniform_int(num_qubits));
      int b = static_cast<int>(rng.uniform_int(num_qubits - 1));
      if (b >= a) ++b;
      if (gate_has_angle(g)) {
        c.append(Instruction::rotation2(g, a, b,
                                        ParamExpr::constant(rng.uniform(-kPi, kPi))));
      } else {
        c.append(Instruction::gate2(g, a, b));
      }
    } else {
      const Gate g = one[rng.uniform_int(one.size())];
      const int q = static_cast<int>(rng.uniform_int(num_qubits));
      if (gate_has_angle(g)) {
        c.append(Instruction::rotation1(g, q, ParamExpr::constant(rng.uniform(-kPi, kPi))));
      } else {
        c.append(Instruction::gate1(g, q));
      }
    }
  }
  return c;
}

}  // namespace

TEST_SUITE("statevector") {
  TEST_CASE("initial state is all-zeros") {
    StateVector s(3);
    CHECK(s.dim() == 8);
    CHECK(s.amplitude(0) == cdouble{1.0, 0.0});
    CHECK(s.norm() == doctest::Approx(1.0));
    CHECK(s.probability(0) == doctest::Approx(1.0));
  }

  TEST_CASE("amplitude constructor validates the dimension") {
    CHECK_THROWS_AS(StateVector(2, std::vector<cdouble>(3)), std::invalid_argument);
    StateVector s(1, {cdouble{0.6, 0.0}, cdouble{0.0, 0.8}});
    CHECK(s.probability(1) == doctest::Approx(0.64));
  }

  TEST_CASE("pauli gates act as expected on basis states") {
    StateVector s(1);
    s.apply(Instruction::gate1(Gate::X, 0));
    CHECK(amp_err(s, {0.0, 1.0}) < 1e-15);
    s.apply(Instruction::gate1(Gate::Z, 0));
    CHECK(amp_err(s, {0.0, -1.0}) < 1e-15);
    s.apply(Instruction::gate1(Gate::Y, 0));  // Y|1> = -i|0>; state was -|1>
    CHECK(amp_err(s, {kI, 0.0}) < 1e-15);
  }

  TEST_CASE("hadamard and phase family") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    StateVector s(1);
    s.apply(Instruction::gate1(Gate::H, 0));
    CHECK(amp_err(s, {inv_sqrt2, inv_sqrt2}) < 1e-15);
    s.apply(Instruction::gate1(Gate::S, 0));
    CHECK(amp_err(s, {inv_sqrt2, kI * inv_sqrt2}) < 1e-15);
    s.apply(Instruction::gate1(Gate::T, 0));  // adds another pi/4 on |1>
    CHECK(amp_err(s, {inv_sqrt2, inv_sqrt2 * std::exp(kI * (3.0 * kPi / 4.0))}) < 1e-15);
    s.apply(Instruction::rotation1(Gate::Phase, 0, ParamExpr::constant(kPi / 4.0)));
    CHECK(amp_err(s, {inv_sqrt2, -inv_sqrt2}) < 1e-14);
  }

  TEST_CASE("rotations have the half-angle convention") {
    const double theta = 0.7;
    StateVector rx(1);
    rx.apply(Instruction::rotation1(Gate::RX, 0, ParamExpr::constant(theta)));
    CHECK(amp_err(rx, {std::cos(theta / 2), -kI * std::sin(theta / 2)}) < 1e-15);

    StateVector ry(1);
    ry.apply(Instruction::rotation1(Gate::RY, 0, ParamExpr::constant(theta)));
    CHECK(amp_err(ry, {std::cos(theta / 2), std::sin(theta / 2)}) < 1e-15);

    StateVector rz(1);
    rz.apply(Instruction::gate1(Gate::H, 0));
    rz.apply(Instruction::rotation1(Gate::RZ, 0, ParamExpr::constant(theta)));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(amp_err(rz, {inv_sqrt2 * std::exp(-kI * theta / 2.0),
                       inv_sqrt2 * std::exp(kI * theta / 2.0)}) < 1e-15);
  }

  TEST_CASE("bell state via H and CX") {
    Circuit c(2);
    c.h(0).cx(0, 1);
    StateVector s = evolve(c);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(amp_err(s, {inv_sqrt2, 0.0, 0.0, inv_sqrt2}) < 1e-15);
  }

  TEST_CASE("cz flips the sign of |11> only") {
    Circuit c(2);
    c.h(0).h(1).cz(0, 1);
    StateVector s = evolve(c);
    CHECK(amp_err(s, {0.5, 0.5, 0.5, -0.5}) < 1e-15);
  }

  TEST_CASE("swap exchanges amplitudes") {
    Circuit c(2);
    c.x(0).swap(0, 1);  // |01> -> |10>
    StateVector s = evolve(c);
    CHECK(amp_err(s, {0.0, 0.0, 1.0, 0.0}) < 1e-15);
  }

  TEST_CASE("rzz applies parity-dependent phases") {
    const double theta = 0.6;
    Circuit c(2);
    c.h(0).h(1).rzz(0, 1, theta);
    StateVector s = evolve(c);
    const cdouble even = 0.5 * std::exp(-kI * theta / 2.0);
    const cdouble odd = 0.5 * std::exp(kI * theta / 2.0);
    CHECK(amp_err(s, {even, odd, odd, even}) < 1e-15);
  }

  TEST_CASE("xx_plus_yy rotates within the single-excitation subspace") {
    const double theta = 0.7;
    Circuit c(2);
    c.x(0).xx_plus_yy(0, 1, theta);  // start |01> (q0 excited)
    StateVector s = evolve(c);
    CHECK(amp_err(s, {0.0, std::cos(theta / 2.0), -kI * std::sin(theta / 2.0), 0.0}) < 1e-15);
    // |00> and |11> are untouched.
    Circuit id(2);
    id.xx_plus_yy(0, 1, theta);
    CHECK(amp_err(evolve(id), {1.0, 0.0, 0.0, 0.0}) < 1e-15);
  }

  TEST_CASE("delay is a noiseless identity") {
    Circuit c(2);
    c.h(0).delay(0, 5).delay(1, 3).cx(0, 1);
    Circuit no_delay(2);
    no_delay.h(0).cx(0, 1);
    CHECK(amp_err(evolve(c), evolve(no_delay).amplitudes()) < 1e-15);
  }

  TEST_CASE("apply rejects symbolic angles") {
    StateVector s(1);
    CHECK_THROWS(s.apply(Instruction::rotation1(Gate::RX, 0, ParamExpr::symbol("t"))));
  }

  TEST_CASE("apply_pauli matches the gate path") {
    for (char p : {'X', 'Y', 'Z'}) {
      Circuit prep(2);
      prep.h(0).t(0).cx(0, 1);
      StateVector a = evolve(prep);
      StateVector b = evolve(prep);
      a.apply_pauli(p, 1);
      b.apply(Instruction::gate1(p == 'X'   ? Gate::X
                                 : p == 'Y' ? Gate::Y
                                            : Gate::Z,
                                 1));
      CHECK(amp_err(a, b.amplitudes()) < 1e-15);
    }
    StateVector s(1);
    CHECK_THROWS(s.apply_pauli('Q', 0));
  }

  TEST_CASE("norm is preserved by long random circuits") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      Circuit c = random_circuit(4, 60, rng);
      CHECK(evolve(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("evolve can start from a supplied initial state") {
    Circuit prep(2);
    prep.h(0).cx(0, 1);
    StateVector bell = evolve(prep);
    Circuit undo = prep.inverse();
    StateVector back = evolve(undo, bell);
    CHECK(amp_err(back, {1.0, 0.0, 0.0, 0.0}) < 1e-14);
  }

  TEST_CASE("evolve enforces the width cap") {
    Circuit c(3);
    c.h(0);
    CHECK_THROWS(evolve(c, /*max_qubits=*/2));
  }

  TEST_CASE("inner products") {
    Circuit prep(2);
    prep.h(0).cx(0, 1);
    StateVector bell = evolve(prep);
    CHECK(std::abs(StateVector::inner(bell, bell) - cdouble{1.0, 0.0}) < 1e-15);
    StateVector zero(2);
    CHECK(std::abs(StateVector::inner(zero, bell) - cdouble{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
    StateVector narrow(1);
    CHECK_THROWS(StateVector::inner(zero, narrow));
  }
}

TEST_SUITE("observables") {
  TEST_CASE("z expectation on basis and superposition states") {
    StateVector zero(1);
    CHECK(expectation_z_mask(zero, 1) == doctest::Approx(1.0));
    StateVector one(1);
    one.apply(Instruction::gate1(Gate::X, 0));
    CHECK(expectation_z_mask(one, 1) == doctest::Approx(-1.0));
    Circuit c(1);
    c.ry(0, 0.9);
    CHECK(expectation_z_mask(evolve(c), 1) == doctest::Approx(std::cos(0.9)));
    Circuit plus(1);
    plus.h(0);
    CHECK(expectation_z_mask(evolve(plus), 1) == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("multi-qubit parity masks") {
    Circuit c(2);
    c.h(0).cx(0, 1);  // Bell: <Z0 Z1> = 1, <Z0> = <Z1> = 0
    StateVector bell = evolve(c);
    CHECK(expectation_z_mask(bell, 0b11) == doctest::Approx(1.0));
    CHECK(expectation_z_mask(bell, 0b01) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(expectation_z_mask(bell, 0b10) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(expectation_z_mask(bell, 0) == doctest::Approx(1.0));
  }

  TEST_CASE("observable strings use qubit n-1 leftmost") {
    Circuit c(2);
    c.x(0);  // |01>: q0 = 1, q1 = 0
    StateVector s = evolve(c);
    CHECK(expectation_z(s, "IZ") == doctest::Approx(-1.0));  // Z on qubit 0
    CHECK(expectation_z(s, "ZI") == doctest::Approx(1.0));   // Z on qubit 1
    CHECK(expectation_z(s, "ZZ") == doctest::Approx(-1.0));
    CHECK(z_mask_from_string("IZ", 2) == 1);
    CHECK(z_mask_from_string("ZI", 2) == 2);
    CHECK_THROWS(z_mask_from_string("XA", 2));
    CHECK_THROWS(z_mask_from_string("Z", 2));  // wrong length
  }

  TEST_CASE("bitstring helpers are inverse bijections") {
    CHECK(index_to_bitstring(6, 3) == "110");
    CHECK(index_to_bitstring(1, 3) == "001");
    CHECK(bitstring_to_index("110") == 6);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(bitstring_to_index(index_to_bitstring(i, 4)) == i);
    }
  }
}

TEST_SUITE("unitary") {
  TEST_CASE("gate_matrix of H is the normalized 2x2 DFT") {
    Eigen::MatrixXcd h = gate_matrix(Instruction::gate1(Gate::H, 0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(h(0, 0) - cdouble{inv_sqrt2, 0.0}) < 1e-15);
    CHECK(std::abs(h(1, 1) + cdouble{inv_sqrt2, 0.0}) < 1e-15);
  }

  TEST_CASE("gate_matrix CX uses the documented local basis order") {
    // Local index = (bit of qubits[1]) << 1 | (bit of qubits[0]); with
    // qubits = [control, target] the swapped columns are 1 and 3.
    Eigen::MatrixXcd cx = gate_matrix(Instruction::gate2(Gate::CX, 0, 1));
    CHECK(std::abs(cx(0, 0) - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(cx(2, 2) - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(cx(3, 1) - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(cx(1, 3) - cdouble{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(cx(1, 1)) < 1e-15);
  }

  TEST_CASE("embed_gate matches direct state application") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      Circuit c = random_circuit(3, 1, rng);
      if (c.size() == 0) continue;
      const Instruction& inst = c.instructions()[0];
      Eigen::MatrixXcd g = embed_gate(inst, 3);
      // Compare action on a random product-ish state built by a circuit.
      Circuit prep = random_circuit(3, 6, rng);
      StateVector s = evolve(prep);
      Eigen::VectorXcd v(8);
      for (int i = 0; i < 8; ++i) v(i) = s.amplitude(i);
      Eigen::VectorXcd expected = g * v;
      s.apply(inst);
      for (int i = 0; i < 8; ++i) CHECK(std::abs(s.amplitude(i) - expected(i)) < 1e-12);
    }
  }

  TEST_CASE("mixed two-qubit circuit matches the reference matrix") {
    // Circuit: H q0; CX q0->q1; RZ(0.5) q1; SWAP q0,q1.
    Circuit c(2);
    c.h(0).cx(0, 1).rz(1, 0.5).swap(0, 1);
    Eigen::MatrixXcd u = unitary_of(c);
    const double a = 0.685124543767477;   // cos(0.25)/sqrt(2)
    const double b = 0.174941017281273;   // sin(0.25)/sqrt(2)
    Eigen::MatrixXcd expected(4, 4);
    expected.setZero();
    expected(0, 0) = cdouble{a, -b};
    expected(0, 1) = cdouble{a, -b};
    expected(1, 2) = cdouble{a, b};
    expected(1, 3) = cdouble{a, b};
    expected(2, 2) = cdouble{a, -b};
    expected(2, 3) = cdouble{-a, b};
    expected(3, 0) = cdouble{a, b};
    expected(3, 1) = cdouble{-a, -b};
    CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("unitary column zero equals evolved amplitudes") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(3));
      Circuit c = random_circuit(n, 25, rng);
      Eigen::MatrixXcd u = unitary_of(c);
      StateVector s = evolve(c);
      for (int i = 0; i < (1 << n); ++i) {
        CHECK(std::abs(u(i, 0) - s.amplitude(i)) < 1e-10);
      }
      // Unitarity: U U^dagger = I.
      Eigen::MatrixXcd gram = u * u.adjoint();
      CHECK((gram - Eigen::MatrixXcd::Identity(1 << n, 1 << n)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("inverse circuit yields the adjoint unitary") {
    Rng rng(37);
    Circuit c = random_circuit(3, 30, rng);
    Eigen::MatrixXcd u = unitary_of(c);
    Eigen::MatrixXcd v = unitary_of(c.inverse());
    CHECK((v - u.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("layout permutation moves input bit q to output bit layout[q]") {
    Eigen::MatrixXcd p = layout_permutation_matrix({1, 0});
    // This is the SWAP matrix.
    Eigen::MatrixXcd swap = gate_matrix(Instruction::gate2(Gate::SWAP, 0, 1));
    CHECK((p - swap).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::MatrixXcd q = layout_permutation_matrix({2, 0, 1});
    // Input index 1 (bit 0 set) -> output bit 2 set -> index 4.
    CHECK(std::abs(q(4, 1) - cdouble{1.0, 0.0}) < 1e-15);
    // Input index 2 (bit 1 set) -> output bit 0 set -> index 1.
    CHECK(std::abs(q(1, 2) - cdouble{1.0, 0.0}) < 1e-15);
    CHECK_THROWS(layout_permutation_matrix({0, 0}));
  }

  TEST_CASE("distance up to phase ignores global phase only") {
    Rng rng(41);
    Circuit c = random_circuit(3, 20, rng);
    Eigen::MatrixXcd u = unitary_of(c);
    Eigen::MatrixXcd phased = std::exp(kI * 1.234) * u;
    CHECK(unitary_distance_up_to_phase(u, phased) < 1e-12);
    Circuit other = random_circuit(3, 20, rng);
    Eigen::MatrixXcd v = unitary_of(other);
    CHECK(unitary_distance_up_to_phase(u, v) > 1e-3);
  }

  TEST_CASE("width cap rejects oversized circuits") {
    Circuit c(kMaxUnitaryQubits + 1);
    c.h(0);
    CHECK_THROWS(unitary_of(c));
  }
}

TEST_SUITE("counts") {
  TEST_CASE("histogram accessors and distribution") {
    Counts counts;
    counts.num_qubits = 2;
    counts.shots = 10;
    counts.histogram = {{"00", 7}, {"11", 3}};
    CHECK(counts.at("00") == 7);
    CHECK(counts.at("01") == 0);
    auto dist = counts.distribution();
    CHECK(dist["00"] == doctest::Approx(0.7));
    CHECK(dist["11"] == doctest::Approx(0.3));
  }

  TEST_CASE("json round-trip preserves everything") {
    Counts counts;
    counts.num_qubits = 3;
    counts.shots = 12;
    counts.histogram = {{"000", 5}, {"101", 4}, {"111", 3}};
    Counts back = Counts::from_json(counts.to_json());
    CHECK(back.shots == counts.shots);
    CHECK(back.num_qubits == counts.num_qubits);
    CHECK(back.histogram == counts.histogram);
  }

  TEST_CASE("quasi distribution expectation handles negative entries") {
    QuasiDistribution q;
    q.probs = {{"00", 1.05}, {"01", -0.05}};
    CHECK(q.sum() == doctest::Approx(1.0));
    CHECK(q.at("01") == doctest::Approx(-0.05));
    CHECK(q.at("10") == 0.0);
    // <Z on qubit 0>: "00" contributes +1.05, "01" has qubit0 = 1 -> -(-0.05).
    CHECK(q.expectation_z_mask(0b01, 2) == doctest::Approx(1.05 + 0.05));
  }

  TEST_CASE("tv distance basics") {
    std::map<std::string, double> a{{"0", 1.0}};
    std::map<std::string, double> b{{"1", 1.0}};
    CHECK(tv_distance(a, a) == doctest::Approx(0.0));
    CHECK(tv_distance(a, b) == doctest::Approx(1.0));
    std::map<std::string, double> c{{"0", 0.5}, {"1", 0.5}};
    CHECK(tv_distance(a, c) == doctest::Approx(0.5));
  }
}

TEST_SUITE("sampler") {
  TEST_CASE("identical seeds give identical counts") {
    Circuit c(2);
    c.h(0).cx(0, 1);
    Counts a = sample(c, 500, nullptr, 7);
    Counts b = sample(c, 500, nullptr, 7);
    CHECK(a.histogram == b.histogram);
    Counts other = sample(c, 500, nullptr, 8);
    CHECK(a.histogram != other.histogram);
  }

  TEST_CASE("deterministic circuits sample deterministically") {
    Circuit c(2);
    c.x(0).x(1);
    Counts counts = sample(c, 100, nullptr, 1);
    CHECK(counts.at("11") == 100);
    CHECK(counts.histogram.size() == 1);
  }

  TEST_CASE("bell sampling is close to the ideal distribution") {
    Circuit c(2);
    c.h(0).cx(0, 1);
    Counts counts = sample(c, 20000, nullptr, 99);
    CHECK(counts.at("01") == 0);
    CHECK(counts.at("10") == 0);
    std::map<std::string, double> ideal{{"00", 0.5}, {"11", 0.5}};
    CHECK(tv_distance(counts.distribution(), ideal) < 0.03);
  }

  TEST_CASE("sampling can start from a supplied initial state") {
    Circuit prep(2);
    prep.h(0).cx(0, 1);
    StateVector bell = evolve(prep);
    Circuit empty(2);
    Counts counts = sample(empty, 2000, nullptr, 5, &bell);
    CHECK(counts.at("01") == 0);
    CHECK(counts.at("00") + counts.at("11") == 2000);
  }

  TEST_CASE("readout confusion flips measured bits at the configured rate") {
    Circuit c(1);  // stays in |0>
    NoiseModel noise = NoiseModel::readout_only(0.1, 0.0, 1);
    Counts counts = sample(c, 20000, &noise, 3);
    const double frac_one = static_cast<double>(counts.at("1")) / counts.shots;
    CHECK(frac_one == doctest::Approx(0.1).epsilon(0.15));
  }

  TEST_CASE("single-qubit depolarizing keeps |1> with probability 1/3 at p1 = 1") {
    // After X with a guaranteed uniform Pauli error, only the Z branch
    // leaves the measurement statistics at |1>.
    Circuit c(1);
    c.x(0);
    NoiseModel noise = NoiseModel::depolarizing(1.0, 0.0);
    Counts counts = sample(c, 30000, &noise, 11);
    const double frac_one = static_cast<double>(counts.at("1")) / counts.shots;
    CHECK(frac_one == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  }

  TEST_CASE("two-qubit depolarizing spreads over the documented pair set") {
    // A guaranteed error after the Bell CX preserves the 00/11 parity for
    // exactly 7 of the 15 non-identity Pauli pairs.
    Circuit c(2);
    c.h(0).cx(0, 1);
    NoiseModel noise = NoiseModel::depolarizing(0.0, 1.0);
    Counts counts = sample(c, 30000, &noise, 13);
    const double parity_even =
        static_cast<double>(counts.at("00") + counts.at("11")) / counts.shots;
    CHECK(parity_even == doctest::Approx(7.0 / 15.0).epsilon(0.05));
  }

  TEST_CASE("idle dephasing acts per delay time unit") {
    // H . Delay . H maps a guaranteed Z error to a deterministic |1>.
    Circuit c(1);
    c.h(0).delay(0, 1).h(0);
    NoiseModel noise;
    noise.p_idle = 1.0;
    Counts counts = sample(c, 500, &noise, 17);
    CHECK(counts.at("1") == 500);
    // Two time units: Z twice = identity.
    Circuit c2(1);
    c2.h(0).delay(0, 2).h(0);
    Counts counts2 = sample(c2, 500, &noise, 17);
    CHECK(counts2.at("0") == 500);
  }

  TEST_CASE("protected delays use the reduced idle rate") {
    Circuit c(1);
    c.h(0);
    c.append(Instruction::delay(0, 1, /*dd_protected=*/true));
    c.h(0);
    NoiseModel noise;
    noise.p_idle = 1.0;
    noise.dd_idle_factor = 0.0;  // fully suppressed on protected delays
    Counts counts = sample(c, 500, &noise, 19);
    CHECK(counts.at("0") == 500);
  }

  TEST_CASE("noisy trajectory with zero rates equals the ideal state") {
    Circuit c(2);
    c.h(0).cx(0, 1).rz(1, 0.3);
    NoiseModel noise;  // all rates zero
    Rng rng(5);
    StateVector noisy = noisy_trajectory(c, noise, rng);
    StateVector ideal = evolve(c);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(noisy.amplitude(i) - ideal.amplitude(i)) < 1e-15);
    }
  }
}

TEST_SUITE("noise_model") {
  TEST_CASE("from_params builds per-qubit readout rows") {
    NoiseParams p;
    p.p1 = 0.01;
    p.p2 = 0.05;
    p.readout_p10 = 0.02;
    p.readout_p01 = 0.03;
    p.p_idle = 0.001;
    NoiseModel m = NoiseModel::from_params(p, 3);
    CHECK(m.p1 == 0.01);
    CHECK(m.readout.size() == 3);
    CHECK(m.has_gate_noise());
    CHECK(m.has_idle_noise());
    CHECK(m.has_readout_noise());
    Confusion c = m.confusion(1);
    CHECK(c.m[0][1] == doctest::Approx(0.02));
    CHECK(c.m[1][0] == doctest::Approx(0.03));
    CHECK(c.m[0][0] == doctest::Approx(0.98));
    CHECK_THROWS_AS(NoiseModel::from_params(p, 0), std::invalid_argument);
  }

  TEST_CASE("confusion defaults to identity when not configured") {
    NoiseModel m;
    CHECK(m.confusion(5).is_identity());
    CHECK_FALSE(m.has_readout_noise());
    CHECK_THROWS_AS(m.confusion(-1), std::out_of_range);
  }

  TEST_CASE("validate rejects out-of-range probabilities") {
    NoiseModel m;
    m.p1 = -0.1;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.p1 = 1.5;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.p1 = 0.5;
    m.dd_idle_factor = 2.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  }

  TEST_CASE("confusion matrix inverse and singularity guard") {
    Confusion c = Confusion::from_error_rates(0.1, 0.2);
    CHECK(c.determinant() == doctest::Approx(0.7));
    Confusion inv = c.inverse_unchecked_rows();
    // c * inv should be the identity.
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (int k = 0; k < 2; ++k) sum += c.m[i][k] * inv.m[k][j];
        CHECK(sum == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
    Confusion singular = Confusion::from_error_rates(0.5, 0.5);
    CHECK_THROWS_AS(singular.inverse_unchecked_rows(), std::invalid_argument);
    CHECK_THROWS_AS(Confusion::from_error_rates(-0.1, 0.0), std::invalid_argument);
  }

  TEST_CASE("builtin presets are ordered by severity") {
    const auto& presets = builtin_noise_presets();
    const std::vector<std::string> order{"ideal",         "cairo_like",    "kyoto_like",
                                         "brisbane_like", "osaka_like",    "sherbrooke_like"};
    for (const std::string& name : order) CHECK(presets.count(name) == 1);
    double prev_p1 = -1.0;
    for (const std::string& name : order) {
      const NoiseParams& p = presets.at(name);
      CHECK(p.p1 >= prev_p1);
      prev_p1 = p.p1;
    }
    CHECK(presets.at("ideal").p1 == 0.0);
    CHECK_THROWS(noise_preset("not_a_backend"));
    CHECK(noise_preset("cairo_like").p1 == presets.at("cairo_like").p1);
  }

  TEST_CASE("presets load from a json file") {
    const std::string path = "/tmp/qnids_test_presets.json";
    {
      std::ofstream out(path);
      out << R"({"custom": {"p1": 0.002, "p2": 0.01, "readout_p10": 0.01,)"
          << R"( "readout_p01": 0.02, "p_idle": 0.0005}})";
    }
    auto presets = load_noise_presets(path);
    CHECK(presets.size() == 1);
    CHECK(presets.at("custom").p2 == doctest::Approx(0.01));
    std::remove(path.c_str());
    CHECK_THROWS(load_noise_presets("/tmp/does_not_exist_qnids.json"));
  }
}

TEST_SUITE("mitigation") {
  TEST_CASE("calibration estimates the configured error rates") {
    NoiseModel noise = NoiseModel::readout_only(0.08, 0.04, 2);
    auto calibration = calibrate_readout(noise, 20000, 31);
    REQUIRE(calibration.size() == 2);
    for (const Confusion& c : calibration) {
      CHECK(c.m[0][1] == doctest::Approx(0.08).epsilon(0.2));
      CHECK(c.m[1][0] == doctest::Approx(0.04).epsilon(0.3));
    }
  }

  TEST_CASE("mitigation inverts an exactly-known confusion") {
    // Push an ideal Bell distribution through per-qubit confusion matrices
    // analytically, then mitigate with the exact calibration: the ideal
    // distribution must come back to machine precision.
    const Confusion c0 = Confusion::from_error_rates(0.05, 0.03);
    const Confusion c1 = Confusion::from_error_rates(0.02, 0.07);
    std::map<std::string, double> ideal{{"00", 0.5}, {"11", 0.5}};
    std::map<std::string, double> corrupted;
    for (const auto& [key, p] : ideal) {
      const int b0 = key[1] - '0';  // qubit 0 is the rightmost character
      const int b1 = key[0] - '0';
      for (int o0 = 0; o0 < 2; ++o0) {
        for (int o1 = 0; o1 < 2; ++o1) {
          const double w = c0.m[b0][o0] * c1.m[b1][o1];
          std::string out = {static_cast<char>('0' + o1), static_cast<char>('0' + o0)};
          corrupted[out] += p * w;
        }
      }
    }
    QuasiDistribution repaired = mitigate_distribution(corrupted, 2, {c0, c1});
    CHECK(repaired.at("00") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(repaired.at("11") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(repaired.at("01")) < 1e-9);
    CHECK(std::abs(repaired.at("10")) < 1e-9);
    CHECK(repaired.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("mitigating sampled counts reduces the distance to ideal") {
    Circuit c(2);
    c.h(0).cx(0, 1);
    NoiseModel noise = NoiseModel::readout_only(0.05, 0.05, 2);
    Counts counts = sample(c, 20000, &noise, 77);
    auto calibration = calibrate_readout(noise, 20000, 78);
    QuasiDistribution mitigated = mitigate(counts, calibration);
    std::map<std::string, double> ideal{{"00", 0.5}, {"11", 0.5}};
    const double raw_tv = tv_distance(counts.distribution(), ideal);
    const double fixed_tv = tv_distance(mitigated.probs, ideal);
    CHECK(fixed_tv < raw_tv);
    CHECK(mitigated.sum() == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("identity calibration is a no-op") {
    Counts counts;
    counts.num_qubits = 1;
    counts.shots = 10;
    counts.histogram = {{"0", 6}, {"1", 4}};
    QuasiDistribution q = mitigate(counts, {Confusion{}});
    CHECK(q.at("0") == doctest::Approx(0.6));
    CHECK(q.at("1") == doctest::Approx(0.4));
  }
}
