// SPDX-License-Identifier: Apache-2.0
//
// Suites for fidelity kernel matrices, the sequential-minimal-optimization
// dual solver, the classical kernel baselines and random forest, and the
// execution layer that turns circuits into expectation estimates.

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnids/baselines.hpp"
#include "qnids/circuit.hpp"
#include "qnids/executor.hpp"
#include "qnids/feature_map.hpp"
#include "qnids/kernel.hpp"
#include "qnids/noise.hpp"
#include "qnids/rng.hpp"
#include "qnids/statevector.hpp"
#include "qnids/svm.hpp"
#include "qnids/unitary.hpp"

using namespace qnids;

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix random_points(int count, int dim, std::uint64_t seed, double lo = 0.0, double hi = kPi) {
  Rng rng(seed);
  Matrix x(count, std::vector<double>(dim));
  for (auto& row : x) {
    for (double& v : row) v = rng.uniform(lo, hi);
  }
  return x;
}

double min_eigenvalue(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = m[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
  return solver.eigenvalues().minCoeff();
}

Executor exact_executor() {
  EvalMode mode;
  mode.exec = ExecMode::Exact;
  return Executor(mode);
}

// Four-cluster parity data: label +1 when the two coordinates share a sign.
void xor_points(int per_quadrant, std::uint64_t seed, Matrix& x, std::vector<int>& y) {
  Rng rng(seed);
  x.clear();
  y.clear();
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int i = 0; i < per_quadrant; ++i) {
        x.push_back({sx * rng.uniform(0.2, 1.0), sy * rng.uniform(0.2, 1.0)});
        y.push_back(sx == sy ? 1 : -1);
      }
    }
  }
}

}  // namespace

TEST_SUITE("kernel_exact") {
  TEST_CASE("gram matrices are symmetric with a unit diagonal and PSD") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::ZZFeatureMap;
    spec.num_qubits = 2;
    spec.reps = 2;
    Executor exec = exact_executor();
    Matrix x = random_points(10, 2, 42);
    KernelMatrix k = kernel_matrix(spec, x, exec);
    REQUIRE(k.rows() == 10);
    REQUIRE(k.cols() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(k.values[i][i] == doctest::Approx(1.0).epsilon(1e-9));
      for (std::size_t j = 0; j < 10; ++j) {
        CHECK(k.values[i][j] == doctest::Approx(k.values[j][i]).epsilon(1e-9));
        CHECK(k.values[i][j] >= -1e-12);
        CHECK(k.values[i][j] <= 1.0 + 1e-9);
      }
    }
    CHECK(min_eigenvalue(k.values) >= -1e-8);
  }

  TEST_CASE("a known entry matches the reference overlap") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::ZZFeatureMap;
    spec.num_qubits = 2;
    spec.reps = 2;
    Executor exec = exact_executor();
    Matrix x{{1.1, 0.2}, {0.3, 0.7}};
    KernelMatrix k = kernel_matrix(spec, x, exec);
    CHECK(k.values[0][1] == doctest::Approx(0.269017924337275).epsilon(1e-10));
  }

  TEST_CASE("cross blocks agree with the square gram") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::ZFeatureMap;
    spec.num_qubits = 3;
    spec.reps = 1;
    Executor exec = exact_executor();
    Matrix x = random_points(6, 3, 7);
    KernelMatrix square = kernel_matrix(spec, x, exec);
    KernelMatrix cross = kernel_cross(spec, x, x, exec);
    REQUIRE(cross.rows() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        CHECK(cross.values[i][j] == doctest::Approx(square.values[i][j]).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("amplitude encoding gives geometric overlaps") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::RawFeatureVector;
    spec.num_qubits = 1;
    Executor exec = exact_executor();
    Matrix x{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    KernelMatrix k = kernel_matrix(spec, x, exec);
    CHECK(k.values[0][1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(k.values[0][2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k.values[2][2] == doctest::Approx(1.0));
  }
}

TEST_SUITE("kernel_shots") {
  TEST_CASE("sampled kernels approach the exact values") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::ZZFeatureMap;
    spec.num_qubits = 2;
    spec.reps = 1;
    Matrix x = random_points(5, 2, 12);
    KernelMatrix exact = kernel_matrix(spec, x, exact_executor());
    EvalMode mode;
    mode.exec = ExecMode::Shots;
    mode.shots = 4096;
    mode.seed = 5;
    Executor shots(mode);
    KernelMatrix sampled = kernel_matrix(spec, x, shots);
    CHECK(sampled.mode == ExecMode::Shots);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(std::abs(sampled.values[i][j] - exact.values[i][j]) < 0.06);
      }
    }
  }

  TEST_CASE("sampled kernel runs are deterministic in the seed") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::ZFeatureMap;
    spec.num_qubits = 2;
    spec.reps = 1;
    Matrix x = random_points(3, 2, 3);
    EvalMode mode;
    mode.exec = ExecMode::Shots;
    mode.shots = 512;
    mode.seed = 9;
    KernelMatrix a = kernel_matrix(spec, x, Executor(mode));
    KernelMatrix b = kernel_matrix(spec, x, Executor(mode));
    CHECK(a.values == b.values);
  }

  TEST_CASE("amplitude encoding rejects shot-based estimation") {
    FeatureMapSpec spec;
    spec.kind = FeatureMapKind::RawFeatureVector;
    spec.num_qubits = 1;
    EvalMode mode;
    mode.exec = ExecMode::Shots;
    Executor exec(mode);
    Matrix x{{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS(kernel_matrix(spec, x, exec));
  }
}

TEST_SUITE("svm_dual") {
  TEST_CASE("identity gram with one sample per class has the textbook solution") {
    Matrix gram{{1.0, 0.0}, {0.0, 1.0}};
    std::vector<int> y{1, -1};
    SvmDual dual = svm_fit(gram, y, 1.0);
    REQUIRE(dual.support_indices.size() == 2);
    CHECK(dual.coeffs[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dual.coeffs[1] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(dual.b == doctest::Approx(0.0).epsilon(1e-6));
    // Decision for a point with kernel row (0.9, 0.1): 0.9 - 0.1 = 0.8.
    CHECK(svm_decision(dual, {0.9, 0.1}) == doctest::Approx(0.8).epsilon(1e-6));
  }

  TEST_CASE("separable linear data is classified perfectly") {
    Matrix x{{1.0, 1.0}, {1.2, 0.8}, {0.9, 1.3}, {-1.0, -1.0}, {-1.1, -0.7}, {-0.8, -1.2}};
    std::vector<int> y{1, 1, 1, -1, -1, -1};
    KernelMatrix gram = linear_gram(x);
    SvmDual dual = svm_fit(gram.values, y, 10.0);
    KernelMatrix self = linear_cross(x, x);
    std::vector<int> pred = svm_predict(dual, self);
    CHECK(pred == y);
    // Non-bound support vectors sit on the margin: y_i f(x_i) ~ 1.
    std::vector<double> decisions = svm_decision_values(dual, self);
    for (std::size_t k = 0; k < dual.support_indices.size(); ++k) {
      const std::size_t i = dual.support_indices[k];
      const double alpha = std::abs(dual.coeffs[k]);
      if (alpha > 1e-6 && alpha < 10.0 - 1e-6) {
        CHECK(y[i] * decisions[i] == doctest::Approx(1.0).epsilon(1e-2));
      }
    }
  }

  TEST_CASE("alphas respect the box constraint") {
    Rng rng(55);
    Matrix x;
    std::vector<int> y;
    // Overlapping clouds so some alphas hit the C bound.
    for (int i = 0; i < 20; ++i) {
      x.push_back({rng.normal(0.3, 1.0), rng.normal(0.0, 1.0)});
      y.push_back(1);
      x.push_back({rng.normal(-0.3, 1.0), rng.normal(0.0, 1.0)});
      y.push_back(-1);
    }
    const double C = 0.5;
    SvmDual dual = svm_fit(linear_gram(x).values, y, C);
    CHECK(dual.C == C);
    bool some_at_bound = false;
    for (std::size_t k = 0; k < dual.coeffs.size(); ++k) {
      const double alpha = std::abs(dual.coeffs[k]);
      CHECK(alpha <= C + 1e-9);
      CHECK(alpha > 0.0);
      if (alpha > C - 1e-6) some_at_bound = true;
    }
    CHECK(some_at_bound);
    // The equality constraint sum alpha_i y_i = 0 holds.
    double balance = 0.0;
    for (double c : dual.coeffs) balance += c;
    CHECK(balance == doctest::Approx(0.0).epsilon(1e-6));
  }

  TEST_CASE("single-class training degenerates to a constant") {
    Matrix gram{{1.0, 0.5}, {0.5, 1.0}};
    std::vector<int> y{1, 1};
    SvmDual dual = svm_fit(gram, y, 1.0);
    CHECK(dual.degenerate_constant());
    CHECK(dual.b == 1.0);
    KernelMatrix rows;
    rows.values = {{0.1, 0.2}, {0.9, 0.8}};
    std::vector<int> pred = svm_predict(dual, rows);
    CHECK(pred == std::vector<int>{1, 1});
  }

  TEST_CASE("invalid labels are rejected") {
    Matrix gram{{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(svm_fit(gram, {1, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(svm_fit(gram, {1}, 1.0), std::invalid_argument);  // size mismatch
    CHECK_THROWS_AS(svm_fit(gram, {1, -1}, 0.0), std::invalid_argument);  // C must be > 0
  }

  TEST_CASE("decision ties resolve to the positive class") {
    Matrix gram{{1.0, 0.0}, {0.0, 1.0}};
    SvmDual dual = svm_fit(gram, {1, -1}, 1.0);
    KernelMatrix rows;
    rows.values = {{0.5, 0.5}};  // decision exactly 0
    CHECK(svm_predict(dual, rows) == std::vector<int>{1});
  }
}

TEST_SUITE("classical_kernels") {
  TEST_CASE("rbf kernel values") {
    Matrix x{{0.0, 0.0}, {1.0, 0.0}, {3.0, 4.0}};
    const double gamma = 0.5;
    KernelMatrix k = rbf_gram(x, gamma);
    CHECK(k.values[0][0] == doctest::Approx(1.0));
    CHECK(k.values[0][1] == doctest::Approx(std::exp(-0.5 * 1.0)));
    CHECK(k.values[0][2] == doctest::Approx(std::exp(-0.5 * 25.0)));
    CHECK(k.values[1][0] == k.values[0][1]);
  }

  TEST_CASE("linear kernel is the dot product") {
    Matrix x{{1.0, 2.0}, {3.0, -1.0}};
    KernelMatrix k = linear_gram(x);
    CHECK(k.values[0][0] == doctest::Approx(5.0));
    CHECK(k.values[0][1] == doctest::Approx(1.0));
    CHECK(k.values[1][1] == doctest::Approx(10.0));
    KernelMatrix cross = linear_cross({{1.0, 0.0}}, x);
    CHECK(cross.values[0][0] == doctest::Approx(1.0));
    CHECK(cross.values[0][1] == doctest::Approx(3.0));
  }

  TEST_CASE("rbf svm separates parity data that defeats the linear kernel") {
    Matrix x;
    std::vector<int> y;
    xor_points(25, 77, x, y);
    // RBF side.
    ClassicalSvmModel rbf;
    rbf.kernel = "rbf";
    rbf.C = 1.0;
    classical_svm_fit(rbf, x, y);
    std::vector<int> rbf_pred = classical_svm_predict(rbf, x);
    int rbf_correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) rbf_correct += (rbf_pred[i] == y[i]);
    CHECK(rbf_correct >= static_cast<int>(0.95 * y.size()));
    // Linear side: no hyperplane fits parity; accuracy hugs chance.
    ClassicalSvmModel linear;
    linear.kernel = "linear";
    linear.C = 1.0;
    classical_svm_fit(linear, x, y);
    std::vector<int> lin_pred = classical_svm_predict(linear, x);
    int lin_correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) lin_correct += (lin_pred[i] == y[i]);
    CHECK(lin_correct <= static_cast<int>(0.65 * y.size()));
  }

  TEST_CASE("classical model scoring works without the training set") {
    Matrix x{{1.0, 1.0}, {-1.0, -1.0}, {0.9, 1.1}, {-1.1, -0.9}};
    std::vector<int> y{1, -1, 1, -1};
    ClassicalSvmModel model;
    model.kernel = "rbf";
    model.gamma = 0.7;
    classical_svm_fit(model, x, y);
    CHECK(model.trained);
    CHECK_FALSE(model.support_rows.empty());
    CHECK(model.support_rows.size() == model.coeffs.size());
    std::vector<double> scores = classical_svm_scores(model, {{1.0, 1.0}, {-1.0, -1.0}});
    CHECK(scores[0] > 0.0);
    CHECK(scores[1] < 0.0);
    ClassicalSvmModel untrained;
    CHECK_THROWS(classical_svm_scores(untrained, x));
  }

  TEST_CASE("default gamma falls back to one over the dimension") {
    Matrix x{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
    std::vector<int> y{1, -1};
    ClassicalSvmModel model;
    model.kernel = "rbf";
    model.gamma = 0.0;
    classical_svm_fit(model, x, y);
    CHECK(model.gamma == doctest::Approx(0.25));
  }
}

TEST_SUITE("random_forest") {
  TEST_CASE("gini impurity of count vectors") {
    CHECK(gini_impurity({2, 2}) == doctest::Approx(0.5));
    CHECK(gini_impurity({4, 0}) == doctest::Approx(0.0));
    CHECK(gini_impurity({}) == doctest::Approx(0.0));
    CHECK(gini_impurity({1, 1, 2}) == doctest::Approx(0.625));
  }

  TEST_CASE("config validation") {
    ForestConfig config;
    config.n_trees = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.n_trees = 10;
    config.max_depth = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.max_depth = 4;
    config.min_samples_leaf = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }

  TEST_CASE("separable data is learned exactly and deterministically") {
    Rng rng(31);
    Matrix x;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      x.push_back({rng.normal(2.0, 0.3), rng.normal(2.0, 0.3)});
      y.push_back(1);
      x.push_back({rng.normal(-2.0, 0.3), rng.normal(-2.0, 0.3)});
      y.push_back(0);
    }
    ForestConfig config;
    config.n_trees = 20;
    config.max_depth = 6;
    config.seed = 4;
    config.jobs = 2;
    Forest forest = rf_fit(x, y, config);
    CHECK(forest.num_classes == 2);
    CHECK(forest.trees.size() == 20);
    std::vector<int> pred = rf_predict(forest, x);
    CHECK(pred == y);
    // Same seed, same forest decisions; thread count does not matter.
    ForestConfig serial = config;
    serial.jobs = 1;
    Forest again = rf_fit(x, y, serial);
    CHECK(rf_predict(again, x) == pred);
  }

  TEST_CASE("vote shares are distributions over classes") {
    Rng rng(77);
    Matrix x;
    std::vector<int> y;
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 25; ++i) {
        x.push_back({rng.normal(3.0 * c, 0.4), rng.normal(-2.0 * c, 0.4)});
        y.push_back(c);
      }
    }
    ForestConfig config;
    config.n_trees = 15;
    config.seed = 6;
    Forest forest = rf_fit(x, y, config);
    CHECK(forest.num_classes == 3);
    Matrix shares = rf_vote_shares(forest, x);
    REQUIRE(shares.size() == x.size());
    for (std::size_t i = 0; i < shares.size(); ++i) {
      REQUIRE(shares[i].size() == 3);
      double total = 0.0;
      for (double s : shares[i]) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        total += s;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      // The voted class matches rf_predict.
      std::size_t best = 0;
      for (std::size_t c = 1; c < 3; ++c) {
        if (shares[i][c] > shares[i][best]) best = c;
      }
      CHECK(static_cast<int>(best) == rf_predict(forest, {x[i]})[0]);
    }
  }

  TEST_CASE("deeper trees cannot lose training accuracy on clean data") {
    Rng rng(91);
    Matrix x;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
      const double a = rng.uniform(-1.0, 1.0);
      const double b = rng.uniform(-1.0, 1.0);
      x.push_back({a, b});
      y.push_back(a + b > 0 ? 1 : 0);
    }
    ForestConfig shallow;
    shallow.n_trees = 10;
    shallow.max_depth = 1;
    shallow.seed = 3;
    ForestConfig deep = shallow;
    deep.max_depth = 8;
    auto accuracy = [&](const Forest& f) {
      std::vector<int> pred = rf_predict(f, x);
      int correct = 0;
      for (std::size_t i = 0; i < y.size(); ++i) correct += (pred[i] == y[i]);
      return static_cast<double>(correct) / y.size();
    };
    CHECK(accuracy(rf_fit(x, y, deep)) >= accuracy(rf_fit(x, y, shallow)));
  }
}

TEST_SUITE("executor") {
  TEST_CASE("mode names round-trip") {
    CHECK(exec_mode_from_name(exec_mode_name(ExecMode::Exact)) == ExecMode::Exact);
    CHECK(exec_mode_from_name(exec_mode_name(ExecMode::Shots)) == ExecMode::Shots);
    CHECK_THROWS(exec_mode_from_name("analog"));
  }

  TEST_CASE("eval mode validation") {
    EvalMode mode;
    mode.shots = 0;
    CHECK_THROWS_AS(mode.validate(), std::invalid_argument);
    mode.shots = 100;
    mode.resilience_level = 3;
    CHECK_THROWS_AS(mode.validate(), std::invalid_argument);
    mode.resilience_level = 0;
    mode.jobs = 0;
    CHECK_THROWS_AS(mode.validate(), std::invalid_argument);
    mode.jobs = 1;
    mode.calibration_shots = 0;
    CHECK_THROWS_AS(mode.validate(), std::invalid_argument);
  }

  TEST_CASE("exact expectations match the statevector") {
    Circuit c(2);
    c.ry(0, 0.8).cx(0, 1).rz(1, 0.4);
    Executor exec = exact_executor();
    StateVector s = evolve(c);
    CHECK(exec.expectation_z(c, 0b01) == doctest::Approx(expectation_z_mask(s, 0b01)));
    CHECK(exec.expectation_z(c, 0b11) == doctest::Approx(expectation_z_mask(s, 0b11)));
    CHECK(exec.all_zeros_probability(c) == doctest::Approx(s.probability(0)));
  }

  TEST_CASE("transpilation-induced layouts are transparent to callers") {
    Circuit c(3);
    c.ry(0, 1.1).ry(1, 0.3).ry(2, 2.0).cx(0, 2);
    EvalMode mode;
    mode.exec = ExecMode::Exact;
    TranspileConfig tc;
    tc.optimization_level = 3;
    tc.coupling = CouplingGraph::line(3);
    tc.qubit_error_rates = std::vector<double>{0.05, 0.001, 0.01};
    mode.transpile = tc;
    Executor routed(mode);
    Executor plain = exact_executor();
    for (std::uint64_t mask : {1ull, 2ull, 4ull, 3ull, 7ull}) {
      CHECK(routed.expectation_z(c, mask) ==
            doctest::Approx(plain.expectation_z(c, mask)).epsilon(1e-9));
    }
    CHECK(routed.all_zeros_probability(c) ==
          doctest::Approx(plain.all_zeros_probability(c)).epsilon(1e-9));
  }

  TEST_CASE("shot estimates concentrate around the exact value") {
    Circuit c(2);
    c.ry(0, 0.9).cx(0, 1);
    EvalMode mode;
    mode.exec = ExecMode::Shots;
    mode.shots = 8192;
    mode.seed = 21;
    Executor shots(mode);
    const double exact = exact_executor().expectation_z(c, 0b11);
    CHECK(shots.expectation_z(c, 0b11) == doctest::Approx(exact).epsilon(0.05));
  }

  TEST_CASE("streams decorrelate repeated estimates deterministically") {
    Circuit c(1);
    c.h(0);
    EvalMode mode;
    mode.exec = ExecMode::Shots;
    mode.shots = 256;
    mode.seed = 33;
    Executor exec(mode);
    const double first = exec.expectation_z(c, 1, /*stream=*/0);
    const double second = exec.expectation_z(c, 1, /*stream=*/1);
    CHECK(exec.expectation_z(c, 1, 0) == first);
    CHECK(exec.expectation_z(c, 1, 1) == second);
    CHECK(first != second);  // 256 shots of a fair coin; collision is negligible
  }

  TEST_CASE("readout mitigation recovers expectations under confusion noise") {
    Circuit c(1);
    c.x(0);  // ideal <Z> = -1
    NoiseModel noise = NoiseModel::readout_only(0.1, 0.1, 1);
    EvalMode raw;
    raw.exec = ExecMode::Shots;
    raw.shots = 20000;
    raw.noise = noise;
    raw.seed = 2;
    EvalMode mitigated = raw;
    mitigated.resilience_level = 1;
    mitigated.calibration_shots = 20000;
    const double raw_err = std::abs(Executor(raw).expectation_z(c, 1) - (-1.0));
    const double mit_err = std::abs(Executor(mitigated).expectation_z(c, 1) - (-1.0));
    CHECK(raw_err > 0.1);  // biased by ~2 * 0.1
    CHECK(mit_err < raw_err / 2.0);
  }

  TEST_CASE("all-zeros probability is clamped to [0, 1]") {
    Circuit c(1);  // identity; mitigation can overshoot 1.0
    NoiseModel noise = NoiseModel::readout_only(0.05, 0.05, 1);
    EvalMode mode;
    mode.exec = ExecMode::Shots;
    mode.shots = 4096;
    mode.noise = noise;
    mode.resilience_level = 1;
    mode.seed = 8;
    Executor exec(mode);
    const double p = exec.all_zeros_probability(c);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p > 0.9);
  }

  TEST_CASE("mask and state permutation helpers agree with the matrix form") {
    CHECK(permute_mask(0b01, {2, 0, 1}) == 0b100);
    CHECK(permute_mask(0b10, {2, 0, 1}) == 0b001);
    CHECK(permute_mask(0b11, {2, 0, 1}) == 0b101);
    Circuit prep(3);
    prep.ry(0, 0.4).ry(1, 1.7).ry(2, 2.6).cx(0, 1);
    StateVector s = evolve(prep);
    StateVector permuted = permute_state(s, {2, 0, 1});
    Eigen::MatrixXcd p = layout_permutation_matrix({2, 0, 1});
    for (int i = 0; i < 8; ++i) {
      cdouble expected{0.0, 0.0};
      for (int j = 0; j < 8; ++j) expected += p(i, j) * s.amplitude(j);
      CHECK(std::abs(permuted.amplitude(i) - expected) < 1e-14);
    }
  }
}
