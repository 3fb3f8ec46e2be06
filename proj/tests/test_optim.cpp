// SPDX-License-Identifier: Apache-2.0
//
// Suites for the optimizer family (SPSA, Adam, gradient descent,
// Nelder-Mead simplex) and the parameter-shift gradient rule.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnids/ansatz.hpp"
#include "qnids/optimizer.hpp"
#include "qnids/rng.hpp"
#include "qnids/statevector.hpp"

using namespace qnids;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shifted convex bowl with minimum value 0 at `target`.
ObjectiveFn quadratic(const std::vector<double>& target) {
  return [target](const std::vector<double>& theta) {
    double loss = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double d = theta[i] - target[i];
      loss += d * d;
    }
    return loss;
  };
}

GradientFn quadratic_gradient(const std::vector<double>& target) {
  return [target](const std::vector<double>& theta) {
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) grad[i] = 2.0 * (theta[i] - target[i]);
    return grad;
  };
}

double distance_to(const std::vector<double>& theta, const std::vector<double>& target) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double d = theta[i] - target[i];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

}  // namespace

TEST_SUITE("optimizer_config") {
  TEST_CASE("kind names round-trip") {
    for (OptimizerKind k : {OptimizerKind::Spsa, OptimizerKind::Adam,
                            OptimizerKind::GradientDescent, OptimizerKind::DerivativeFreeSimplex}) {
      CHECK(optimizer_kind_from_name(optimizer_kind_name(k)) == k);
    }
    CHECK_THROWS(optimizer_kind_from_name("lbfgs"));
  }

  TEST_CASE("validation rejects non-positive knobs") {
    OptimizerConfig config;
    config.max_iters = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.max_iters = 10;
    config.learning_rate = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.learning_rate = 0.1;
    config.spsa_c = -1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.spsa_c = 0.1;
    config.simplex_step = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.simplex_step = 0.5;
    config.tolerance = -1e-9;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.tolerance = 0.0;
    CHECK_NOTHROW(config.validate());
  }
}

TEST_SUITE("optimizer_convergence") {
  TEST_CASE("gradient descent with an analytic gradient reaches the bowl center") {
    const std::vector<double> target{1.5, -0.5};
    OptimizerConfig config;
    config.kind = OptimizerKind::GradientDescent;
    config.max_iters = 200;
    config.learning_rate = 0.1;
    OptimizeResult r =
        minimize(config, quadratic(target), {0.0, 0.0}, quadratic_gradient(target));
    CHECK(distance_to(r.theta, target) < 1e-6);
    CHECK(r.loss < 1e-10);
    CHECK(r.iterations == 200);
  }

  TEST_CASE("adam reaches the bowl center") {
    const std::vector<double> target{0.7, -1.2, 0.3};
    OptimizerConfig config;
    config.kind = OptimizerKind::Adam;
    config.max_iters = 400;
    config.learning_rate = 0.05;
    OptimizeResult r =
        minimize(config, quadratic(target), {0.0, 0.0, 0.0}, quadratic_gradient(target));
    CHECK(distance_to(r.theta, target) < 1e-3);
  }

  TEST_CASE("nelder-mead converges without any gradient") {
    const std::vector<double> target{0.4, 0.9};
    OptimizerConfig config;
    config.kind = OptimizerKind::DerivativeFreeSimplex;
    config.max_iters = 300;
    config.simplex_step = 0.5;
    OptimizeResult r = minimize(config, quadratic(target), {-1.0, 2.0});
    CHECK(distance_to(r.theta, target) < 1e-4);
    CHECK(r.loss < 1e-7);
  }

  TEST_CASE("spsa drifts toward the bowl center") {
    const std::vector<double> target{0.5, -0.8};
    OptimizerConfig config;
    config.kind = OptimizerKind::Spsa;
    config.max_iters = 400;
    config.spsa_a = 0.3;
    config.spsa_c = 0.1;
    config.seed = 7;
    const std::vector<double> start{2.0, 2.0};
    ObjectiveFn f = quadratic(target);
    OptimizeResult r = minimize(config, f, start);
    CHECK(r.loss < f(start) * 0.05);
    CHECK(distance_to(r.theta, target) < 0.3);
  }

  TEST_CASE("gradient-based kinds fall back to the parameter-shift rule") {
    // f(theta) = cos(theta): the shift rule is exact, so plain descent
    // without a supplied gradient still walks to the minimum at pi.
    OptimizerConfig config;
    config.kind = OptimizerKind::GradientDescent;
    config.max_iters = 300;
    config.learning_rate = 0.2;
    OptimizeResult r =
        minimize(config, [](const std::vector<double>& t) { return std::cos(t[0]); }, {0.5});
    CHECK(std::abs(r.theta[0] - kPi) < 1e-4);
    CHECK(r.loss == doctest::Approx(-1.0).epsilon(1e-8));
  }
}

TEST_SUITE("optimizer_mechanics") {
  TEST_CASE("spsa spends exactly two evaluations per iteration plus one") {
    OptimizerConfig config;
    config.kind = OptimizerKind::Spsa;
    config.max_iters = 37;
    config.seed = 3;
    std::size_t calls = 0;
    ObjectiveFn f = [&calls](const std::vector<double>& t) {
      ++calls;
      return t[0] * t[0];
    };
    OptimizeResult r = minimize(config, f, {1.0});
    CHECK(r.iterations == 37);
    CHECK(r.evaluations == 2 * 37 + 1);
    CHECK(calls == r.evaluations);
    REQUIRE(r.trace.size() == 37);
    CHECK(r.trace.front().iteration == 0);
    CHECK(r.trace.back().iteration == 36);
    // Cumulative evaluation counts are non-decreasing.
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].evaluations >= r.trace[i - 1].evaluations);
    }
  }

  TEST_CASE("results are deterministic in the seed") {
    OptimizerConfig config;
    config.kind = OptimizerKind::Spsa;
    config.max_iters = 50;
    config.seed = 11;
    // Two dimensions with different curvatures so the perturbation pattern
    // actually shapes the trajectory (in one dimension the Rademacher sign
    // cancels out of the SPSA estimate).
    ObjectiveFn f = [](const std::vector<double>& t) {
      return (t[0] - 0.3) * (t[0] - 0.3) + 3.0 * (t[1] + 0.2) * (t[1] + 0.2);
    };
    OptimizeResult a = minimize(config, f, {1.0, 1.0});
    OptimizeResult b = minimize(config, f, {1.0, 1.0});
    CHECK(a.theta == b.theta);
    CHECK(a.loss == b.loss);
    config.seed = 12;
    OptimizeResult c = minimize(config, f, {1.0, 1.0});
    CHECK(a.theta != c.theta);
  }

  TEST_CASE("tolerance stops early on a flat objective") {
    OptimizerConfig config;
    config.kind = OptimizerKind::GradientDescent;
    config.max_iters = 500;
    config.learning_rate = 0.1;
    config.tolerance = 1e-12;
    OptimizeResult r = minimize(
        config, [](const std::vector<double>&) { return 1.0; }, {0.0},
        [](const std::vector<double>& t) { return std::vector<double>(t.size(), 0.0); });
    CHECK(r.iterations < 500);
    CHECK(r.loss == 1.0);
  }

  TEST_CASE("non-finite objectives abort cleanly") {
    OptimizerConfig config;
    config.kind = OptimizerKind::GradientDescent;
    config.max_iters = 100;
    config.learning_rate = 0.5;
    int calls = 0;
    ObjectiveFn f = [&calls](const std::vector<double>& t) {
      ++calls;
      if (calls > 10) return std::nan("");
      return t[0] * t[0];
    };
    OptimizeResult r = minimize(config, f, {1.0}, [](const std::vector<double>& t) {
      return std::vector<double>{2.0 * t[0]};
    });
    CHECK(r.aborted_non_finite);
    CHECK(std::isfinite(r.theta[0]));
    CHECK(r.iterations < 100);
  }

  TEST_CASE("loss trace serializes as csv") {
    OptimizerConfig config;
    config.kind = OptimizerKind::GradientDescent;
    config.max_iters = 5;
    config.learning_rate = 0.1;
    const std::vector<double> target{0.0};
    OptimizeResult r = minimize(config, quadratic(target), {1.0}, quadratic_gradient(target));
    const std::string path = "/tmp/qnids_test_trace.csv";
    write_loss_trace_csv(path, r);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "iteration,loss,evaluations");
    int rows = 0;
    while (std::getline(in, line)) {
      if (!line.empty()) ++rows;
    }
    CHECK(rows == static_cast<int>(r.trace.size()));
    std::remove(path.c_str());
    CHECK_THROWS(write_loss_trace_csv("/nonexistent_dir_qnids/trace.csv", r));
  }
}

TEST_SUITE("param_shift") {
  TEST_CASE("shift rule is exact for sinusoidal objectives") {
    ObjectiveFn f = [](const std::vector<double>& t) { return std::cos(t[0]); };
    for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
      auto grad = param_shift_gradient(f, {x});
      CHECK(grad[0] == doctest::Approx(-std::sin(x)).epsilon(1e-12));
    }
  }

  TEST_CASE("shift rule matches finite differences on a circuit expectation") {
    AnsatzSpec spec;
    spec.kind = AnsatzKind::RealAmplitudes;
    spec.num_qubits = 2;
    spec.reps = 1;
    AnsatzCircuit ansatz = build_ansatz(spec);
    ObjectiveFn f = [&ansatz](const std::vector<double>& theta) {
      std::map<std::string, double> binding;
      for (std::size_t i = 0; i < theta.size(); ++i) binding[ansatz.param_names[i]] = theta[i];
      StateVector s = evolve(ansatz.circuit.bind(binding));
      return expectation_z_mask(s, 0b11);
    };
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> theta(ansatz.num_params);
      for (double& t : theta) t = rng.uniform(-kPi, kPi);
      auto analytic = param_shift_gradient(f, theta);
      const double h = 1e-5;
      for (std::size_t k = 0; k < theta.size(); ++k) {
        std::vector<double> plus = theta, minus = theta;
        plus[k] += h;
        minus[k] -= h;
        const double fd = (f(plus) - f(minus)) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(analytic[k])});
        CHECK(std::abs(analytic[k] - fd) / scale < 1e-4);
      }
    }
  }
}
