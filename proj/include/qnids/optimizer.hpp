// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qnids {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

enum class OptimizerKind {
  Spsa,                   // simultaneous-perturbation stochastic approximation
  Adam,                   // first/second-moment adaptive gradient steps
  GradientDescent,        // plain theta <- theta - eta * grad
  DerivativeFreeSimplex,  // Nelder-Mead simplex search
};

std::string optimizer_kind_name(OptimizerKind kind);
OptimizerKind optimizer_kind_from_name(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Spsa;
  int max_iters = 100;
  double learning_rate = 0.1;  // eta for Adam / GradientDescent
  // SPSA gain schedules a_k = a/(k+1+A)^0.602 and c_k = c/(k+1)^0.101 with
  // A = max_iters/10.
  double spsa_a = 0.2;
  double spsa_c = 0.1;
  double simplex_step = 0.5;  // initial simplex edge length
  std::uint64_t seed = 0;
  // When > 0, stop once two consecutive trace losses differ by less than
  // this; 0 runs all max_iters iterations.
  double tolerance = 0.0;

  void validate() const;
};

struct TracePoint {
  int iteration = 0;
  double loss = 0.0;
  std::size_t evaluations = 0;  // cumulative objective evaluations so far
};

struct OptimizeResult {
  std::vector<double> theta;
  double loss = 0.0;
  std::vector<TracePoint> trace;  // one point per completed iteration
  std::size_t evaluations = 0;
  int iterations = 0;
  // Set when an objective or gradient evaluation came back non-finite; the
  // trace up to that point is preserved and theta holds the last finite
  // iterate.
  bool aborted_non_finite = false;
};

// Two-point parameter-shift gradient: d f / d theta_k =
// [f(theta + (pi/2) e_k) - f(theta - (pi/2) e_k)] / 2.  Exact for
// objectives that are quantum expectations in which each parameter feeds
// exactly one rotation gate.
std::vector<double> param_shift_gradient(const ObjectiveFn& f, const std::vector<double>& theta);

// Minimize f from theta0.  Gradient-based kinds use `grad` when supplied
// and the parameter-shift rule otherwise; SPSA and the simplex ignore
// `grad`.  Deterministic for a fixed config (SPSA draws its perturbation
// directions from config.seed).  SPSA spends exactly two objective
// evaluations per iteration plus one final evaluation.
OptimizeResult minimize(const OptimizerConfig& config, const ObjectiveFn& f,
                        std::vector<double> theta0, const GradientFn& grad = nullptr);

// Write "iteration,loss,evaluations" rows for a recorded trace.
void write_loss_trace_csv(const std::string& path, const OptimizeResult& result);

}  // namespace qnids
