// SPDX-License-Identifier: Apache-2.0
#include "qnids/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qnids/param_expr.hpp"
#include "qnids/rng.hpp"

namespace qnids {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Shared bookkeeping: counted objective calls, per-iteration trace, and the
// non-finite abort path.
struct Driver {
  const ObjectiveFn& f;
  OptimizeResult result;
  bool stop = false;

  explicit Driver(const ObjectiveFn& fn) : f(fn) {}

  double eval(const std::vector<double>& theta) {
    ++result.evaluations;
    double value = f(theta);
    if (!std::isfinite(value)) {
      result.aborted_non_finite = true;
      stop = true;
    }
    return value;
  }

  // Record one finished iteration; applies the tolerance-based early stop.
  void record(int iteration, double loss, double tolerance) {
    if (tolerance > 0.0 && !result.trace.empty() &&
        std::abs(loss - result.trace.back().loss) < tolerance) {
      stop = true;
    }
    result.trace.push_back(TracePoint{iteration, loss, result.evaluations});
    result.iterations = iteration + 1;
  }
};

void spsa_minimize(const OptimizerConfig& config, Driver& driver, std::vector<double>& theta) {
  Rng rng(config.seed);
  const double big_a = config.max_iters / 10.0;
  std::vector<double> delta(theta.size());
  std::vector<double> plus(theta.size()), minus(theta.size());
  for (int k = 0; k < config.max_iters && !driver.stop; ++k) {
    const double a_k = config.spsa_a / std::pow(k + 1 + big_a, 0.602);
    const double c_k = config.spsa_c / std::pow(k + 1, 0.101);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      delta[i] = rng.rademacher();
      plus[i] = theta[i] + c_k * delta[i];
      minus[i] = theta[i] - c_k * delta[i];
    }
    double f_plus = driver.eval(plus);
    if (driver.stop) break;
    double f_minus = driver.eval(minus);
    if (driver.stop) break;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] -= a_k * (f_plus - f_minus) / (2.0 * c_k * delta[i]);
    }
    driver.record(k, (f_plus + f_minus) / 2.0, config.tolerance);
  }
}

void gradient_minimize(const OptimizerConfig& config, Driver& driver, std::vector<double>& theta,
                       const GradientFn& grad) {
  const bool adam = config.kind == OptimizerKind::Adam;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0);
  for (int k = 0; k < config.max_iters && !driver.stop; ++k) {
    double loss = driver.eval(theta);
    if (driver.stop) break;
    std::vector<double> g = grad(theta);
    if (g.size() != theta.size()) {
      throw std::invalid_argument("minimize: gradient size does not match parameter count");
    }
    if (!all_finite(g)) {
      driver.result.aborted_non_finite = true;
      break;
    }
    if (adam) {
      for (std::size_t i = 0; i < theta.size(); ++i) {
        m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
        v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
        double m_hat = m[i] / (1.0 - std::pow(kBeta1, k + 1));
        double v_hat = v[i] / (1.0 - std::pow(kBeta2, k + 1));
        theta[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
      }
    } else {
      for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= config.learning_rate * g[i];
    }
    driver.record(k, loss, config.tolerance);
  }
}

void simplex_minimize(const OptimizerConfig& config, Driver& driver, std::vector<double>& theta) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const std::size_t n = theta.size();
  std::vector<std::vector<double>> verts(n + 1, theta);
  for (std::size_t i = 0; i < n; ++i) verts[i + 1][i] += config.simplex_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = driver.eval(verts[i]);
    if (driver.stop) return;
  }

  std::vector<std::size_t> order(n + 1);
  for (int k = 0; k < config.max_iters && !driver.stop; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back();
    const std::size_t second_worst = order[n - 1];

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += verts[i][d] / static_cast<double>(n);
    }

    auto blend = [&](double coeff) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d) {
        p[d] = centroid[d] + coeff * (verts[worst][d] - centroid[d]);
      }
      return p;
    };

    std::vector<double> reflected = blend(-kReflect);
    double f_reflected = driver.eval(reflected);
    if (driver.stop) break;

    if (f_reflected < values[best]) {
      std::vector<double> expanded = blend(-kExpand);
      double f_expanded = driver.eval(expanded);
      if (driver.stop) break;
      if (f_expanded < f_reflected) {
        verts[worst] = std::move(expanded);
        values[worst] = f_expanded;
      } else {
        verts[worst] = std::move(reflected);
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      verts[worst] = std::move(reflected);
      values[worst] = f_reflected;
    } else {
      // Contract toward the better of the reflected/worst points; shrink
      // the whole simplex when even that fails to improve.
      const bool outside = f_reflected < values[worst];
      std::vector<double> contracted;
      if (outside) {
        for (std::size_t d = 0; d < n; ++d) {
          contracted.push_back(centroid[d] + kContract * (reflected[d] - centroid[d]));
        }
      } else {
        contracted = blend(kContract);
      }
      double f_contracted = driver.eval(contracted);
      if (driver.stop) break;
      if (f_contracted < std::min(f_reflected, values[worst])) {
        verts[worst] = std::move(contracted);
        values[worst] = f_contracted;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d) {
            verts[i][d] = verts[best][d] + kShrink * (verts[i][d] - verts[best][d]);
          }
          values[i] = driver.eval(verts[i]);
          if (driver.stop) break;
        }
        if (driver.stop) break;
      }
    }

    double best_value = *std::min_element(values.begin(), values.end());
    driver.record(k, best_value, config.tolerance);
  }

  std::size_t best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  theta = verts[best];
}

}  // namespace

std::string optimizer_kind_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Spsa:
      return "spsa";
    case OptimizerKind::Adam:
      return "adam";
    case OptimizerKind::GradientDescent:
      return "gradient_descent";
    case OptimizerKind::DerivativeFreeSimplex:
      return "derivative_free_simplex";
  }
  throw std::logic_error("optimizer_kind_name: unknown value");
}

OptimizerKind optimizer_kind_from_name(const std::string& name) {
  if (name == "spsa") return OptimizerKind::Spsa;
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "gradient_descent") return OptimizerKind::GradientDescent;
  if (name == "derivative_free_simplex") return OptimizerKind::DerivativeFreeSimplex;
  throw std::invalid_argument("optimizer_kind_from_name: unknown kind '" + name + "'");
}

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
  if (learning_rate <= 0.0) {
    throw std::invalid_argument("OptimizerConfig: learning_rate must be > 0");
  }
  if (spsa_a <= 0.0 || spsa_c <= 0.0) {
    throw std::invalid_argument("OptimizerConfig: SPSA gains must be > 0");
  }
  if (simplex_step <= 0.0) throw std::invalid_argument("OptimizerConfig: simplex_step must be > 0");
  if (tolerance < 0.0) throw std::invalid_argument("OptimizerConfig: tolerance must be >= 0");
}

std::vector<double> param_shift_gradient(const ObjectiveFn& f, const std::vector<double>& theta) {
  std::vector<double> grad(theta.size());
  std::vector<double> shifted = theta;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    shifted[k] = theta[k] + kHalfPi;
    double up = f(shifted);
    shifted[k] = theta[k] - kHalfPi;
    double down = f(shifted);
    shifted[k] = theta[k];
    grad[k] = (up - down) / 2.0;
  }
  return grad;
}

OptimizeResult minimize(const OptimizerConfig& config, const ObjectiveFn& f,
                        std::vector<double> theta0, const GradientFn& grad) {
  config.validate();
  if (theta0.empty()) throw std::invalid_argument("minimize: empty parameter vector");
  if (!all_finite(theta0)) throw std::invalid_argument("minimize: theta0 must be finite");

  Driver driver(f);
  std::vector<double> theta = std::move(theta0);

  switch (config.kind) {
    case OptimizerKind::Spsa:
      spsa_minimize(config, driver, theta);
      break;
    case OptimizerKind::Adam:
    case OptimizerKind::GradientDescent: {
      GradientFn effective_grad = grad;
      if (!effective_grad) {
        effective_grad = [&driver](const std::vector<double>& t) {
          // Parameter-shift through the counted objective so the trace's
          // evaluation totals include gradient cost.
          return param_shift_gradient([&driver](const std::vector<double>& p) {
            ++driver.result.evaluations;
            return driver.f(p);
          }, t);
        };
      }
      gradient_minimize(config, driver, theta, effective_grad);
      break;
    }
    case OptimizerKind::DerivativeFreeSimplex:
      simplex_minimize(config, driver, theta);
      break;
  }

  driver.result.theta = theta;
  if (driver.result.aborted_non_finite) {
    driver.result.loss =
        driver.result.trace.empty() ? std::nan("") : driver.result.trace.back().loss;
  } else if (config.kind == OptimizerKind::DerivativeFreeSimplex &&
             !driver.result.trace.empty()) {
    driver.result.loss = driver.result.trace.back().loss;
  } else {
    driver.result.loss = driver.eval(theta);
  }
  return driver.result;
}

void write_loss_trace_csv(const std::string& path, const OptimizeResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_loss_trace_csv: cannot open " + path);
  out << "iteration,loss,evaluations\n";
  for (const auto& point : result.trace) {
    out << point.iteration << "," << format_double(point.loss) << "," << point.evaluations
        << "\n";
  }
}

}  // namespace qnids
