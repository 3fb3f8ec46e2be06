// SPDX-License-Identifier: Apache-2.0
#include "qnids/svm.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace qnids {

namespace {

constexpr double kKktTolerance = 1e-3;
constexpr double kSupportThreshold = 1e-10;

void validate_inputs(const Matrix& gram, const std::vector<int>& y, double C) {
  if (C <= 0.0) throw std::invalid_argument("svm_fit: C must be > 0");
  if (gram.size() != y.size()) {
    throw std::invalid_argument("svm_fit: Gram matrix size does not match label count");
  }
  for (const auto& row : gram) {
    if (row.size() != y.size()) throw std::invalid_argument("svm_fit: Gram matrix must be square");
  }
  for (int label : y) {
    if (label != 1 && label != -1) {
      throw std::invalid_argument("svm_fit: labels must be +1 or -1");
    }
  }
  if (y.empty()) throw std::invalid_argument("svm_fit: empty training set");
}

// Clip eigenvalues below the PSD tolerance by adding diagonal jitter.
void repair_non_psd(Matrix& gram) {
  const std::size_t n = gram.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j)) = gram[i][j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -1e-8) {
    const double jitter = -min_eig + 1e-8;
    std::cerr << "svm_fit: warning: Gram matrix has eigenvalue " << min_eig
              << "; adding diagonal jitter " << jitter << " to restore positive semidefiniteness"
              << std::endl;
    for (std::size_t i = 0; i < n; ++i) gram[i][i] += jitter;
  }
}

}  // namespace

SvmDual svm_fit(const Matrix& gram_in, const std::vector<int>& y, double C) {
  validate_inputs(gram_in, y, C);
  const std::size_t n = y.size();

  SvmDual dual;
  dual.C = C;
  const bool all_positive = std::all_of(y.begin(), y.end(), [](int l) { return l == 1; });
  const bool all_negative = std::all_of(y.begin(), y.end(), [](int l) { return l == -1; });
  if (all_positive || all_negative) {
    dual.b = y.front();
    return dual;
  }

  Matrix gram = gram_in;
  repair_non_psd(gram);

  std::vector<double> alpha(n, 0.0);
  // grad_i = d/d a_i of the dual objective = y_i sum_j a_j y_j K_ij - 1.
  std::vector<double> grad(n, -1.0);

  const auto in_up = [&](std::size_t i) {
    return (y[i] == 1 && alpha[i] < C) || (y[i] == -1 && alpha[i] > 0.0);
  };
  const auto in_low = [&](std::size_t i) {
    return (y[i] == 1 && alpha[i] > 0.0) || (y[i] == -1 && alpha[i] < C);
  };

  // Safety bound; maximal-violating-pair SMO converges far sooner on the
  // problem sizes this library handles.
  const std::size_t max_steps = 200000 + 2000 * n;
  double top = 0.0, bottom = 0.0;
  for (std::size_t step = 0; step <= max_steps; ++step) {
    std::size_t i = n, j = n;
    top = -std::numeric_limits<double>::infinity();
    bottom = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const double score = -y[k] * grad[k];
      if (in_up(k) && score > top) {
        top = score;
        i = k;
      }
      if (in_low(k) && score < bottom) {
        bottom = score;
        j = k;
      }
    }
    if (i == n || j == n || top - bottom < kKktTolerance) break;
    if (step == max_steps) {
      std::cerr << "svm_fit: warning: stopping after " << max_steps
                << " SMO steps with KKT gap " << top - bottom << std::endl;
      break;
    }

    // Step t moves a_i by +y_i t and a_j by -y_j t, preserving the equality
    // constraint; curvature along that direction:
    double curvature = gram[i][i] + gram[j][j] - 2.0 * gram[i][j];
    if (curvature <= 0.0) curvature = 1e-12;
    double t = (top - bottom) / curvature;

    const auto step_bounds = [&](std::size_t k, int sign) {
      // Allowed t range keeping a_k + sign * y_k * t inside [0, C].
      double lo, hi;
      if (sign * y[k] == 1) {
        lo = -alpha[k];
        hi = C - alpha[k];
      } else {
        lo = alpha[k] - C;
        hi = alpha[k];
      }
      return std::pair(lo, hi);
    };
    auto [lo_i, hi_i] = step_bounds(i, +1);
    auto [lo_j, hi_j] = step_bounds(j, -1);
    t = std::clamp(t, std::max(lo_i, lo_j), std::min(hi_i, hi_j));
    if (t == 0.0) break;  // numerically stuck at the box boundary

    alpha[i] += y[i] * t;
    alpha[j] -= y[j] * t;
    for (std::size_t k = 0; k < n; ++k) grad[k] += t * y[k] * (gram[k][i] - gram[k][j]);
  }

  // Bias from the KKT conditions: free support vectors satisfy
  // -y_i grad_i = b exactly at the optimum.
  double b_sum = 0.0;
  std::size_t b_count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (alpha[k] > kSupportThreshold && alpha[k] < C - kSupportThreshold) {
      b_sum += -y[k] * grad[k];
      ++b_count;
    }
  }
  dual.b = b_count > 0 ? b_sum / static_cast<double>(b_count) : (top + bottom) / 2.0;

  for (std::size_t k = 0; k < n; ++k) {
    if (alpha[k] > kSupportThreshold) {
      dual.support_indices.push_back(k);
      dual.coeffs.push_back(alpha[k] * y[k]);
    }
  }
  if (dual.support_indices.empty()) {
    // All multipliers collapsed to zero (e.g. KKT satisfied immediately);
    // fall back to the majority-free midpoint bias already computed.
    dual.b = (top + bottom) / 2.0;
  }
  return dual;
}

double svm_decision(const SvmDual& dual, const std::vector<double>& kernel_row) {
  double value = dual.b;
  for (std::size_t k = 0; k < dual.support_indices.size(); ++k) {
    const std::size_t idx = dual.support_indices[k];
    if (idx >= kernel_row.size()) {
      throw std::invalid_argument("svm_decision: kernel row shorter than training set");
    }
    value += dual.coeffs[k] * kernel_row[idx];
  }
  return value;
}

std::vector<double> svm_decision_values(const SvmDual& dual,
                                        const KernelMatrix& test_rows_by_train) {
  std::vector<double> values;
  values.reserve(test_rows_by_train.rows());
  for (const auto& row : test_rows_by_train.values) values.push_back(svm_decision(dual, row));
  return values;
}

std::vector<int> svm_predict(const SvmDual& dual, const KernelMatrix& test_rows_by_train) {
  std::vector<int> labels;
  labels.reserve(test_rows_by_train.rows());
  for (double value : svm_decision_values(dual, test_rows_by_train)) {
    labels.push_back(value >= 0.0 ? 1 : -1);
  }
  return labels;
}

}  // namespace qnids
