// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "qnids/kernel.hpp"

namespace qnids {

// Solution of the kernel SVM dual problem
//   min_a  1/2 sum_ij a_i a_j y_i y_j K_ij - sum_i a_i
//   s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0.
//
// Only support vectors (a_i > 0) are stored; coeffs[k] = a_i * y_i for
// training index support_indices[k].  A single-class training set has no
// separating problem to solve: the dual degenerates to an empty support set
// with bias = the constant label.
struct SvmDual {
  std::vector<std::size_t> support_indices;
  std::vector<double> coeffs;
  double b = 0.0;
  double C = 1.0;

  bool degenerate_constant() const { return support_indices.empty(); }
};

// Sequential minimal optimization with maximal-violating-pair selection;
// converges when the largest KKT violation drops below 1e-3.  A Gram matrix
// whose smallest eigenvalue is below -1e-8 draws a warning on stderr and is
// repaired by diagonal jitter before solving.  Labels must be +-1.
SvmDual svm_fit(const Matrix& gram, const std::vector<int>& y, double C = 1.0);

// Decision value sum_k coeffs[k] * kernel_row[support_indices[k]] + b for
// one sample, where kernel_row holds kernel values against every training
// point (column count of the training set).
double svm_decision(const SvmDual& dual, const std::vector<double>& kernel_row);

// Labels from decision values; sign(0) resolves to +1.
std::vector<int> svm_predict(const SvmDual& dual, const KernelMatrix& test_rows_by_train);
std::vector<double> svm_decision_values(const SvmDual& dual,
                                        const KernelMatrix& test_rows_by_train);

}  // namespace qnids
