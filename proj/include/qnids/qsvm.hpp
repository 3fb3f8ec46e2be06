// SPDX-License-Identifier: Apache-2.0
//
// Quantum-kernel SVM: the Gram matrix of feature-map state fidelities feeds
// the SMO dual solver; prediction scores new points against the stored
// support-vector rows through the same kernel.
#pragma once

#include <vector>

#include "qnids/executor.hpp"
#include "qnids/feature_map.hpp"
#include "qnids/kernel.hpp"
#include "qnids/svm.hpp"

namespace qnids {

struct QsvmModel {
  FeatureMapSpec feature_map;
  double C = 1.0;
  Matrix support_rows;         // feature rows of the support vectors
  std::vector<double> coeffs;  // alpha_i * y_i, aligned with support_rows
  double b = 0.0;
  bool trained = false;
};

// Fit in place from features (rows scaled to [0, pi] for angle maps) and
// +-1 labels.  Returns the dual solution (support indices refer to rows of
// `x`).
SvmDual qsvm_fit(QsvmModel& model, const Matrix& x, const std::vector<int>& y,
                 const Executor& exec);

// Decision values sum_k coeffs[k] * k(x, sv_k) + b; a degenerate
// single-class model scores the constant b everywhere.
std::vector<double> qsvm_scores(const QsvmModel& model, const Matrix& x, const Executor& exec);

// Labels sign(score), ties to +1.
std::vector<int> qsvm_predict(const QsvmModel& model, const Matrix& x, const Executor& exec);

}  // namespace qnids
