// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qnids/executor.hpp"
#include "qnids/feature_map.hpp"

namespace qnids {

using Matrix = std::vector<std::vector<double>>;

// Fidelity kernel values k(a, b) = |<phi(b)|phi(a)>|^2 for a feature map.
struct KernelMatrix {
  Matrix values;  // rows index the first sample set, columns the second
  ExecMode mode = ExecMode::Exact;

  std::size_t rows() const { return values.size(); }
  std::size_t cols() const { return values.empty() ? 0 : values.front().size(); }
};

// Symmetric Gram matrix over X.  Exact mode encodes each row once and takes
// inner products (upper triangle computed, mirrored down).  Shots mode runs
// the compose(U(x_a), U(x_b)^-1) circuit per entry and estimates the
// all-zeros probability; amplitude encoding has no inverse-preparation
// circuit, so it supports exact mode only.
KernelMatrix kernel_matrix(const FeatureMapSpec& map, const Matrix& x, const Executor& exec);

// Rectangular kernel block: rows from x_rows, columns from x_cols.  Used to
// score test samples against a training set.
KernelMatrix kernel_cross(const FeatureMapSpec& map, const Matrix& x_rows, const Matrix& x_cols,
                          const Executor& exec);

}  // namespace qnids
