// SPDX-License-Identifier: Apache-2.0
//
// Train/test preparation: optional downsampling to the minority class,
// stratified splitting, then a chain of transforms fitted on the train split
// only — median imputation, min-max scaling to [0, pi], dimensionality
// reduction (PCA or top-variance column selection), and a second min-max
// scaling so every output feature lands in [0, pi].
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qnids/dataset.hpp"

namespace qnids {

// Per-column medians over non-NaN train values (0 when a column is all
// NaN); apply() replaces NaNs.
struct Imputer {
  std::vector<double> medians;

  static Imputer fit(const Matrix& train);
  void apply(Matrix& data) const;
};

// Per-column affine map onto [0, hi]; constant columns map to 0 by
// convention.  apply() clips into the train range first, so transformed
// values never leave [0, hi].
struct MinMaxScaler {
  std::vector<double> mins;
  std::vector<double> maxs;
  double hi = 0.0;

  static MinMaxScaler fit(const Matrix& train, double hi);
  void apply(Matrix& data) const;
};

// Principal components of the train covariance (descending eigenvalue
// order); each component is sign-fixed so its largest-magnitude loading is
// positive (first such index on magnitude ties).
struct Pca {
  std::vector<double> means;
  Matrix components;  // components[k] = k-th principal axis, length d

  static Pca fit(const Matrix& train, int target_dim);
  Matrix transform(const Matrix& data) const;
  // Map reduced rows back to the original space (for reconstruction-error
  // checks).
  Matrix reconstruct(const Matrix& reduced) const;
};

// Keep the target_dim highest-variance columns (sample variance on train,
// variance ties toward the lower index); selected columns stay in their
// original order.
struct TopVariance {
  std::vector<std::size_t> keep;

  static TopVariance fit(const Matrix& train, int target_dim);
  Matrix transform(const Matrix& data) const;
};

// Stratified split: per class, round(count * fraction) rows go to train
// (clamped so both sides keep at least one), chosen by a seeded shuffle;
// classes with fewer than two rows are an error.  Returned index lists are
// ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& y, double fraction, std::uint64_t seed);

// Full chain; returns {train, test} with the transform log extended on
// both.
std::pair<Dataset, Dataset> preprocess(const Dataset& ds, const PreprocessConfig& config);

}  // namespace qnids
