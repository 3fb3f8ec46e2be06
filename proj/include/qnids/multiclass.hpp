// SPDX-License-Identifier: Apache-2.0
//
// One-vs-rest reduction: one binary scorer per class, trained on +1 for the
// class and -1 for the rest; prediction takes the arg-max of raw scores with
// ties resolved toward the lowest class index.
#pragma once

#include <functional>
#include <vector>

#include "qnids/kernel.hpp"

namespace qnids {

// Maps a feature matrix to one raw score per row.
using ScoreFn = std::function<std::vector<double>(const Matrix&)>;

// Trains one binary model from features and +-1 labels and returns its
// scorer.
using BinaryFitFn = std::function<ScoreFn(const Matrix&, const std::vector<int>&)>;

struct OneVsRest {
  std::vector<int> classes;     // ascending
  std::vector<ScoreFn> scorers; // aligned with classes

  // Raw scores: one row per sample, one column per class.
  Matrix scores(const Matrix& x) const;

  // Arg-max class per row; equal scores pick the lowest class index.
  std::vector<int> predict(const Matrix& x) const;
};

// Train a scorer per distinct label in `y` (at least two required).
OneVsRest one_vs_rest_fit(const Matrix& x, const std::vector<int>& y, const BinaryFitFn& fit);

// Same, but against a fixed class list; every expected class must appear in
// `y`.
OneVsRest one_vs_rest_fit(const Matrix& x, const std::vector<int>& y,
                          const std::vector<int>& expected_classes, const BinaryFitFn& fit);

}  // namespace qnids
