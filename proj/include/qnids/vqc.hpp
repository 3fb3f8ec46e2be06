// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qnids/ansatz.hpp"
#include "qnids/executor.hpp"
#include "qnids/feature_map.hpp"
#include "qnids/kernel.hpp"
#include "qnids/optimizer.hpp"

namespace qnids {

// Variational quantum classifier: data runs through the feature map, then
// the trainable ansatz; the score is the expectation of a Z-parity
// observable, in [-1, 1].  Training minimizes the mean squared error
// between the score and the +-1 label.
struct VqcModel {
  FeatureMapSpec feature_map;
  AnsatzSpec ansatz;
  // Observable over {'I','Z'}, written like bitstrings (leftmost char =
  // qubit n-1).  Empty selects Z on every qubit.
  std::string observable;
  OptimizerConfig optimizer;
  double threshold = 0.0;
  std::vector<double> theta;
  bool trained = false;
};

// Fit in place from features X (rows scaled to [0, pi] for angle maps) and
// labels +-1; theta starts from zeros unless the model already carries a
// parameter vector of the right length.  Returns the optimizer trace.
OptimizeResult vqc_fit(VqcModel& model, const Matrix& x, const std::vector<int>& y,
                       const Executor& exec);

// Raw scores <observable> in [-1, 1], one per row of X.
std::vector<double> vqc_scores(const VqcModel& model, const Matrix& x, const Executor& exec);

// Labels sign(score - threshold); a score exactly at the threshold counts
// as +1.
std::vector<int> vqc_predict(const VqcModel& model, const Matrix& x, const Executor& exec);

}  // namespace qnids
