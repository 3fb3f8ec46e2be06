// SPDX-License-Identifier: Apache-2.0
//
// Classification metrics: per-class precision/recall/F1 with the 0
// convention for empty denominators, macro-F1 as the unweighted mean, and a
// confusion matrix with true classes on rows.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qnids {

struct ClassMetrics {
  int class_id = 0;
  std::string class_name;
  long long support = 0;  // true occurrences
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsSummary {
  std::vector<int> classes;  // ascending, the row/column order of confusion
  std::vector<ClassMetrics> per_class;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  // confusion[i][j] counts samples of true class classes[i] predicted as
  // classes[j].
  std::vector<std::vector<long long>> confusion;
  long long total = 0;
};

// Score predictions against ground truth over an explicit class list (ids
// outside the list are rejected).  Class names are optional; missing names
// fall back to the decimal id.
MetricsSummary compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                               const std::vector<int>& classes,
                               const std::vector<std::string>& class_names = {});

// Convenience overload: class list = sorted union of truth and predictions.
MetricsSummary compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted);

// Macro-F1 of the constant predictor that always answers the most frequent
// class (frequency ties toward the lowest id) — the sanity floor real models
// must beat.
double majority_class_f1(const std::vector<int>& truth);

}  // namespace qnids
