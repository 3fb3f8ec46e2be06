// SPDX-License-Identifier: Apache-2.0
#include "qnids/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace qnids {

MetricsSummary compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                               const std::vector<int>& classes,
                               const std::vector<std::string>& class_names) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("metrics: truth and prediction sizes differ");
  }
  if (truth.empty()) throw std::invalid_argument("metrics: empty evaluation set");
  if (classes.empty()) throw std::invalid_argument("metrics: empty class list");

  std::map<int, std::size_t> index;
  for (std::size_t c = 0; c < classes.size(); ++c) index[classes[c]] = c;
  if (index.size() != classes.size()) {
    throw std::invalid_argument("metrics: duplicate class id");
  }

  MetricsSummary summary;
  summary.classes = classes;
  summary.total = static_cast<long long>(truth.size());
  summary.confusion.assign(classes.size(), std::vector<long long>(classes.size(), 0));
  long long correct = 0;
  for (std::size_t s = 0; s < truth.size(); ++s) {
    const auto ti = index.find(truth[s]);
    const auto pi = index.find(predicted[s]);
    if (ti == index.end() || pi == index.end()) {
      throw std::invalid_argument("metrics: label outside the class list");
    }
    summary.confusion[ti->second][pi->second]++;
    if (truth[s] == predicted[s]) correct++;
  }
  summary.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

  double f1_sum = 0.0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    ClassMetrics m;
    m.class_id = classes[c];
    m.class_name = c < class_names.size() ? class_names[c] : std::to_string(classes[c]);
    long long tp = summary.confusion[c][c];
    long long fn = 0;
    long long fp = 0;
    for (std::size_t other = 0; other < classes.size(); ++other) {
      if (other == c) continue;
      fn += summary.confusion[c][other];
      fp += summary.confusion[other][c];
    }
    m.support = tp + fn;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    f1_sum += m.f1;
    summary.per_class.push_back(std::move(m));
  }
  summary.macro_f1 = f1_sum / static_cast<double>(classes.size());
  return summary;
}

MetricsSummary compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted) {
  std::set<int> seen(truth.begin(), truth.end());
  seen.insert(predicted.begin(), predicted.end());
  return compute_metrics(truth, predicted, std::vector<int>(seen.begin(), seen.end()));
}

double majority_class_f1(const std::vector<int>& truth) {
  if (truth.empty()) throw std::invalid_argument("metrics: empty evaluation set");
  std::map<int, long long> counts;
  for (int label : truth) counts[label]++;
  int majority = counts.begin()->first;
  for (const auto& [label, count] : counts) {
    if (count > counts[majority]) majority = label;
  }
  return compute_metrics(truth, std::vector<int>(truth.size(), majority)).macro_f1;
}

}  // namespace qnids
