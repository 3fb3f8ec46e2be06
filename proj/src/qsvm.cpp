// SPDX-License-Identifier: Apache-2.0
#include "qnids/qsvm.hpp"

#include <stdexcept>

namespace qnids {

SvmDual qsvm_fit(QsvmModel& model, const Matrix& x, const std::vector<int>& y,
                 const Executor& exec) {
  if (x.size() != y.size()) throw std::invalid_argument("qsvm_fit: X and y sizes differ");
  if (x.empty()) throw std::invalid_argument("qsvm_fit: empty training set");
  model.feature_map.validate();
  if (model.C <= 0.0) throw std::invalid_argument("qsvm_fit: C must be positive");

  const KernelMatrix gram = kernel_matrix(model.feature_map, x, exec);
  const SvmDual dual = svm_fit(gram.values, y, model.C);

  model.support_rows.clear();
  model.coeffs = dual.coeffs;
  model.b = dual.b;
  for (std::size_t index : dual.support_indices) model.support_rows.push_back(x[index]);
  model.trained = true;
  return dual;
}

std::vector<double> qsvm_scores(const QsvmModel& model, const Matrix& x, const Executor& exec) {
  if (!model.trained) throw std::logic_error("qsvm_scores: model is not trained");
  if (model.support_rows.empty()) {
    return std::vector<double>(x.size(), model.b);  // degenerate single-class fit
  }
  const KernelMatrix cross = kernel_cross(model.feature_map, x, model.support_rows, exec);
  std::vector<double> scores(x.size(), 0.0);
  for (std::size_t s = 0; s < x.size(); ++s) {
    double value = model.b;
    for (std::size_t k = 0; k < model.coeffs.size(); ++k) {
      value += model.coeffs[k] * cross.values[s][k];
    }
    scores[s] = value;
  }
  return scores;
}

std::vector<int> qsvm_predict(const QsvmModel& model, const Matrix& x, const Executor& exec) {
  std::vector<int> labels;
  for (double score : qsvm_scores(model, x, exec)) labels.push_back(score >= 0.0 ? 1 : -1);
  return labels;
}

}  // namespace qnids
