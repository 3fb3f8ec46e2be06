// SPDX-License-Identifier: Apache-2.0
#include "qnids/multiclass.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace qnids {

namespace {

OneVsRest fit_against(const Matrix& x, const std::vector<int>& y,
                      const std::vector<int>& classes, const BinaryFitFn& fit) {
  if (x.size() != y.size()) throw std::invalid_argument("one_vs_rest: X and y sizes differ");
  if (classes.size() < 2) {
    throw std::invalid_argument("one_vs_rest: need at least two classes");
  }
  OneVsRest model;
  model.classes = classes;
  model.scorers.reserve(classes.size());
  for (int cls : classes) {
    std::vector<int> binary(y.size());
    for (std::size_t s = 0; s < y.size(); ++s) binary[s] = y[s] == cls ? 1 : -1;
    model.scorers.push_back(fit(x, binary));
  }
  return model;
}

}  // namespace

Matrix OneVsRest::scores(const Matrix& x) const {
  Matrix table(x.size(), std::vector<double>(classes.size(), 0.0));
  for (std::size_t c = 0; c < scorers.size(); ++c) {
    const std::vector<double> column = scorers[c](x);
    if (column.size() != x.size()) {
      throw std::logic_error("one_vs_rest: scorer returned the wrong number of scores");
    }
    for (std::size_t s = 0; s < x.size(); ++s) table[s][c] = column[s];
  }
  return table;
}

std::vector<int> OneVsRest::predict(const Matrix& x) const {
  const Matrix table = scores(x);
  std::vector<int> labels(x.size(), 0);
  for (std::size_t s = 0; s < table.size(); ++s) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < table[s].size(); ++c) {
      if (table[s][c] > table[s][best]) best = c;
    }
    labels[s] = classes[best];
  }
  return labels;
}

OneVsRest one_vs_rest_fit(const Matrix& x, const std::vector<int>& y, const BinaryFitFn& fit) {
  std::set<int> seen(y.begin(), y.end());
  return fit_against(x, y, std::vector<int>(seen.begin(), seen.end()), fit);
}

OneVsRest one_vs_rest_fit(const Matrix& x, const std::vector<int>& y,
                          const std::vector<int>& expected_classes, const BinaryFitFn& fit) {
  std::vector<int> classes = expected_classes;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const std::set<int> seen(y.begin(), y.end());
  for (int cls : classes) {
    if (!seen.count(cls)) {
      throw std::invalid_argument("one_vs_rest: class " + std::to_string(cls) +
                                  " has no training examples");
    }
  }
  return fit_against(x, y, classes, fit);
}

}  // namespace qnids
