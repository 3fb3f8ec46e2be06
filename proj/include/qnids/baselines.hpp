// SPDX-License-Identifier: Apache-2.0
//
// Classical comparison models: a from-scratch random forest (bagged
// Gini-split decision trees) and classical kernel SVMs built on the same
// dual solver as the quantum-kernel path.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnids/kernel.hpp"
#include "qnids/svm.hpp"

namespace qnids {

// One binary-split tree stored as parallel node records; leaves keep raw
// class counts so the forest can vote with them.
struct DecisionTree {
  struct Node {
    bool leaf = true;
    int feature = -1;      // internal nodes only
    double threshold = 0;  // go left when x[feature] < threshold
    int left = -1;
    int right = -1;
    std::vector<long long> counts;  // leaves only, indexed by class id
  };
  std::vector<Node> nodes;  // node 0 is the root

  // Class-count vector at the leaf this sample lands in.
  const std::vector<long long>& decide(const std::vector<double>& x) const;
};

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 12;
  int min_samples_leaf = 2;
  std::uint64_t seed = 0;
  int jobs = 0;  // worker threads for tree training; 0 = hardware default

  void validate() const;
};

struct Forest {
  std::vector<DecisionTree> trees;
  int num_classes = 0;
  ForestConfig config;
};

// Gini impurity 1 - sum p^2 of a class-count vector (0 for empty counts).
double gini_impurity(const std::vector<long long>& counts);

// Bagged trees on bootstrap resamples; each split searches ceil(sqrt(d))
// randomly chosen features for the best Gini-weighted threshold.
// Deterministic for a fixed seed and row order.
Forest rf_fit(const Matrix& x, const std::vector<int>& y, const ForestConfig& config);

// Majority vote over summed leaf counts; ties pick the lowest class id.
std::vector<int> rf_predict(const Forest& forest, const Matrix& x);

// Per-class vote shares in [0, 1], one row per sample (used as one-vs-rest
// style scores).
Matrix rf_vote_shares(const Forest& forest, const Matrix& x);

// Classical kernels on raw feature rows.
KernelMatrix rbf_gram(const Matrix& x, double gamma);
KernelMatrix rbf_cross(const Matrix& rows, const Matrix& cols, double gamma);
KernelMatrix linear_gram(const Matrix& x);
KernelMatrix linear_cross(const Matrix& rows, const Matrix& cols);

// Kernel SVM on the RBF Gram matrix; gamma <= 0 selects the 1/d default.
SvmDual rbf_svm_fit(const Matrix& x, const std::vector<int>& y, double C = 1.0,
                    double gamma = 0.0);

// Persistable classical kernel SVM (rbf or linear) holding its support rows
// so new samples can be scored without the training set.
struct ClassicalSvmModel {
  std::string kernel = "rbf";  // "rbf" | "linear"
  double C = 1.0;
  double gamma = 0.0;  // rbf only; <= 0 selects 1/d at fit time
  Matrix support_rows;
  std::vector<double> coeffs;  // alpha_i * y_i
  double b = 0.0;
  bool trained = false;
};

SvmDual classical_svm_fit(ClassicalSvmModel& model, const Matrix& x, const std::vector<int>& y);
std::vector<double> classical_svm_scores(const ClassicalSvmModel& model, const Matrix& x);
std::vector<int> classical_svm_predict(const ClassicalSvmModel& model, const Matrix& x);

}  // namespace qnids
