// SPDX-License-Identifier: Apache-2.0
#include "qnids/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qnids/parallel.hpp"
#include "qnids/rng.hpp"

namespace qnids {

double gini_impurity(const std::vector<long long>& counts) {
  long long total = 0;
  for (long long c : counts) total += c;
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (long long c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

const std::vector<long long>& DecisionTree::decide(const std::vector<double>& x) const {
  int node = 0;
  for (;;) {
    const Node& n = nodes[static_cast<std::size_t>(node)];
    if (n.leaf) return n.counts;
    if (static_cast<std::size_t>(n.feature) >= x.size()) {
      throw std::invalid_argument("decision tree: sample has too few features");
    }
    node = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
}

void ForestConfig::validate() const {
  if (n_trees < 1) throw std::invalid_argument("forest: n_trees must be positive");
  if (max_depth < 1) throw std::invalid_argument("forest: max_depth must be positive");
  if (min_samples_leaf < 1) {
    throw std::invalid_argument("forest: min_samples_leaf must be positive");
  }
}

namespace {

struct TreeBuilder {
  const Matrix& x;
  const std::vector<int>& y;
  const ForestConfig& config;
  int num_classes;
  int features_per_split;
  Rng rng;
  DecisionTree tree;

  std::vector<long long> class_counts(const std::vector<std::size_t>& rows) const {
    std::vector<long long> counts(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])]++;
    return counts;
  }

  // Draw `features_per_split` distinct feature indices, reported ascending
  // so equal-quality splits break toward the lowest feature.
  std::vector<int> feature_subset() {
    const int d = static_cast<int>(x.front().size());
    std::vector<int> all(static_cast<std::size_t>(d));
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < features_per_split; ++k) {
      const auto j = k + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d - k)));
      std::swap(all[static_cast<std::size_t>(k)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(features_per_split));
    std::sort(all.begin(), all.end());
    return all;
  }

  struct Split {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  Split best_split(const std::vector<std::size_t>& rows) {
    Split best;
    const double node_size = static_cast<double>(rows.size());
    for (int feature : feature_subset()) {
      std::vector<std::pair<double, int>> ordered;
      ordered.reserve(rows.size());
      for (std::size_t r : rows) {
        ordered.emplace_back(x[r][static_cast<std::size_t>(feature)], y[r]);
      }
      std::sort(ordered.begin(), ordered.end());
      std::vector<long long> left(static_cast<std::size_t>(num_classes), 0);
      std::vector<long long> right = class_counts(rows);
      for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
        left[static_cast<std::size_t>(ordered[i].second)]++;
        right[static_cast<std::size_t>(ordered[i].second)]--;
        if (ordered[i].first == ordered[i + 1].first) continue;
        const auto left_n = static_cast<long long>(i + 1);
        const auto right_n = static_cast<long long>(ordered.size() - i - 1);
        if (left_n < config.min_samples_leaf || right_n < config.min_samples_leaf) continue;
        const double impurity = (static_cast<double>(left_n) * gini_impurity(left) +
                                 static_cast<double>(right_n) * gini_impurity(right)) /
                                node_size;
        if (!best.found || impurity < best.impurity) {
          best.found = true;
          best.feature = feature;
          best.threshold = 0.5 * (ordered[i].first + ordered[i + 1].first);
          best.impurity = impurity;
        }
      }
    }
    return best;
  }

  int build(const std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    std::vector<long long> counts = class_counts(rows);
    const bool pure = std::count(counts.begin(), counts.end(), 0LL) >= num_classes - 1;
    if (depth >= config.max_depth || pure ||
        static_cast<long long>(rows.size()) < 2LL * config.min_samples_leaf) {
      tree.nodes[static_cast<std::size_t>(id)].counts = std::move(counts);
      return id;
    }
    const Split split = best_split(rows);
    if (!split.found || split.impurity >= gini_impurity(counts)) {
      tree.nodes[static_cast<std::size_t>(id)].counts = std::move(counts);
      return id;
    }
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      (x[r][static_cast<std::size_t>(split.feature)] < split.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    DecisionTree::Node& node = tree.nodes[static_cast<std::size_t>(id)];
    node.leaf = false;
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  DecisionTree run() {
    const std::size_t n = x.size();
    std::vector<std::size_t> bootstrap(n);
    for (auto& r : bootstrap) r = rng.uniform_int(n);
    build(bootstrap, 0);
    return std::move(tree);
  }
};

void check_training_rows(const Matrix& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("forest: X and y sizes differ");
  if (x.size() < 2) throw std::invalid_argument("forest: need at least two samples");
  if (x.front().empty()) throw std::invalid_argument("forest: need at least one feature");
  for (const auto& row : x) {
    if (row.size() != x.front().size()) {
      throw std::invalid_argument("forest: ragged feature matrix");
    }
  }
  for (int label : y) {
    if (label < 0) throw std::invalid_argument("forest: class ids must be non-negative");
  }
}

// Each tree casts one vote for its leaf's majority class (leaf ties toward
// the lowest class id).
std::vector<long long> forest_votes(const Forest& forest, const std::vector<double>& x) {
  std::vector<long long> votes(static_cast<std::size_t>(forest.num_classes), 0);
  for (const DecisionTree& tree : forest.trees) {
    const std::vector<long long>& counts = tree.decide(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
      if (counts[c] > counts[best]) best = c;
    }
    votes[best]++;
  }
  return votes;
}

}  // namespace

Forest rf_fit(const Matrix& x, const std::vector<int>& y, const ForestConfig& config) {
  config.validate();
  check_training_rows(x, y);
  const int num_classes = *std::max_element(y.begin(), y.end()) + 1;
  const int d = static_cast<int>(x.front().size());
  const int features_per_split = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));

  Forest forest;
  forest.num_classes = num_classes;
  forest.config = config;
  forest.trees.resize(static_cast<std::size_t>(config.n_trees));
  const int jobs =
      config.jobs > 0 ? config.jobs : static_cast<int>(std::thread::hardware_concurrency());
  parallel_for(forest.trees.size(), jobs, [&](std::size_t t) {
    TreeBuilder builder{x,
                        y,
                        config,
                        num_classes,
                        features_per_split,
                        Rng(Rng::derive(config.seed, t)),
                        DecisionTree{}};
    forest.trees[t] = builder.run();
  });
  return forest;
}

std::vector<int> rf_predict(const Forest& forest, const Matrix& x) {
  std::vector<int> labels;
  labels.reserve(x.size());
  for (const auto& row : x) {
    const std::vector<long long> votes = forest_votes(forest, row);
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
      if (votes[c] > votes[best]) best = c;
    }
    labels.push_back(static_cast<int>(best));
  }
  return labels;
}

Matrix rf_vote_shares(const Forest& forest, const Matrix& x) {
  Matrix shares;
  shares.reserve(x.size());
  const double total = static_cast<double>(forest.trees.size());
  for (const auto& row : x) {
    const std::vector<long long> votes = forest_votes(forest, row);
    std::vector<double> share(votes.size(), 0.0);
    for (std::size_t c = 0; c < votes.size(); ++c) {
      share[c] = static_cast<double>(votes[c]) / total;
    }
    shares.push_back(std::move(share));
  }
  return shares;
}

namespace {

void check_kernel_rows(const Matrix& x) {
  if (x.empty()) throw std::invalid_argument("kernel: empty sample set");
  for (const auto& row : x) {
    if (row.size() != x.front().size()) throw std::invalid_argument("kernel: ragged rows");
  }
  if (x.front().empty()) throw std::invalid_argument("kernel: rows need at least one feature");
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

KernelMatrix rbf_gram(const Matrix& x, double gamma) {
  check_kernel_rows(x);
  if (gamma <= 0.0) throw std::invalid_argument("rbf kernel: gamma must be positive");
  const std::size_t n = x.size();
  KernelMatrix gram;
  gram.mode = ExecMode::Exact;
  gram.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    gram.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = std::exp(-gamma * squared_distance(x[i], x[j]));
      gram.values[i][j] = k;
      gram.values[j][i] = k;
    }
  }
  return gram;
}

KernelMatrix rbf_cross(const Matrix& rows, const Matrix& cols, double gamma) {
  check_kernel_rows(rows);
  check_kernel_rows(cols);
  if (rows.front().size() != cols.front().size()) {
    throw std::invalid_argument("rbf kernel: feature widths differ");
  }
  if (gamma <= 0.0) throw std::invalid_argument("rbf kernel: gamma must be positive");
  KernelMatrix block;
  block.mode = ExecMode::Exact;
  block.values.assign(rows.size(), std::vector<double>(cols.size(), 0.0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      block.values[i][j] = std::exp(-gamma * squared_distance(rows[i], cols[j]));
    }
  }
  return block;
}

KernelMatrix linear_gram(const Matrix& x) {
  check_kernel_rows(x);
  const std::size_t n = x.size();
  KernelMatrix gram;
  gram.mode = ExecMode::Exact;
  gram.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = dot(x[i], x[j]);
      gram.values[i][j] = k;
      gram.values[j][i] = k;
    }
  }
  return gram;
}

KernelMatrix linear_cross(const Matrix& rows, const Matrix& cols) {
  check_kernel_rows(rows);
  check_kernel_rows(cols);
  if (rows.front().size() != cols.front().size()) {
    throw std::invalid_argument("linear kernel: feature widths differ");
  }
  KernelMatrix block;
  block.mode = ExecMode::Exact;
  block.values.assign(rows.size(), std::vector<double>(cols.size(), 0.0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      block.values[i][j] = dot(rows[i], cols[j]);
    }
  }
  return block;
}

SvmDual rbf_svm_fit(const Matrix& x, const std::vector<int>& y, double C, double gamma) {
  check_kernel_rows(x);
  const double g = gamma > 0.0 ? gamma : 1.0 / static_cast<double>(x.front().size());
  return svm_fit(rbf_gram(x, g).values, y, C);
}

SvmDual classical_svm_fit(ClassicalSvmModel& model, const Matrix& x, const std::vector<int>& y) {
  check_kernel_rows(x);
  if (model.C <= 0.0) throw std::invalid_argument("svm: C must be positive");
  SvmDual dual;
  if (model.kernel == "rbf") {
    if (model.gamma <= 0.0) model.gamma = 1.0 / static_cast<double>(x.front().size());
    dual = svm_fit(rbf_gram(x, model.gamma).values, y, model.C);
  } else if (model.kernel == "linear") {
    dual = svm_fit(linear_gram(x).values, y, model.C);
  } else {
    throw std::invalid_argument("svm: unknown kernel '" + model.kernel + "'");
  }
  model.support_rows.clear();
  model.coeffs = dual.coeffs;
  model.b = dual.b;
  for (std::size_t index : dual.support_indices) model.support_rows.push_back(x[index]);
  model.trained = true;
  return dual;
}

std::vector<double> classical_svm_scores(const ClassicalSvmModel& model, const Matrix& x) {
  if (!model.trained) throw std::logic_error("svm: model is not trained");
  if (model.support_rows.empty()) return std::vector<double>(x.size(), model.b);
  const KernelMatrix cross = model.kernel == "rbf"
                                 ? rbf_cross(x, model.support_rows, model.gamma)
                                 : linear_cross(x, model.support_rows);
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

std::vector<int> classical_svm_predict(const ClassicalSvmModel& model, const Matrix& x) {
  std::vector<int> labels;
  for (double score : classical_svm_scores(model, x)) labels.push_back(score >= 0.0 ? 1 : -1);
  return labels;
}

}  // namespace qnids
