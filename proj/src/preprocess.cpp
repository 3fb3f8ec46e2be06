// SPDX-License-Identifier: Apache-2.0
#include "qnids/preprocess.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qnids/errors.hpp"
#include "qnids/param_expr.hpp"
#include "qnids/rng.hpp"

namespace qnids {

namespace {

std::size_t width_of(const Matrix& data) {
  if (data.empty()) throw DataError("preprocess: empty matrix");
  return data.front().size();
}

// Seeded Fisher-Yates shuffle of an index list.
void shuffle_indices(std::vector<std::size_t>& indices, Rng& rng) {
  for (std::size_t i = indices.size(); i > 1; --i) {
    std::swap(indices[i - 1], indices[rng.uniform_int(i)]);
  }
}

std::map<int, std::vector<std::size_t>> rows_by_class(const std::vector<int>& y) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < y.size(); ++r) groups[y[r]].push_back(r);
  return groups;
}

Matrix take_rows(const Matrix& data, const std::vector<std::size_t>& rows) {
  Matrix out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(data[r]);
  return out;
}

std::vector<int> take_labels(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(y[r]);
  return out;
}

std::vector<double> column_variances(const Matrix& train) {
  const std::size_t d = width_of(train);
  const auto n = static_cast<double>(train.size());
  std::vector<double> variances(d, 0.0);
  if (train.size() < 2) return variances;
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (const auto& row : train) mean += row[c];
    mean /= n;
    double ss = 0.0;
    for (const auto& row : train) {
      const double diff = row[c] - mean;
      ss += diff * diff;
    }
    variances[c] = ss / (n - 1.0);
  }
  return variances;
}

}  // namespace

Imputer Imputer::fit(const Matrix& train) {
  const std::size_t d = width_of(train);
  Imputer imputer;
  imputer.medians.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> values;
    for (const auto& row : train) {
      if (!std::isnan(row[c])) values.push_back(row[c]);
    }
    if (values.empty()) continue;  // all-NaN column imputes to 0 by convention
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    imputer.medians[c] =
        values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  }
  return imputer;
}

void Imputer::apply(Matrix& data) const {
  for (auto& row : data) {
    if (row.size() != medians.size()) throw DataError("imputer: width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::isnan(row[c])) row[c] = medians[c];
    }
  }
}

MinMaxScaler MinMaxScaler::fit(const Matrix& train, double hi) {
  const std::size_t d = width_of(train);
  MinMaxScaler scaler;
  scaler.hi = hi;
  scaler.mins.assign(d, 0.0);
  scaler.maxs.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double lo = train.front()[c];
    double up = train.front()[c];
    for (const auto& row : train) {
      lo = std::min(lo, row[c]);
      up = std::max(up, row[c]);
    }
    scaler.mins[c] = lo;
    scaler.maxs[c] = up;
  }
  return scaler;
}

void MinMaxScaler::apply(Matrix& data) const {
  for (auto& row : data) {
    if (row.size() != mins.size()) throw DataError("scaler: width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double span = maxs[c] - mins[c];
      if (span <= 0.0) {
        row[c] = 0.0;  // constant train column
        continue;
      }
      const double clipped = std::clamp(row[c], mins[c], maxs[c]);
      row[c] = (clipped - mins[c]) / span * hi;
    }
  }
}

Pca Pca::fit(const Matrix& train, int target_dim) {
  const std::size_t d = width_of(train);
  if (target_dim < 1 || static_cast<std::size_t>(target_dim) > d) {
    throw DataError("pca: target_dim outside [1, feature count]");
  }
  if (train.size() < 2) throw DataError("pca: need at least two train rows");

  Pca pca;
  pca.means.assign(d, 0.0);
  for (const auto& row : train) {
    for (std::size_t c = 0; c < d; ++c) pca.means[c] += row[c];
  }
  for (double& m : pca.means) m /= static_cast<double>(train.size());

  Eigen::MatrixXd centered(train.size(), d);
  for (std::size_t r = 0; r < train.size(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      centered(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          train[r][c] - pca.means[c];
    }
  }
  const Eigen::MatrixXd covariance =
      centered.transpose() * centered / static_cast<double>(train.size() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw NumericalError("pca: eigendecomposition failed");

  // Eigenvalues come back ascending; walk from the largest down.
  pca.components.reserve(static_cast<std::size_t>(target_dim));
  for (int k = 0; k < target_dim; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(d) - 1 - k;
    Eigen::VectorXd axis = solver.eigenvectors().col(col);
    Eigen::Index largest = 0;
    for (Eigen::Index i = 1; i < axis.size(); ++i) {
      if (std::abs(axis(i)) > std::abs(axis(largest))) largest = i;
    }
    if (axis(largest) < 0.0) axis = -axis;
    std::vector<double> component(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) component[c] = axis(static_cast<Eigen::Index>(c));
    pca.components.push_back(std::move(component));
  }
  return pca;
}

Matrix Pca::transform(const Matrix& data) const {
  Matrix out;
  out.reserve(data.size());
  for (const auto& row : data) {
    if (row.size() != means.size()) throw DataError("pca: width mismatch");
    std::vector<double> reduced(components.size(), 0.0);
    for (std::size_t k = 0; k < components.size(); ++k) {
      double dot = 0.0;
      for (std::size_t c = 0; c < row.size(); ++c) {
        dot += (row[c] - means[c]) * components[k][c];
      }
      reduced[k] = dot;
    }
    out.push_back(std::move(reduced));
  }
  return out;
}

Matrix Pca::reconstruct(const Matrix& reduced) const {
  Matrix out;
  out.reserve(reduced.size());
  for (const auto& row : reduced) {
    if (row.size() != components.size()) throw DataError("pca: reduced width mismatch");
    std::vector<double> full = means;
    for (std::size_t k = 0; k < components.size(); ++k) {
      for (std::size_t c = 0; c < full.size(); ++c) full[c] += row[k] * components[k][c];
    }
    out.push_back(std::move(full));
  }
  return out;
}

TopVariance TopVariance::fit(const Matrix& train, int target_dim) {
  const std::size_t d = width_of(train);
  if (target_dim < 1 || static_cast<std::size_t>(target_dim) > d) {
    throw DataError("top_variance: target_dim outside [1, feature count]");
  }
  const std::vector<double> variances = column_variances(train);
  std::vector<std::size_t> order(d);
  for (std::size_t c = 0; c < d; ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return variances[a] > variances[b];
  });
  TopVariance tv;
  tv.keep.assign(order.begin(), order.begin() + target_dim);
  std::sort(tv.keep.begin(), tv.keep.end());
  return tv;
}

Matrix TopVariance::transform(const Matrix& data) const {
  Matrix out;
  out.reserve(data.size());
  for (const auto& row : data) {
    std::vector<double> reduced(keep.size(), 0.0);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      if (keep[k] >= row.size()) throw DataError("top_variance: width mismatch");
      reduced[k] = row[keep[k]];
    }
    out.push_back(std::move(reduced));
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& y, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DataError("split fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  for (auto& [cls, rows] : rows_by_class(y)) {
    if (rows.size() < 2) {
      throw DataError("class " + std::to_string(cls) +
                      " has fewer than 2 samples; cannot split stratified");
    }
    Rng rng(Rng::derive(seed, 0x53504C49 + static_cast<std::uint64_t>(cls)));
    shuffle_indices(rows, rng);
    auto take = static_cast<std::size_t>(
        std::llround(static_cast<double>(rows.size()) * fraction));
    take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::pair<Dataset, Dataset> preprocess(const Dataset& ds, const PreprocessConfig& config) {
  config.validate();
  ds.check_consistent();
  if (ds.size() < 2) throw DataError("preprocess: need at least two rows");
  if (static_cast<std::size_t>(config.target_dim) > ds.dim()) {
    throw DataError("preprocess: target_dim " + std::to_string(config.target_dim) +
                    " exceeds feature count " + std::to_string(ds.dim()));
  }

  // Optional downsampling of majority classes to the minority count.
  std::vector<std::size_t> kept(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) kept[r] = r;
  std::string balance_note;
  if (config.balance == Balance::Downsample) {
    auto groups = rows_by_class(ds.y);
    std::size_t minority = ds.size();
    for (const auto& [cls, rows] : groups) minority = std::min(minority, rows.size());
    kept.clear();
    for (auto& [cls, rows] : groups) {
      Rng rng(Rng::derive(config.seed, 0x42414C41 + static_cast<std::uint64_t>(cls)));
      shuffle_indices(rows, rng);
      rows.resize(minority);
      kept.insert(kept.end(), rows.begin(), rows.end());
    }
    std::sort(kept.begin(), kept.end());
    balance_note = "downsample: all classes to " + std::to_string(minority) + " rows";
  }

  std::vector<int> labels = take_labels(ds.y, kept);
  const auto [train_local, test_local] = stratified_split(labels, config.split, config.seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t i : train_local) train_rows.push_back(kept[i]);
  for (std::size_t i : test_local) test_rows.push_back(kept[i]);

  Matrix train_x = take_rows(ds.x, train_rows);
  Matrix test_x = take_rows(ds.x, test_rows);

  const Imputer imputer = Imputer::fit(train_x);
  imputer.apply(train_x);
  imputer.apply(test_x);

  const MinMaxScaler scale1 = MinMaxScaler::fit(train_x, std::numbers::pi);
  scale1.apply(train_x);
  scale1.apply(test_x);

  std::vector<std::string> reduced_names;
  if (config.reducer == Reducer::Pca) {
    const Pca pca = Pca::fit(train_x, config.target_dim);
    train_x = pca.transform(train_x);
    test_x = pca.transform(test_x);
    for (int k = 0; k < config.target_dim; ++k) reduced_names.push_back("pc" + std::to_string(k));
  } else {
    const TopVariance tv = TopVariance::fit(train_x, config.target_dim);
    train_x = tv.transform(train_x);
    test_x = tv.transform(test_x);
    for (std::size_t c : tv.keep) reduced_names.push_back(ds.feature_names[c]);
  }

  const MinMaxScaler scale2 = MinMaxScaler::fit(train_x, std::numbers::pi);
  scale2.apply(train_x);
  scale2.apply(test_x);

  Dataset train;
  Dataset test;
  train.x = std::move(train_x);
  test.x = std::move(test_x);
  train.y = take_labels(ds.y, train_rows);
  test.y = take_labels(ds.y, test_rows);
  train.class_names = ds.class_names;
  test.class_names = ds.class_names;
  train.feature_names = reduced_names;
  test.feature_names = reduced_names;
  train.source = ds.source;
  test.source = ds.source;

  std::vector<std::string> log = ds.transform_log;
  if (!balance_note.empty()) log.push_back(balance_note);
  log.push_back("split: stratified " + format_double(config.split) + " seed " +
                std::to_string(config.seed) + " -> " + std::to_string(train.x.size()) +
                " train / " + std::to_string(test.x.size()) + " test");
  log.push_back("impute: train-fitted medians applied to both splits");
  log.push_back("scale: train-fitted min-max onto [0, pi], test clipped into train range");
  log.push_back("reduce: " + reducer_name(config.reducer) + " train-fitted to " +
                std::to_string(config.target_dim) + " dims");
  log.push_back("scale: train-fitted min-max onto [0, pi] after reduction");
  train.transform_log = log;
  test.transform_log = std::move(log);
  train.check_consistent();
  test.check_consistent();
  return {std::move(train), std::move(test)};
}

}  // namespace qnids
