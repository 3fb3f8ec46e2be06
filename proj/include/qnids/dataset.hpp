// SPDX-License-Identifier: Apache-2.0
//
// Flow-record datasets: a labeled feature matrix with class and feature
// names, a source tag, and an append-only log of every transformation
// applied since ingestion.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnids/kernel.hpp"

namespace qnids {

enum class Reducer { Pca, TopVariance };
enum class Balance { None, Downsample };

std::string reducer_name(Reducer r);
Reducer reducer_from_name(const std::string& name);
std::string balance_name(Balance b);
Balance balance_from_name(const std::string& name);

// Ingestion and preprocessing knobs for one dataset.
struct PreprocessConfig {
  std::string label_column = "label";
  // Class names counting as "attack" when a multi-label set collapses to
  // binary; empty = every class except the benign one.
  std::vector<std::string> positive_classes;
  std::vector<std::string> categorical_columns;
  Reducer reducer = Reducer::Pca;
  int target_dim = 4;   // output feature count = qubit budget
  Balance balance = Balance::None;
  double split = 0.7;   // train fraction, stratified by class
  std::uint64_t seed = 0;

  void validate() const;
};

struct Dataset {
  Matrix x;
  std::vector<int> y;                      // class ids, indexing class_names
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
  std::string source;
  std::vector<std::string> transform_log;  // append-only

  std::size_t size() const { return x.size(); }
  std::size_t dim() const { return x.empty() ? feature_names.size() : x.front().size(); }

  // Distinct class ids present, ascending.
  std::vector<int> present_classes() const;

  // Shape checks: matching row/label counts, rectangular matrix, ids within
  // the class-name table.
  void check_consistent() const;
};

// Header-driven CSV parse.  Columns listed as categorical one-hot encode
// with categories sorted lexicographically; the rest parse as numerics where
// an empty cell becomes NaN (imputed later) and any other unparseable cell
// drops the row (counted in the transform log).  Class ids follow the
// lexicographic order of the distinct label values.
Dataset ingest_csv(const std::string& path, const PreprocessConfig& config);

// Write features plus a trailing label column holding class names.
void write_dataset_csv(const Dataset& ds, const std::string& path);

// Re-read a split written by write_dataset_csv against a fixed class-name
// table (so train and test agree on ids); unknown labels are an error.
Dataset read_labeled_csv(const std::string& path, const std::string& label_column,
                         const std::vector<std::string>& class_names);

}  // namespace qnids
