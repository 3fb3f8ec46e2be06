// SPDX-License-Identifier: Apache-2.0
#include "qnids/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qnids/errors.hpp"
#include "qnids/param_expr.hpp"

namespace qnids {

std::string reducer_name(Reducer r) {
  return r == Reducer::Pca ? "pca" : "top_variance";
}

Reducer reducer_from_name(const std::string& name) {
  if (name == "pca") return Reducer::Pca;
  if (name == "top_variance") return Reducer::TopVariance;
  throw std::invalid_argument("unknown reducer: " + name);
}

std::string balance_name(Balance b) {
  return b == Balance::None ? "none" : "downsample";
}

Balance balance_from_name(const std::string& name) {
  if (name == "none") return Balance::None;
  if (name == "downsample") return Balance::Downsample;
  throw std::invalid_argument("unknown balance mode: " + name);
}

void PreprocessConfig::validate() const {
  if (label_column.empty()) throw std::invalid_argument("preprocess: empty label column name");
  if (target_dim < 1) throw std::invalid_argument("preprocess: target_dim must be >= 1");
  if (!(split > 0.0 && split < 1.0)) {
    throw std::invalid_argument("preprocess: split fraction must lie in (0, 1)");
  }
}

std::vector<int> Dataset::present_classes() const {
  std::set<int> seen(y.begin(), y.end());
  return {seen.begin(), seen.end()};
}

void Dataset::check_consistent() const {
  if (x.size() != y.size()) throw DataError("dataset: row count != label count");
  for (const auto& row : x) {
    if (row.size() != dim()) throw DataError("dataset: ragged feature matrix");
  }
  if (!x.empty() && x.front().size() != feature_names.size()) {
    throw DataError("dataset: feature name count != feature count");
  }
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
      throw DataError("dataset: class id outside the class-name table");
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && (std::isspace(static_cast<unsigned char>(s[lo])) != 0)) ++lo;
  while (hi > lo && (std::isspace(static_cast<unsigned char>(s[hi - 1])) != 0)) --hi;
  return s.substr(lo, hi - lo);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// Parse a full-cell double; returns NaN for an empty cell and nullopt for
// garbage.
std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open csv file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Dataset ingest_csv(const std::string& path, const PreprocessConfig& config) {
  config.validate();
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataError("empty csv file: " + path);
  const std::vector<std::string> header = split_csv_line(lines.front());
  if (lines.size() == 1) throw DataError("csv file has a header but no rows: " + path);

  std::size_t label_index = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == config.label_column) label_index = c;
  }
  if (label_index == header.size()) {
    throw DataError("label column '" + config.label_column + "' not found in " + path);
  }
  const std::set<std::string> categorical(config.categorical_columns.begin(),
                                          config.categorical_columns.end());
  for (const std::string& name : config.categorical_columns) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw DataError("categorical column '" + name + "' not found in " + path);
    }
  }

  struct RawRow {
    std::vector<double> numerics;
    std::vector<std::string> categories;  // one per categorical column
    std::string label;
  };
  std::vector<std::size_t> numeric_cols;
  std::vector<std::size_t> categorical_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_index) continue;
    (categorical.count(header[c]) ? categorical_cols : numeric_cols).push_back(c);
  }

  std::vector<RawRow> rows;
  long long dropped = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = split_csv_line(lines[r]);
    if (cells.size() != header.size()) {
      ++dropped;
      continue;
    }
    RawRow row;
    row.label = cells[label_index];
    bool ok = !row.label.empty();
    for (std::size_t c : numeric_cols) {
      const std::optional<double> value = parse_cell(cells[c]);
      if (!value) {
        ok = false;
        break;
      }
      row.numerics.push_back(*value);
    }
    if (ok) {
      for (std::size_t c : categorical_cols) row.categories.push_back(cells[c]);
      rows.push_back(std::move(row));
    } else {
      ++dropped;
    }
  }
  if (rows.empty()) {
    throw DataError("every row of " + path + " was dropped as unparseable");
  }

  // Lexicographically sorted category values per categorical column give a
  // deterministic one-hot layout.
  std::vector<std::vector<std::string>> category_values(categorical_cols.size());
  for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
    std::set<std::string> values;
    for (const RawRow& row : rows) values.insert(row.categories[k]);
    category_values[k].assign(values.begin(), values.end());
  }
  std::set<std::string> label_values;
  for (const RawRow& row : rows) label_values.insert(row.label);

  Dataset ds;
  ds.source = path;
  ds.class_names.assign(label_values.begin(), label_values.end());
  std::map<std::string, int> class_id;
  for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
    class_id[ds.class_names[c]] = static_cast<int>(c);
  }
  for (std::size_t c : numeric_cols) ds.feature_names.push_back(header[c]);
  for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
    for (const std::string& value : category_values[k]) {
      ds.feature_names.push_back(header[categorical_cols[k]] + "=" + value);
    }
  }

  for (const RawRow& row : rows) {
    std::vector<double> features = row.numerics;
    for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
      for (const std::string& value : category_values[k]) {
        features.push_back(row.categories[k] == value ? 1.0 : 0.0);
      }
    }
    ds.x.push_back(std::move(features));
    ds.y.push_back(class_id[row.label]);
  }

  ds.transform_log.push_back(
      "ingest " + path + ": kept " + std::to_string(ds.x.size()) + " rows, dropped " +
      std::to_string(dropped) + " unparseable, " + std::to_string(numeric_cols.size()) +
      " numeric + " + std::to_string(categorical_cols.size()) + " categorical columns -> " +
      std::to_string(ds.feature_names.size()) + " features, " +
      std::to_string(ds.class_names.size()) + " classes");
  ds.check_consistent();
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  ds.check_consistent();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write csv file: " + path);
  for (std::size_t c = 0; c < ds.feature_names.size(); ++c) {
    out << ds.feature_names[c] << ',';
  }
  out << "label\n";
  for (std::size_t r = 0; r < ds.x.size(); ++r) {
    for (double value : ds.x[r]) {
      if (std::isnan(value)) throw DataError("refusing to write NaN feature to " + path);
      out << format_double(value) << ',';
    }
    out << ds.class_names[static_cast<std::size_t>(ds.y[r])] << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

Dataset read_labeled_csv(const std::string& path, const std::string& label_column,
                         const std::vector<std::string>& class_names) {
  PreprocessConfig config;
  config.label_column = label_column;
  Dataset raw = ingest_csv(path, config);

  std::map<std::string, int> id_of;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    id_of[class_names[c]] = static_cast<int>(c);
  }
  Dataset ds;
  ds.x = std::move(raw.x);
  ds.class_names = class_names;
  ds.feature_names = std::move(raw.feature_names);
  ds.source = path;
  ds.transform_log = std::move(raw.transform_log);
  ds.y.reserve(raw.y.size());
  for (int raw_id : raw.y) {
    const std::string& name = raw.class_names[static_cast<std::size_t>(raw_id)];
    const auto it = id_of.find(name);
    if (it == id_of.end()) throw DataError("unknown class '" + name + "' in " + path);
    ds.y.push_back(it->second);
  }
  ds.check_consistent();
  return ds;
}

}  // namespace qnids
