// SPDX-License-Identifier: Apache-2.0
#include "qnids/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "qnids/parallel.hpp"

namespace qnids {

namespace {

void check_widths(const FeatureMapSpec& map, const Matrix& x, const char* where) {
  const std::size_t expected = static_cast<std::size_t>(feature_dimension(map));
  for (const auto& row : x) {
    const bool ok = map.kind == FeatureMapKind::RawFeatureVector
                        ? (!row.empty() && row.size() <= expected)
                        : row.size() == expected;
    if (!ok) {
      throw std::invalid_argument(std::string(where) + ": sample has " +
                                  std::to_string(row.size()) + " features, feature map expects " +
                                  std::to_string(expected));
    }
  }
}

std::vector<StateVector> encode_all(const FeatureEncoder& encoder, const Matrix& x, int jobs) {
  std::vector<StateVector> states(x.size(), StateVector(1));
  parallel_for(x.size(), jobs,
               [&](std::size_t i) { states[i] = encoder.encode(x[i]); });
  return states;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(StateVector::inner(b, a));
}

KernelMatrix exact_gram(const FeatureMapSpec& map, const Matrix& x, const Executor& exec) {
  FeatureEncoder encoder(map);
  std::vector<StateVector> states = encode_all(encoder, x, exec.mode().jobs);
  const std::size_t n = x.size();
  KernelMatrix kernel;
  kernel.mode = ExecMode::Exact;
  kernel.values.assign(n, std::vector<double>(n, 0.0));
  parallel_for(n, exec.mode().jobs, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) kernel.values[i][j] = fidelity(states[i], states[j]);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) kernel.values[i][j] = kernel.values[j][i];
  }
  return kernel;
}

KernelMatrix exact_cross(const FeatureMapSpec& map, const Matrix& x_rows, const Matrix& x_cols,
                         const Executor& exec) {
  FeatureEncoder encoder(map);
  std::vector<StateVector> row_states = encode_all(encoder, x_rows, exec.mode().jobs);
  std::vector<StateVector> col_states = encode_all(encoder, x_cols, exec.mode().jobs);
  KernelMatrix kernel;
  kernel.mode = ExecMode::Exact;
  kernel.values.assign(x_rows.size(), std::vector<double>(x_cols.size(), 0.0));
  parallel_for(x_rows.size(), exec.mode().jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < x_cols.size(); ++j) {
      kernel.values[i][j] = fidelity(row_states[i], col_states[j]);
    }
  });
  return kernel;
}

// One sampled kernel entry: P(all zeros) of U(x_a) followed by U(x_b)^-1.
double sampled_entry(const FeatureEncoder& encoder, const std::vector<double>& x_a,
                     const std::vector<double>& x_b, const Executor& exec, std::uint64_t stream) {
  Circuit forward = encoder.bound_circuit(x_a);
  Circuit backward = encoder.bound_circuit(x_b).inverse();
  return exec.all_zeros_probability(compose(forward, backward), stream);
}

void require_sampleable(const FeatureMapSpec& map) {
  if (map.kind == FeatureMapKind::RawFeatureVector) {
    throw std::invalid_argument(
        "kernel: amplitude encoding has no inverse-preparation circuit; "
        "use exact mode for this feature map");
  }
}

KernelMatrix sampled_gram(const FeatureMapSpec& map, const Matrix& x, const Executor& exec) {
  require_sampleable(map);
  FeatureEncoder encoder(map);
  const std::size_t n = x.size();
  KernelMatrix kernel;
  kernel.mode = ExecMode::Shots;
  kernel.values.assign(n, std::vector<double>(n, 0.0));
  // Flatten the upper triangle (i <= j) so entries parallelize evenly; the
  // stream id is the dense index, keeping results thread-count invariant.
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) entries.emplace_back(i, j);
  }
  parallel_for(entries.size(), exec.mode().jobs, [&](std::size_t e) {
    auto [i, j] = entries[e];
    kernel.values[i][j] = sampled_entry(encoder, x[i], x[j], exec, i * n + j);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) kernel.values[i][j] = kernel.values[j][i];
  }
  return kernel;
}

KernelMatrix sampled_cross(const FeatureMapSpec& map, const Matrix& x_rows, const Matrix& x_cols,
                           const Executor& exec) {
  require_sampleable(map);
  FeatureEncoder encoder(map);
  KernelMatrix kernel;
  kernel.mode = ExecMode::Shots;
  kernel.values.assign(x_rows.size(), std::vector<double>(x_cols.size(), 0.0));
  const std::size_t cols = x_cols.size();
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < x_rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) entries.emplace_back(i, j);
  }
  parallel_for(entries.size(), exec.mode().jobs, [&](std::size_t e) {
    auto [i, j] = entries[e];
    kernel.values[i][j] = sampled_entry(encoder, x_rows[i], x_cols[j], exec, i * cols + j);
  });
  return kernel;
}

}  // namespace

KernelMatrix kernel_matrix(const FeatureMapSpec& map, const Matrix& x, const Executor& exec) {
  map.validate();
  check_widths(map, x, "kernel_matrix");
  return exec.mode().exec == ExecMode::Exact ? exact_gram(map, x, exec)
                                             : sampled_gram(map, x, exec);
}

KernelMatrix kernel_cross(const FeatureMapSpec& map, const Matrix& x_rows, const Matrix& x_cols,
                          const Executor& exec) {
  map.validate();
  check_widths(map, x_rows, "kernel_cross");
  check_widths(map, x_cols, "kernel_cross");
  return exec.mode().exec == ExecMode::Exact ? exact_cross(map, x_rows, x_cols, exec)
                                             : sampled_cross(map, x_rows, x_cols, exec);
}

}  // namespace qnids
