// SPDX-License-Identifier: Apache-2.0
//
// Quantum convolutional network: alternating two-qubit convolution and
// pooling stages shrink the active register until one qubit survives; the
// class score is the Z expectation on that survivor.  Convolution unit on a
// pair (i, j):
//
//   RY(a) i;  RY(a) j;  CX i j;  RY(b) i;  RY(c) j
//
// with the three angles shared by every pair in the stage.  Pooling maps
// (discard -> keep) as CX(discard, keep) followed by RY(p) on keep, with one
// shared angle per stage; discarded qubits leave the active list and an odd
// leftover stays active untouched.
//
// The built circuit carries one unique symbol per rotation instance
// ("p0", "p1", ...) together with a map from each shared parameter to its
// instances, so gradients can shift a single instance at a time and sum.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qnids/circuit.hpp"
#include "qnids/executor.hpp"
#include "qnids/feature_map.hpp"
#include "qnids/kernel.hpp"
#include "qnids/optimizer.hpp"

namespace qnids {

struct QcnnPlan {
  Circuit circuit;         // symbols p0..p(num_instances-1), one per rotation
  std::size_t num_params = 0;     // shared trainable parameters
  std::size_t num_instances = 0;  // rotation instances in the circuit
  // instances_of_shared[k] lists the instance indices bound to shared
  // parameter k.
  std::vector<std::vector<std::size_t>> instances_of_shared;
  int readout_qubit = 0;
  int num_qubits = 0;

  // Bind every instance symbol from the shared parameter vector.
  std::map<std::string, double> binding(const std::vector<double>& theta) const;
};

// Build the convolution/pooling plan for a register of the given width
// (2 to 12 qubits).
QcnnPlan qcnn_build(int num_qubits);

struct QcnnModel {
  FeatureMapSpec feature_map;
  OptimizerConfig optimizer;
  double threshold = 0.0;
  std::vector<double> theta;  // shared parameters
  bool trained = false;
};

// Train on features `x` with labels in {+1, -1}; returns the optimizer
// trajectory and leaves the trained parameters on the model.
OptimizeResult qcnn_fit(QcnnModel& model, const Matrix& x, const std::vector<int>& y,
                        const Executor& exec);

// Survivor-qubit Z expectations, one per row of `x`.
std::vector<double> qcnn_scores(const QcnnModel& model, const Matrix& x, const Executor& exec);

// Labels in {+1, -1}: sign of (score - threshold), ties resolve to +1.
std::vector<int> qcnn_predict(const QcnnModel& model, const Matrix& x, const Executor& exec);

}  // namespace qnids
