// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale synthetic stand-ins for flow-record datasets:
//  - blobs: well-separated Gaussian clusters (class k centered 5 units from
//    the origin along alternating axes, unit variance);
//  - xor_rings: 2-d points labeled by the XOR of coordinate signs, with a
//    margin band around the axes (linearly inseparable, kernel-separable);
//  - adhoc_zz: points labeled by which of two anchor states they are closer
//    to under the exact ZZ-feature-map fidelity kernel, with a margin —
//    separable in the quantum feature space by construction.
#pragma once

#include <cstdint>
#include <string>

#include "qnids/dataset.hpp"

namespace qnids {

enum class SyntheticKind { Blobs, XorRings, AdhocZz };

std::string synthetic_kind_name(SyntheticKind kind);
SyntheticKind synthetic_kind_from_name(const std::string& name);

struct SyntheticConfig {
  SyntheticKind kind = SyntheticKind::Blobs;
  int n_per_class = 50;  // at least 4
  int dim = 4;           // xor_rings always emits 2 features
  int num_classes = 2;   // blobs only; the others are binary
  std::uint64_t seed = 0;

  void validate() const;
};

Dataset make_synthetic(const SyntheticConfig& config);

}  // namespace qnids
