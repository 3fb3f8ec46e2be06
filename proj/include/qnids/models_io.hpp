// SPDX-License-Identifier: Apache-2.0
//
// JSON persistence for trained models.  Every loader re-validates the
// invariants of what it reads (spec fields, parameter-vector lengths, dual
// coefficient bounds, tree shapes) so a tampered or stale file fails fast.
#pragma once

#include <string>

#include <json.hpp>

#include "qnids/baselines.hpp"
#include "qnids/qcnn.hpp"
#include "qnids/qsvm.hpp"
#include "qnids/vqc.hpp"

namespace qnids {

nlohmann::json feature_map_spec_to_json(const FeatureMapSpec& spec);
FeatureMapSpec feature_map_spec_from_json(const nlohmann::json& j);

nlohmann::json ansatz_spec_to_json(const AnsatzSpec& spec);
AnsatzSpec ansatz_spec_from_json(const nlohmann::json& j);

nlohmann::json optimizer_config_to_json(const OptimizerConfig& config);
OptimizerConfig optimizer_config_from_json(const nlohmann::json& j);

// Tagged model payloads: {"model_type": "...", ...fields...}.
nlohmann::json vqc_to_json(const VqcModel& model);
VqcModel vqc_from_json(const nlohmann::json& j);

nlohmann::json qsvm_to_json(const QsvmModel& model);
QsvmModel qsvm_from_json(const nlohmann::json& j);

nlohmann::json qcnn_to_json(const QcnnModel& model);
QcnnModel qcnn_from_json(const nlohmann::json& j);

nlohmann::json classical_svm_to_json(const ClassicalSvmModel& model);
ClassicalSvmModel classical_svm_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const Forest& forest);
Forest forest_from_json(const nlohmann::json& j);

// File helpers: pretty-printed UTF-8 with a trailing newline.
void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace qnids
