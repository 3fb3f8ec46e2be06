// SPDX-License-Identifier: Apache-2.0
#include "qnids/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qnids/errors.hpp"
#include "qnids/feature_map.hpp"
#include "qnids/rng.hpp"
#include "qnids/statevector.hpp"

namespace qnids {

std::string synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Blobs: return "blobs";
    case SyntheticKind::XorRings: return "xor_rings";
    case SyntheticKind::AdhocZz: return "adhoc_zz";
  }
  throw std::logic_error("unreachable synthetic kind");
}

SyntheticKind synthetic_kind_from_name(const std::string& name) {
  if (name == "blobs") return SyntheticKind::Blobs;
  if (name == "xor_rings") return SyntheticKind::XorRings;
  if (name == "adhoc_zz") return SyntheticKind::AdhocZz;
  throw std::invalid_argument("unknown synthetic kind: " + name);
}

void SyntheticConfig::validate() const {
  if (n_per_class < 4) throw std::invalid_argument("synthetic: n_per_class must be >= 4");
  if (dim < 1) throw std::invalid_argument("synthetic: dim must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("synthetic: need at least 2 classes");
  if (kind != SyntheticKind::Blobs && num_classes != 2) {
    throw std::invalid_argument("synthetic: " + synthetic_kind_name(kind) + " is binary only");
  }
  if (kind == SyntheticKind::AdhocZz && (dim < 2 || dim > 10)) {
    throw std::invalid_argument("synthetic: adhoc_zz needs between 2 and 10 features");
  }
}

namespace {

std::vector<std::string> class_name_table(int num_classes) {
  std::vector<std::string> names;
  names.emplace_back("benign");
  if (num_classes == 2) {
    names.emplace_back("attack");
  } else {
    for (int k = 1; k < num_classes; ++k) names.push_back("attack" + std::to_string(k));
  }
  return names;
}

std::vector<std::string> feature_name_table(int dim) {
  std::vector<std::string> names;
  for (int c = 0; c < dim; ++c) names.push_back("f" + std::to_string(c));
  return names;
}

Dataset blobs(const SyntheticConfig& config) {
  Dataset ds;
  ds.feature_names = feature_name_table(config.dim);
  ds.class_names = class_name_table(config.num_classes);
  for (int cls = 0; cls < config.num_classes; ++cls) {
    // Cluster centers alternate sign along cycling axes: +5 e0, -5 e0,
    // +5 e1, ... at unit per-coordinate spread.
    const int axis = (cls / 2) % config.dim;
    const double center = cls % 2 == 0 ? 5.0 : -5.0;
    Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(cls)));
    for (int s = 0; s < config.n_per_class; ++s) {
      std::vector<double> row(static_cast<std::size_t>(config.dim), 0.0);
      for (int c = 0; c < config.dim; ++c) {
        row[static_cast<std::size_t>(c)] = rng.normal(c == axis ? center : 0.0, 1.0);
      }
      ds.x.push_back(std::move(row));
      ds.y.push_back(cls);
    }
  }
  return ds;
}

Dataset xor_rings(const SyntheticConfig& config) {
  constexpr double kMargin = 0.1;
  Dataset ds;
  ds.feature_names = feature_name_table(2);
  ds.class_names = class_name_table(2);
  for (int cls = 0; cls < 2; ++cls) {
    Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(cls)));
    for (int s = 0; s < config.n_per_class; ++s) {
      const double u = rng.uniform(kMargin, 1.0);
      const double v = rng.uniform(kMargin, 1.0);
      const double sign = rng.rademacher();
      // benign fills the same-sign quadrants, attack the opposite-sign ones.
      ds.x.push_back({sign * u, cls == 0 ? sign * v : -sign * v});
      ds.y.push_back(cls);
    }
  }
  return ds;
}

Dataset adhoc_zz(const SyntheticConfig& config) {
  constexpr double kMargin = 0.05;
  FeatureMapSpec map;
  map.kind = FeatureMapKind::ZZFeatureMap;
  map.num_qubits = config.dim;
  map.reps = 2;
  map.entanglement = Entanglement::Linear;
  FeatureEncoder encoder(map);

  const auto draw_point = [&](Rng& rng) {
    std::vector<double> row(static_cast<std::size_t>(config.dim), 0.0);
    for (double& v : row) v = rng.uniform(0.0, std::numbers::pi);
    return row;
  };

  Rng anchor_rng(Rng::derive(config.seed, 0xA11C0));
  const StateVector anchor_plus = encoder.encode(draw_point(anchor_rng));
  const StateVector anchor_minus = encoder.encode(draw_point(anchor_rng));

  Dataset ds;
  ds.feature_names = feature_name_table(config.dim);
  ds.class_names = class_name_table(2);
  Matrix benign;
  Matrix attack;
  Rng rng(Rng::derive(config.seed, 0x5A5A));
  const auto target = static_cast<std::size_t>(config.n_per_class);
  long long attempts = 0;
  const long long max_attempts = 20000LL * config.n_per_class;
  while (benign.size() < target || attack.size() < target) {
    if (++attempts > max_attempts) {
      throw NumericalError("adhoc_zz: margin rejection failed to fill both classes");
    }
    std::vector<double> row = draw_point(rng);
    const StateVector state = encoder.encode(row);
    const double k_plus = std::norm(StateVector::inner(anchor_plus, state));
    const double k_minus = std::norm(StateVector::inner(anchor_minus, state));
    const double diff = k_plus - k_minus;
    // Labels follow which anchor the point resembles more under the quantum
    // kernel; the margin keeps the classes separated in feature space.
    if (diff >= kMargin && attack.size() < target) {
      attack.push_back(std::move(row));
    } else if (diff <= -kMargin && benign.size() < target) {
      benign.push_back(std::move(row));
    }
  }
  for (auto& row : benign) {
    ds.x.push_back(std::move(row));
    ds.y.push_back(0);
  }
  for (auto& row : attack) {
    ds.x.push_back(std::move(row));
    ds.y.push_back(1);
  }
  return ds;
}

}  // namespace

Dataset make_synthetic(const SyntheticConfig& config) {
  config.validate();
  Dataset ds;
  switch (config.kind) {
    case SyntheticKind::Blobs: ds = blobs(config); break;
    case SyntheticKind::XorRings: ds = xor_rings(config); break;
    case SyntheticKind::AdhocZz: ds = adhoc_zz(config); break;
  }
  ds.source = "synth:" + synthetic_kind_name(config.kind) +
              "(n=" + std::to_string(config.n_per_class) + ",d=" + std::to_string(ds.dim()) +
              ",k=" + std::to_string(config.num_classes) +
              ",seed=" + std::to_string(config.seed) + ")";
  ds.transform_log.push_back("generate " + ds.source);
  ds.check_consistent();
  return ds;
}

}  // namespace qnids
