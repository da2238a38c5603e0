#pragma once

#include <utility>
#include <vector>

#include "c3o/types.hpp"

namespace c3o {

inline constexpr const char* kMachineTypeFeature = "machine_type_index";
inline constexpr const char* kNodeCountFeature = "node_count";

// Deterministic encoding of a record: machine type becomes its zero-based
// catalog index, then node count, then data characteristics and parameters in
// lexicographic key order. Throws UnknownMachineType if the catalog lacks the
// record's machine type.
FeatureVector encode_features(const RuntimeRecord& record, const Catalog& catalog);

// Per-feature min/max of a training set. Queries are mapped with the same
// table, so values outside the training range land outside [0,1] (no
// clamping). Constant features map to 0.5.
struct NormalizationTable {
  std::vector<std::string> names;
  std::vector<double> mins;
  std::vector<double> maxs;

  double normalize_value(std::size_t feature, double value) const;
  double denormalize_value(std::size_t feature, double normalized) const;
  FeatureVector normalize(const FeatureVector& vector) const;  // throws FeatureMismatch
};

// Maps each feature affinely to [0,1] over the given vectors and returns the
// table used, so query points can be normalized identically.
std::pair<std::vector<FeatureVector>, NormalizationTable> normalize_features(
    const std::vector<FeatureVector>& vectors);  // throws HeterogeneousFeatures

}  // namespace c3o
