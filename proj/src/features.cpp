#include "c3o/features.hpp"

#include <limits>

namespace c3o {

FeatureVector encode_features(const RuntimeRecord& record, const Catalog& catalog) {
  const int machine_index = catalog_index(catalog, record.config.machine_type);
  if (machine_index < 0) throw Error::unknown_machine_type(record.config.machine_type);

  FeatureVector out;
  out.names.reserve(2 + record.data_characteristics.size() + record.parameters.size());
  out.values.reserve(out.names.capacity());
  out.names.emplace_back(kMachineTypeFeature);
  out.values.push_back(static_cast<double>(machine_index));
  out.names.emplace_back(kNodeCountFeature);
  out.values.push_back(static_cast<double>(record.config.node_count));
  for (const auto& [key, value] : record.data_characteristics) {
    out.names.push_back(key);
    out.values.push_back(value);
  }
  for (const auto& [key, value] : record.parameters) {
    out.names.push_back(key);
    out.values.push_back(value);
  }
  return out;
}

double NormalizationTable::normalize_value(std::size_t feature, double value) const {
  const double lo = mins[feature];
  const double hi = maxs[feature];
  if (hi <= lo) return 0.5;
  return (value - lo) / (hi - lo);
}

double NormalizationTable::denormalize_value(std::size_t feature, double normalized) const {
  const double lo = mins[feature];
  const double hi = maxs[feature];
  if (hi <= lo) return lo;
  return lo + normalized * (hi - lo);
}

FeatureVector NormalizationTable::normalize(const FeatureVector& vector) const {
  if (vector.names != names) {
    throw Error(ErrorKind::FeatureMismatch, "vector does not match normalization table");
  }
  FeatureVector out;
  out.names = names;
  out.values.resize(vector.values.size());
  for (std::size_t j = 0; j < vector.values.size(); ++j) {
    out.values[j] = normalize_value(j, vector.values[j]);
  }
  return out;
}

std::pair<std::vector<FeatureVector>, NormalizationTable> normalize_features(
    const std::vector<FeatureVector>& vectors) {
  NormalizationTable table;
  if (vectors.empty()) return {{}, table};

  table.names = vectors.front().names;
  for (const auto& v : vectors) {
    if (v.names != table.names) {
      throw Error(ErrorKind::HeterogeneousFeatures, "feature name lists differ");
    }
  }
  const std::size_t dim = table.names.size();
  table.mins.assign(dim, std::numeric_limits<double>::infinity());
  table.maxs.assign(dim, -std::numeric_limits<double>::infinity());
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < dim; ++j) {
      table.mins[j] = std::min(table.mins[j], v.values[j]);
      table.maxs[j] = std::max(table.maxs[j], v.values[j]);
    }
  }

  std::vector<FeatureVector> normalized;
  normalized.reserve(vectors.size());
  for (const auto& v : vectors) normalized.push_back(table.normalize(v));
  return {std::move(normalized), std::move(table)};
}

}  // namespace c3o
