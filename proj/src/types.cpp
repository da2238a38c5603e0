#include "c3o/types.hpp"

#include <algorithm>
#include <cmath>

namespace c3o {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::UnknownMachineType: return "UnknownMachineType";
    case ErrorKind::HeterogeneousFeatures: return "HeterogeneousFeatures";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NotEnoughData: return "NotEnoughData";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::FeatureMismatch: return "FeatureMismatch";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::FeatureKeyMismatch: return "FeatureKeyMismatch";
    case ErrorKind::NoPredictableCandidate: return "NoPredictableCandidate";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

int catalog_index(const Catalog& catalog, const std::string& name) {
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool lex_less(const FeatureVector& a, const FeatureVector& b) {
  return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(),
                                      b.values.end());
}

namespace {

bool valid_algorithm_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void check_finite_map(const std::map<std::string, double>& values, const std::string& prefix) {
  for (const auto& [key, value] : values) {
    if (key.empty()) throw Error::invalid_field(prefix, "empty key");
    if (!std::isfinite(value)) throw Error::invalid_field(prefix + "." + key, "not finite");
  }
}

}  // namespace

const RuntimeRecord& validate_record(const RuntimeRecord& record) {
  if (!valid_algorithm_name(record.signature.algorithm_name)) {
    throw Error::invalid_field("signature.algorithm_name",
                               "must be non-empty, lowercase [a-z0-9_-]+");
  }
  if (record.signature.implementation_id.empty()) {
    throw Error::invalid_field("signature.implementation_id", "must be non-empty");
  }
  if (record.config.machine_type.empty()) {
    throw Error::invalid_field("config.machine_type", "must be non-empty");
  }
  if (record.config.node_count < 1) {
    throw Error::invalid_field("config.node_count", "must be >= 1");
  }
  check_finite_map(record.data_characteristics, "data_characteristics");
  check_finite_map(record.parameters, "parameters");
  auto size_it = record.data_characteristics.find("size_mb");
  if (size_it == record.data_characteristics.end()) {
    throw Error::invalid_field("data_characteristics.size_mb", "missing");
  }
  if (size_it->second <= 0.0) {
    throw Error::invalid_field("data_characteristics.size_mb", "must be > 0");
  }
  if (!std::isfinite(record.runtime_ms)) {
    throw Error::invalid_field("runtime_ms", "not finite");
  }
  if (record.runtime_ms <= 0.0) {
    throw Error::invalid_field("runtime_ms", "must be > 0");
  }
  return record;
}

double median_runtime(std::vector<double> replicates) {
  if (replicates.empty()) throw Error(ErrorKind::EmptyInput, "median of empty list");
  std::sort(replicates.begin(), replicates.end());
  const std::size_t n = replicates.size();
  if (n % 2 == 1) return replicates[n / 2];
  return 0.5 * (replicates[n / 2 - 1] + replicates[n / 2]);
}

}  // namespace c3o
