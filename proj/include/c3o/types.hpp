#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace c3o {

enum class ErrorKind {
  InvalidField,
  UnknownMachineType,
  HeterogeneousFeatures,
  EmptyInput,
  NotEnoughData,
  EmptyDataset,
  FeatureMismatch,
  SignatureMismatch,
  FeatureKeyMismatch,
  NoPredictableCandidate,
  InvalidScenario,
  ParseError,
  IoError,
};

const char* to_string(ErrorKind kind);

// Single exception type for all domain errors; the kind is the stable,
// machine-checkable part of the contract, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  static Error invalid_field(const std::string& path, const std::string& reason) {
    return Error(ErrorKind::InvalidField, path + ": " + reason);
  }
  static Error unknown_machine_type(const std::string& name) {
    return Error(ErrorKind::UnknownMachineType, name);
  }

 private:
  ErrorKind kind_;
};

// Identifies the shared job whose runtime records may be pooled. Records with
// different implementation ids never end up in one training set.
struct JobSignature {
  std::string algorithm_name;
  std::string implementation_id;

  bool operator==(const JobSignature&) const = default;
};

struct MachineType {
  std::string name;
  int vcpus = 0;
  double memory_gb = 0.0;
  double price_per_hour = 0.0;

  bool operator==(const MachineType&) const = default;
};

using Catalog = std::vector<MachineType>;

// Zero-based position of a machine type in the catalog, -1 if absent.
int catalog_index(const Catalog& catalog, const std::string& name);

struct ClusterConfig {
  std::string machine_type;
  int node_count = 1;

  bool operator==(const ClusterConfig&) const = default;
};

// One historical execution of a job.
struct RuntimeRecord {
  JobSignature signature;
  ClusterConfig config;
  std::map<std::string, double> data_characteristics;  // always contains "size_mb"
  std::map<std::string, double> parameters;
  std::string context_id;
  double runtime_ms = 0.0;
  std::int64_t submitted_at = 0;

  bool operator==(const RuntimeRecord&) const = default;
};

// Numeric encoding of a record's runtime-influencing factors. Feature order is
// fixed: machine_type_index, node_count, data-characteristic keys (sorted),
// parameter keys (sorted).
struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;

  bool operator==(const FeatureVector&) const = default;
};

// Lexicographic comparison of the value sequences; names are assumed equal.
bool lex_less(const FeatureVector& a, const FeatureVector& b);

struct RuntimeTarget {
  double max_runtime_ms = 0.0;
  double safety_margin = 1.0;  // predicted runtime x margin must fit the target
};

// Returns the record unchanged iff every type invariant holds, otherwise
// throws InvalidField with the offending path.
const RuntimeRecord& validate_record(const RuntimeRecord& record);

// Median with the usual even-length convention (mean of the central pair).
double median_runtime(std::vector<double> replicates);

}  // namespace c3o
