#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "c3o/features.hpp"
#include "c3o/types.hpp"

namespace c3o {

// One training point after replicate collapsing: the feature vector of a
// distinct configuration and the median runtime of its replicates.
struct CollapsedPoint {
  FeatureVector features;
  double runtime_ms = 0.0;
  std::size_t first_index = 0;  // ingestion index of the first replicate
};

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  std::size_t replicates_merged = 0;

  struct Rejection {
    std::size_t batch_index = 0;
    ErrorKind kind = ErrorKind::InvalidField;
    std::string message;
  };
  std::vector<Rejection> rejections;
};

// Absolute Pearson correlation of each feature with the runtime. Zero for
// features whose correlation is undefined (constant feature or runtime).
struct CorrelationWeights {
  std::vector<std::string> names;
  std::vector<double> weights;

  bool operator==(const CorrelationWeights&) const = default;
};

// The runtime data manager for one job signature. Keeps raw records in
// ingestion order and maintains the replicate-collapsed view used for
// training. Single writer, immutable snapshots for readers.
class RuntimeDataset {
 public:
  RuntimeDataset(JobSignature signature, Catalog catalog)
      : signature_(std::move(signature)), catalog_(std::move(catalog)) {}

  // Appends valid records with matching signature and feature-key set, drops
  // exact duplicates, merges replicates into the collapsed view. Never aborts
  // wholesale; per-record rejections land in the report.
  IngestReport ingest(const std::vector<RuntimeRecord>& batch);

  const JobSignature& signature() const { return signature_; }
  const Catalog& catalog() const { return catalog_; }
  const std::vector<RuntimeRecord>& records() const { return records_; }
  const std::vector<CollapsedPoint>& collapsed() const { return collapsed_; }
  bool empty() const { return records_.empty(); }

  // Raw records backing one collapsed point, ingestion order.
  std::vector<const RuntimeRecord*> replicates_of(std::size_t collapsed_index) const;

 private:
  JobSignature signature_;
  Catalog catalog_;
  std::vector<RuntimeRecord> records_;
  std::vector<CollapsedPoint> collapsed_;
  std::vector<std::vector<std::size_t>> groups_;  // collapsed index -> record indices
  std::optional<std::vector<std::string>> data_keys_;
  std::optional<std::vector<std::string>> param_keys_;
};

RuntimeDataset dataset_from_records(const JobSignature& signature, const Catalog& catalog,
                                    const std::vector<RuntimeRecord>& records,
                                    IngestReport* report = nullptr);

// |Pearson r| between each feature and the runtime over the collapsed points.
CorrelationWeights correlation_weights(const RuntimeDataset& dataset);  // throws NotEnoughData

// Same computation over bare points; degenerate inputs yield all-zero weights
// instead of an error (used inside cross-validation folds).
CorrelationWeights correlation_weights_for(const std::vector<FeatureVector>& features,
                                           const std::vector<double>& runtimes);

// Greedy farthest-point sample of at most max_points collapsed points in
// min-max-normalized feature space: seeded at the medoid, then repeatedly the
// point farthest from the selection; all ties break toward the smaller
// ingestion index.
std::vector<CollapsedPoint> coverage_sample(const RuntimeDataset& dataset,
                                            std::size_t max_points);  // throws EmptyDataset

struct QueryFilter {
  std::optional<std::string> machine_type;
  std::optional<std::pair<int, int>> node_count_range;  // inclusive
};

std::vector<CollapsedPoint> query(const RuntimeDataset& dataset, const QueryFilter& filter = {});

}  // namespace c3o
