#include "c3o/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace c3o {

namespace {

std::vector<std::string> map_keys(const std::map<std::string, double>& m) {
  std::vector<std::string> keys;
  keys.reserve(m.size());
  for (const auto& [key, value] : m) keys.push_back(key);
  return keys;
}

}  // namespace

IngestReport RuntimeDataset::ingest(const std::vector<RuntimeRecord>& batch) {
  IngestReport report;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const RuntimeRecord& record = batch[i];
    try {
      validate_record(record);
      if (!(record.signature == signature_)) {
        throw Error(ErrorKind::SignatureMismatch,
                    record.signature.algorithm_name + "/" + record.signature.implementation_id);
      }
      const auto data_keys = map_keys(record.data_characteristics);
      const auto param_keys = map_keys(record.parameters);
      if (data_keys_.has_value()) {
        if (data_keys != *data_keys_ || param_keys != *param_keys_) {
          throw Error(ErrorKind::FeatureKeyMismatch,
                      "record feature keys differ from the dataset's");
        }
      }
      if (catalog_index(catalog_, record.config.machine_type) < 0) {
        throw Error::invalid_field("config.machine_type",
                                   "not in catalog: " + record.config.machine_type);
      }

      if (std::find(records_.begin(), records_.end(), record) != records_.end()) {
        ++report.duplicates;
        continue;
      }

      const FeatureVector features = encode_features(record, catalog_);
      if (!data_keys_.has_value()) {
        data_keys_ = data_keys;
        param_keys_ = param_keys;
      }

      const std::size_t record_index = records_.size();
      records_.push_back(record);
      ++report.accepted;

      auto group_it = std::find_if(collapsed_.begin(), collapsed_.end(),
                                   [&](const CollapsedPoint& p) { return p.features == features; });
      if (group_it == collapsed_.end()) {
        collapsed_.push_back({features, record.runtime_ms, record_index});
        groups_.push_back({record_index});
      } else {
        const std::size_t g = static_cast<std::size_t>(group_it - collapsed_.begin());
        groups_[g].push_back(record_index);
        std::vector<double> runtimes;
        runtimes.reserve(groups_[g].size());
        for (std::size_t r : groups_[g]) runtimes.push_back(records_[r].runtime_ms);
        group_it->runtime_ms = median_runtime(std::move(runtimes));
        ++report.replicates_merged;
      }
    } catch (const Error& e) {
      ++report.rejected;
      report.rejections.push_back({i, e.kind(), e.what()});
    }
  }
  return report;
}

std::vector<const RuntimeRecord*> RuntimeDataset::replicates_of(std::size_t collapsed_index) const {
  std::vector<const RuntimeRecord*> out;
  for (std::size_t r : groups_.at(collapsed_index)) out.push_back(&records_[r]);
  return out;
}

RuntimeDataset dataset_from_records(const JobSignature& signature, const Catalog& catalog,
                                    const std::vector<RuntimeRecord>& records,
                                    IngestReport* report) {
  RuntimeDataset dataset(signature, catalog);
  IngestReport r = dataset.ingest(records);
  if (report != nullptr) *report = r;
  return dataset;
}

CorrelationWeights correlation_weights_for(const std::vector<FeatureVector>& features,
                                           const std::vector<double>& runtimes) {
  CorrelationWeights out;
  if (features.empty()) return out;
  out.names = features.front().names;
  const std::size_t dim = out.names.size();
  const std::size_t n = features.size();
  out.weights.assign(dim, 0.0);
  if (n < 2) return out;

  double runtime_mean = 0.0;
  for (double r : runtimes) runtime_mean += r;
  runtime_mean /= static_cast<double>(n);
  double runtime_var = 0.0;
  for (double r : runtimes) runtime_var += (r - runtime_mean) * (r - runtime_mean);
  if (runtime_var <= 0.0) return out;  // constant runtime: correlation undefined

  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto& f : features) mean += f.values[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = features[i].values[j] - mean;
      var += dx * dx;
      cov += dx * (runtimes[i] - runtime_mean);
    }
    if (var <= 0.0) continue;  // constant feature
    out.weights[j] = std::abs(cov / std::sqrt(var * runtime_var));
  }
  return out;
}

CorrelationWeights correlation_weights(const RuntimeDataset& dataset) {
  const auto& points = dataset.collapsed();
  if (points.size() < 2) {
    throw Error(ErrorKind::NotEnoughData, "need >= 2 collapsed points for correlations");
  }
  std::vector<FeatureVector> features;
  std::vector<double> runtimes;
  features.reserve(points.size());
  runtimes.reserve(points.size());
  for (const auto& p : points) {
    features.push_back(p.features);
    runtimes.push_back(p.runtime_ms);
  }
  return correlation_weights_for(features, runtimes);
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

std::vector<CollapsedPoint> coverage_sample(const RuntimeDataset& dataset, std::size_t max_points) {
  const auto& points = dataset.collapsed();
  if (points.empty()) throw Error(ErrorKind::EmptyDataset, "nothing to sample");
  if (max_points >= points.size()) return points;

  std::vector<FeatureVector> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(p.features);
  auto [normalized, table] = normalize_features(raw);

  const std::size_t n = points.size();
  // Seed: the medoid, smallest index on ties.
  std::size_t seed = 0;
  double best_total = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      total += euclidean(normalized[i].values, normalized[j].values);
    }
    if (total < best_total) {
      best_total = total;
      seed = i;
    }
  }

  std::vector<bool> selected(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> order{seed};
  selected[seed] = true;
  for (std::size_t i = 0; i < n; ++i) {
    nearest[i] = euclidean(normalized[i].values, normalized[seed].values);
  }

  while (order.size() < max_points) {
    std::size_t farthest = n;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (selected[i]) continue;
      if (nearest[i] > best) {
        best = nearest[i];
        farthest = i;
      }
    }
    selected[farthest] = true;
    order.push_back(farthest);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], euclidean(normalized[i].values, normalized[farthest].values));
    }
  }

  std::vector<CollapsedPoint> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(points[i]);
  return out;
}

std::vector<CollapsedPoint> query(const RuntimeDataset& dataset, const QueryFilter& filter) {
  std::optional<double> machine_index;
  if (filter.machine_type.has_value()) {
    const int idx = catalog_index(dataset.catalog(), *filter.machine_type);
    if (idx < 0) return {};
    machine_index = static_cast<double>(idx);
  }

  std::vector<CollapsedPoint> out;
  for (const auto& point : dataset.collapsed()) {
    if (machine_index.has_value() && point.features.values[0] != *machine_index) continue;
    if (filter.node_count_range.has_value()) {
      const double n = point.features.values[1];
      if (n < filter.node_count_range->first || n > filter.node_count_range->second) continue;
    }
    out.push_back(point);
  }
  return out;
}

}  // namespace c3o
