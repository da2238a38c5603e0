#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "c3o/dataset.hpp"
#include "c3o/features.hpp"
#include "c3o/types.hpp"

namespace c3o {

struct TrainingPoint {
  FeatureVector features;
  double runtime_ms = 0.0;
};

std::vector<TrainingPoint> training_points(const RuntimeDataset& dataset);
std::vector<std::string> machine_names(const Catalog& catalog);

// Correlation-weighted distance sqrt(sum_j w_j * delta_j^2), where delta_j is
// |x_j - y_j| for numeric features and the inequality indicator for the
// categorical feature (if any).
double weighted_distance(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<double>& weights,
                         std::optional<std::size_t> categorical_feature);

// Similarity model: k-nearest-neighbor regression over historical executions
// with correlation-weighted distances. Numeric coordinates are compared after
// min-max normalization; the machine-type index is categorical.
struct PessimisticModel {
  std::vector<std::string> feature_names;
  std::vector<std::string> machines;            // catalog names, index order
  std::optional<std::size_t> machine_feature;   // position of the categorical coordinate
  NormalizationTable table;
  std::vector<std::vector<double>> points;      // distance coordinates per training point
  std::vector<double> runtimes;
  CorrelationWeights weights;
  int k = 1;
};

PessimisticModel train_pessimistic(const std::vector<TrainingPoint>& points,
                                   CorrelationWeights weights, int k,
                                   std::vector<std::string> machines);  // throws NotEnoughData
double predict_pessimistic(const PessimisticModel& model,
                           const FeatureVector& query);  // throws FeatureMismatch

// Parametric scale-out curve s(n) = theta0 + theta1/n + theta2*log2(n) + theta3*n.
struct ScaleoutParams {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  double eval(double node_count) const;
  bool operator==(const ScaleoutParams&) const = default;
};

// Non-negative least squares over the scale-out basis. With fewer than four
// distinct node counts the rightmost basis terms are dropped (theta3 first,
// then theta2) until the fit is determined.
ScaleoutParams fit_scaleout(
    const std::vector<std::pair<double, double>>& node_runtime);  // throws NotEnoughData

// Positive piecewise-linear factor with knots at training values; linear
// interpolation between knots, clamped to the nearest knot outside.
struct PiecewiseFactor {
  std::vector<double> xs;
  std::vector<double> factors;

  double eval(double x) const;
  bool operator==(const PiecewiseFactor&) const = default;
};

// Independent-factor model: runtime is decomposed multiplicatively into a
// reference runtime, a machine-type factor, a parametric scale-out ratio, and
// one piecewise-linear factor per remaining numeric feature. Every factor is
// 1 at the reference point.
struct OptimisticModel {
  std::vector<std::string> feature_names;
  std::vector<std::string> machines;
  std::optional<std::size_t> machine_feature;
  std::optional<std::size_t> node_feature;
  double reference_runtime = 0.0;
  ScaleoutParams scaleout;
  FeatureVector reference_point;
  std::map<std::string, PiecewiseFactor> feature_factors;
  std::map<std::string, double> machine_factors;  // keyed by machine-type name
};

OptimisticModel train_optimistic(const std::vector<TrainingPoint>& points,
                                 std::vector<std::string> machines,
                                 std::optional<FeatureVector> reference =
                                     std::nullopt);  // throws NotEnoughData
double predict_optimistic(const OptimisticModel& model,
                          const FeatureVector& query);  // throws UnknownMachineType, FeatureMismatch

class TrainedModel {
 public:
  enum class Family { pessimistic, optimistic };

  explicit TrainedModel(PessimisticModel model) : impl_(std::move(model)) {}
  explicit TrainedModel(OptimisticModel model) : impl_(std::move(model)) {}

  Family family() const {
    return std::holds_alternative<PessimisticModel>(impl_) ? Family::pessimistic
                                                           : Family::optimistic;
  }
  const char* family_name() const {
    return family() == Family::pessimistic ? "pessimistic" : "optimistic";
  }

  double predict(const FeatureVector& query) const;

  const std::vector<std::string>& feature_names() const;
  const std::vector<std::string>& machines() const;

  const PessimisticModel* pessimistic() const { return std::get_if<PessimisticModel>(&impl_); }
  const OptimisticModel* optimistic() const { return std::get_if<OptimisticModel>(&impl_); }

 private:
  std::variant<PessimisticModel, OptimisticModel> impl_;
};

}  // namespace c3o
