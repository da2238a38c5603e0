#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "c3o/dataset.hpp"
#include "c3o/predictors.hpp"

namespace c3o {

struct SelectorOptions {
  int knn_k = 3;             // neighbor count for the pessimistic family
  int folds = 5;             // requested cross-validation folds
  int min_points_for_cv = 5; // below this: optimistic without cross-validation
};

// MRAE of unavailable cross-validation runs is reported as -1.
inline constexpr double kMraeUnavailable = -1.0;

// Trains one family on the given points; the pessimistic family derives its
// correlation weights from the same points.
TrainedModel train_family(const std::vector<TrainingPoint>& points, TrainedModel::Family family,
                          const std::vector<std::string>& machines, int knn_k);

struct SelectionReport {
  double pessimistic_mrae = kMraeUnavailable;
  double optimistic_mrae = kMraeUnavailable;
  int folds = 0;
  std::string chosen;
  int n_points = 0;

  bool operator==(const SelectionReport&) const = default;

  nlohmann::json to_json() const;
};

// Deterministic k-fold cross-validation: points are sorted by (feature
// vector, runtime) and dealt round-robin into min(folds, n) folds. MRAE is
// the mean of |predicted - actual| / actual over all held-out points; a
// held-out point the fold model cannot predict contributes an error of 1.
double cross_validate(const std::vector<TrainingPoint>& points, TrainedModel::Family family,
                      const std::vector<std::string>& machines, int folds,
                      int knn_k = 3);  // throws NotEnoughData

// Runs cross-validation for both families (when enough points are available),
// picks the lower MRAE with ties going to the pessimistic family, and
// retrains the winner on all points. Below min_points_for_cv the optimistic
// family is chosen outright.
std::pair<TrainedModel, SelectionReport> select_and_train(
    const std::vector<TrainingPoint>& points, const std::vector<std::string>& machines,
    const SelectorOptions& options = {});  // throws NotEnoughData

// Full retrain on the dataset's current collapsed view; the previous model is
// discarded.
std::pair<TrainedModel, SelectionReport> retrain_on_arrival(
    const std::pair<TrainedModel, SelectionReport>& current, const RuntimeDataset& dataset,
    const SelectorOptions& options = {});

}  // namespace c3o
