#include "c3o/selector.hpp"

#include <algorithm>
#include <cmath>

namespace c3o {

nlohmann::json SelectionReport::to_json() const {
  return nlohmann::json{{"pessimistic_mrae", pessimistic_mrae},
                        {"optimistic_mrae", optimistic_mrae},
                        {"folds", folds},
                        {"chosen", chosen},
                        {"n_points", n_points}};
}

TrainedModel train_family(const std::vector<TrainingPoint>& points, TrainedModel::Family family,
                          const std::vector<std::string>& machines, int knn_k) {
  if (family == TrainedModel::Family::pessimistic) {
    std::vector<FeatureVector> features;
    std::vector<double> runtimes;
    features.reserve(points.size());
    for (const auto& p : points) {
      features.push_back(p.features);
      runtimes.push_back(p.runtime_ms);
    }
    CorrelationWeights weights = correlation_weights_for(features, runtimes);
    return TrainedModel(train_pessimistic(points, std::move(weights), knn_k, machines));
  }
  return TrainedModel(train_optimistic(points, machines));
}

namespace {

std::vector<TrainingPoint> sorted_points(std::vector<TrainingPoint> points) {
  std::sort(points.begin(), points.end(), [](const TrainingPoint& a, const TrainingPoint& b) {
    if (a.features.values != b.features.values) return lex_less(a.features, b.features);
    return a.runtime_ms < b.runtime_ms;
  });
  return points;
}

}  // namespace

double cross_validate(const std::vector<TrainingPoint>& points, TrainedModel::Family family,
                      const std::vector<std::string>& machines, int folds, int knn_k) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(ErrorKind::NotEnoughData, "need >= 2 points for cross-validation");
  const std::size_t k = std::min<std::size_t>(std::max(folds, 1), n);

  const std::vector<TrainingPoint> ordered = sorted_points(points);

  double error_sum = 0.0;
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<TrainingPoint> train;
    std::vector<const TrainingPoint*> held_out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % k == fold) {
        held_out.push_back(&ordered[i]);
      } else {
        train.push_back(ordered[i]);
      }
    }

    bool trained = false;
    TrainedModel model{PessimisticModel{}};
    try {
      model = train_family(train, family, machines, knn_k);
      trained = true;
    } catch (const Error&) {
      trained = false;
    }

    for (const TrainingPoint* point : held_out) {
      double error = 1.0;  // penalty for points the fold model cannot predict
      if (trained) {
        try {
          const double predicted = model.predict(point->features);
          error = std::abs(predicted - point->runtime_ms) / point->runtime_ms;
        } catch (const Error&) {
          error = 1.0;
        }
      }
      error_sum += error;
    }
  }
  return error_sum / static_cast<double>(n);
}

std::pair<TrainedModel, SelectionReport> select_and_train(const std::vector<TrainingPoint>& points,
                                                          const std::vector<std::string>& machines,
                                                          const SelectorOptions& options) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(ErrorKind::NotEnoughData, "need >= 2 points to train");

  SelectionReport report;
  report.n_points = static_cast<int>(n);

  if (n < static_cast<std::size_t>(options.min_points_for_cv)) {
    report.chosen = "optimistic";
    report.folds = 0;
    TrainedModel model = train_family(points, TrainedModel::Family::optimistic, machines, options.knn_k);
    return {std::move(model), report};
  }

  report.folds = static_cast<int>(std::min<std::size_t>(std::max(options.folds, 1), n));
  report.pessimistic_mrae =
      cross_validate(points, TrainedModel::Family::pessimistic, machines, options.folds, options.knn_k);
  report.optimistic_mrae =
      cross_validate(points, TrainedModel::Family::optimistic, machines, options.folds, options.knn_k);

  const TrainedModel::Family winner = report.pessimistic_mrae <= report.optimistic_mrae
                                          ? TrainedModel::Family::pessimistic
                                          : TrainedModel::Family::optimistic;
  report.chosen = winner == TrainedModel::Family::pessimistic ? "pessimistic" : "optimistic";
  TrainedModel model = train_family(points, winner, machines, options.knn_k);
  return {std::move(model), report};
}

std::pair<TrainedModel, SelectionReport> retrain_on_arrival(
    const std::pair<TrainedModel, SelectionReport>& current, const RuntimeDataset& dataset,
    const SelectorOptions& options) {
  (void)current;  // the previous model is discarded on retrain
  if (dataset.empty()) throw Error(ErrorKind::NotEnoughData, "dataset is empty");
  return select_and_train(training_points(dataset), machine_names(dataset.catalog()), options);
}

}  // namespace c3o
