#include "c3o/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "c3o/nnls.hpp"

namespace c3o {

namespace {

constexpr double kExactMatchDistance = 1e-12;
constexpr int kMaxBackfitRounds = 10;
constexpr double kBackfitTolerance = 1e-6;

std::optional<std::size_t> find_feature(const std::vector<std::string>& names,
                                        const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

double geometric_mean(const std::vector<double>& values) {
  double log_sum = 0.0;
  for (double v : values) log_sum += std::log(v);
  return std::exp(log_sum / static_cast<double>(values.size()));
}

double median_of(std::vector<double> values) { return median_runtime(std::move(values)); }

}  // namespace

std::vector<TrainingPoint> training_points(const RuntimeDataset& dataset) {
  std::vector<TrainingPoint> points;
  points.reserve(dataset.collapsed().size());
  for (const auto& p : dataset.collapsed()) points.push_back({p.features, p.runtime_ms});
  return points;
}

std::vector<std::string> machine_names(const Catalog& catalog) {
  std::vector<std::string> names;
  names.reserve(catalog.size());
  for (const auto& m : catalog) names.push_back(m.name);
  return names;
}

double weighted_distance(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<double>& weights,
                         std::optional<std::size_t> categorical_feature) {
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double delta;
    if (categorical_feature.has_value() && j == *categorical_feature) {
      delta = (x[j] != y[j]) ? 1.0 : 0.0;
    } else {
      delta = std::abs(x[j] - y[j]);
    }
    sum += weights[j] * delta * delta;
  }
  return std::sqrt(sum);
}

PessimisticModel train_pessimistic(const std::vector<TrainingPoint>& points,
                                   CorrelationWeights weights, int k,
                                   std::vector<std::string> machines) {
  if (points.empty()) throw Error(ErrorKind::NotEnoughData, "no training points");

  PessimisticModel model;
  model.feature_names = points.front().features.names;
  if (weights.names != model.feature_names) {
    throw Error(ErrorKind::FeatureMismatch, "weights do not match the training features");
  }
  model.machines = std::move(machines);
  model.machine_feature = find_feature(model.feature_names, kMachineTypeFeature);
  model.weights = std::move(weights);
  model.k = std::clamp(k, 1, static_cast<int>(points.size()));

  std::vector<FeatureVector> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(p.features);
  auto [normalized, table] = normalize_features(raw);
  model.table = std::move(table);

  model.points.reserve(points.size());
  model.runtimes.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> coords = normalized[i].values;
    // The categorical coordinate stays raw so unseen indices never collide
    // with the 0.5 that constant features normalize to.
    if (model.machine_feature.has_value()) {
      coords[*model.machine_feature] = points[i].features.values[*model.machine_feature];
    }
    model.points.push_back(std::move(coords));
    model.runtimes.push_back(points[i].runtime_ms);
  }
  return model;
}

double predict_pessimistic(const PessimisticModel& model, const FeatureVector& query) {
  if (query.names != model.feature_names) {
    throw Error(ErrorKind::FeatureMismatch, "query features do not match the model");
  }
  std::vector<double> coords(query.values.size());
  for (std::size_t j = 0; j < query.values.size(); ++j) {
    coords[j] = model.table.normalize_value(j, query.values[j]);
  }
  if (model.machine_feature.has_value()) {
    coords[*model.machine_feature] = query.values[*model.machine_feature];
  }

  const std::size_t n = model.points.size();
  std::vector<double> distance(n);
  for (std::size_t i = 0; i < n; ++i) {
    distance[i] =
        weighted_distance(coords, model.points[i], model.weights.weights, model.machine_feature);
  }

  // Exact matches short-circuit the neighborhood.
  double exact_sum = 0.0;
  std::size_t exact_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance[i] < kExactMatchDistance) {
      exact_sum += model.runtimes[i];
      ++exact_count;
    }
  }
  if (exact_count > 0) return exact_sum / static_cast<double>(exact_count);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (distance[a] != distance[b]) return distance[a] < distance[b];
    return a < b;
  });
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(model.k), n);

  bool all_equal = true;
  for (std::size_t i = 1; i < k; ++i) {
    if (distance[order[i]] != distance[order[0]]) {
      all_equal = false;
      break;
    }
  }
  if (all_equal) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += model.runtimes[order[i]];
    return sum / static_cast<double>(k);
  }

  double weight_sum = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 1.0 / distance[order[i]];
    weight_sum += w;
    weighted += w * model.runtimes[order[i]];
  }
  return weighted / weight_sum;
}

double ScaleoutParams::eval(double node_count) const {
  return theta0 + theta1 / node_count + theta2 * std::log2(node_count) + theta3 * node_count;
}

ScaleoutParams fit_scaleout(const std::vector<std::pair<double, double>>& node_runtime) {
  std::set<double> distinct;
  for (const auto& [n, r] : node_runtime) distinct.insert(n);
  if (distinct.size() < 2) {
    throw Error(ErrorKind::NotEnoughData, "need >= 2 distinct node counts");
  }
  const std::size_t n_terms = std::min<std::size_t>(4, distinct.size());

  const std::size_t rows = node_runtime.size();
  std::vector<std::vector<double>> columns(n_terms, std::vector<double>(rows));
  std::vector<double> rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double n = node_runtime[r].first;
    rhs[r] = node_runtime[r].second;
    columns[0][r] = 1.0;
    columns[1][r] = 1.0 / n;
    if (n_terms > 2) columns[2][r] = std::log2(n);
    if (n_terms > 3) columns[3][r] = n;
  }

  std::vector<double> theta = nnls(columns, rhs);
  theta.resize(4, 0.0);
  ScaleoutParams params{theta[0], theta[1], theta[2], theta[3]};

  // s(n) must stay positive over the training range; refit on the stable
  // sub-basis if the log term drove it to zero at n=1.
  bool positive = true;
  for (double n : distinct) {
    if (params.eval(n) <= 0.0) {
      positive = false;
      break;
    }
  }
  if (!positive) {
    std::vector<std::vector<double>> reduced{columns[0], columns[1]};
    std::vector<double> fallback = nnls(reduced, rhs);
    params = ScaleoutParams{fallback[0], fallback[1], 0.0, 0.0};
  }
  return params;
}

double PiecewiseFactor::eval(double x) const {
  if (xs.empty()) return 1.0;
  if (x <= xs.front()) return factors.front();
  if (x >= xs.back()) return factors.back();
  auto upper = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(upper - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return factors[lo] + t * (factors[hi] - factors[lo]);
}

namespace {

struct OptimisticLayout {
  std::optional<std::size_t> machine_feature;
  std::optional<std::size_t> node_feature;
  std::vector<std::size_t> numeric_features;
};

OptimisticLayout classify_features(const std::vector<std::string>& names) {
  OptimisticLayout layout;
  layout.machine_feature = find_feature(names, kMachineTypeFeature);
  layout.node_feature = find_feature(names, kNodeCountFeature);
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (layout.machine_feature == j || layout.node_feature == j) continue;
    layout.numeric_features.push_back(j);
  }
  return layout;
}

FeatureVector default_reference(const std::vector<TrainingPoint>& points,
                                const OptimisticLayout& layout) {
  FeatureVector reference;
  reference.names = points.front().features.names;
  reference.values.resize(reference.names.size());
  for (std::size_t j = 0; j < reference.names.size(); ++j) {
    if (layout.machine_feature == j) {
      // Most frequent machine index, smallest on ties.
      std::map<double, std::size_t> counts;
      for (const auto& p : points) counts[p.features.values[j]]++;
      double best = points.front().features.values[j];
      std::size_t best_count = 0;
      for (const auto& [value, count] : counts) {
        if (count > best_count) {
          best = value;
          best_count = count;
        }
      }
      reference.values[j] = best;
    } else {
      std::vector<double> column;
      column.reserve(points.size());
      for (const auto& p : points) column.push_back(p.features.values[j]);
      reference.values[j] = median_of(std::move(column));
    }
  }
  return reference;
}

}  // namespace

OptimisticModel train_optimistic(const std::vector<TrainingPoint>& points,
                                 std::vector<std::string> machines,
                                 std::optional<FeatureVector> reference) {
  if (points.size() < 2) throw Error(ErrorKind::NotEnoughData, "need >= 2 training points");
  for (const auto& p : points) {
    if (!(p.runtime_ms > 0.0)) throw Error::invalid_field("runtime_ms", "must be > 0");
    if (p.features.names != points.front().features.names) {
      throw Error(ErrorKind::HeterogeneousFeatures, "feature name lists differ");
    }
  }

  OptimisticModel model;
  model.feature_names = points.front().features.names;
  model.machines = std::move(machines);
  const OptimisticLayout layout = classify_features(model.feature_names);
  model.machine_feature = layout.machine_feature;
  model.node_feature = layout.node_feature;
  model.reference_point =
      reference.has_value() ? *reference : default_reference(points, layout);
  if (model.reference_point.names != model.feature_names) {
    throw Error(ErrorKind::FeatureMismatch, "reference point does not match training features");
  }

  const std::size_t n = points.size();

  // Working state, machine factors keyed by raw index during fitting.
  std::map<double, double> machine_factor;
  if (layout.machine_feature.has_value()) {
    for (const auto& p : points) machine_factor[p.features.values[*layout.machine_feature]] = 1.0;
  }
  std::map<std::size_t, PiecewiseFactor> numeric_factor;
  for (std::size_t j : layout.numeric_features) {
    std::set<double> distinct;
    for (const auto& p : points) distinct.insert(p.features.values[j]);
    PiecewiseFactor factor;
    factor.xs.assign(distinct.begin(), distinct.end());
    factor.factors.assign(factor.xs.size(), 1.0);
    numeric_factor[j] = std::move(factor);
  }

  std::vector<double> node_counts(n, 1.0);
  std::set<double> distinct_nodes;
  if (layout.node_feature.has_value()) {
    for (std::size_t i = 0; i < n; ++i) {
      node_counts[i] = points[i].features.values[*layout.node_feature];
      distinct_nodes.insert(node_counts[i]);
    }
  }
  const bool fit_nodes = layout.node_feature.has_value() && distinct_nodes.size() >= 2;
  const double reference_nodes =
      layout.node_feature.has_value() ? model.reference_point.values[*layout.node_feature] : 1.0;

  ScaleoutParams scaleout{1.0, 0.0, 0.0, 0.0};
  double scaleout_ref = 1.0;

  auto machine_of = [&](std::size_t i) {
    return layout.machine_feature.has_value()
               ? machine_factor.at(points[i].features.values[*layout.machine_feature])
               : 1.0;
  };
  auto numeric_product = [&](std::size_t i, std::optional<std::size_t> skip) {
    double product = 1.0;
    for (const auto& [j, factor] : numeric_factor) {
      if (skip == j) continue;
      product *= factor.eval(points[i].features.values[j]);
    }
    return product;
  };
  auto scaleout_ratio = [&](std::size_t i) { return scaleout.eval(node_counts[i]) / scaleout_ref; };

  auto snapshot = [&]() {
    std::vector<double> state;
    for (const auto& [idx, f] : machine_factor) state.push_back(f);
    for (const auto& [j, factor] : numeric_factor) {
      state.insert(state.end(), factor.factors.begin(), factor.factors.end());
    }
    for (double nc : distinct_nodes) state.push_back(scaleout.eval(nc) / scaleout_ref);
    return state;
  };

  std::vector<double> previous = snapshot();
  for (int round = 0; round < kMaxBackfitRounds; ++round) {
    if (fit_nodes) {
      std::vector<std::pair<double, double>> adjusted;
      adjusted.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        adjusted.emplace_back(node_counts[i],
                              points[i].runtime_ms / (machine_of(i) * numeric_product(i, {})));
      }
      scaleout = fit_scaleout(adjusted);
      scaleout_ref = scaleout.eval(reference_nodes);
    }

    for (auto& [j, factor] : numeric_factor) {
      if (factor.xs.size() < 2) continue;  // single-valued feature keeps factor 1
      std::map<double, std::vector<double>> ratios;
      for (std::size_t i = 0; i < n; ++i) {
        const double without =
            machine_of(i) * scaleout_ratio(i) * numeric_product(i, j);
        ratios[points[i].features.values[j]].push_back(points[i].runtime_ms / without);
      }
      for (std::size_t knot = 0; knot < factor.xs.size(); ++knot) {
        factor.factors[knot] = geometric_mean(ratios.at(factor.xs[knot]));
      }
      const double at_reference = factor.eval(model.reference_point.values[j]);
      for (double& f : factor.factors) f /= at_reference;
    }

    if (layout.machine_feature.has_value() && machine_factor.size() > 1) {
      std::map<double, std::vector<double>> ratios;
      for (std::size_t i = 0; i < n; ++i) {
        const double without = scaleout_ratio(i) * numeric_product(i, {});
        ratios[points[i].features.values[*layout.machine_feature]].push_back(
            points[i].runtime_ms / without);
      }
      for (auto& [index, factor] : machine_factor) factor = geometric_mean(ratios.at(index));
      const double reference_factor =
          machine_factor.at(model.reference_point.values[*layout.machine_feature]);
      for (auto& [index, factor] : machine_factor) factor /= reference_factor;
    }

    std::vector<double> current = snapshot();
    double max_change = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      max_change = std::max(max_change, std::abs(current[i] - previous[i]) /
                                            std::max(std::abs(previous[i]), 1e-300));
    }
    previous = std::move(current);
    if (max_change < kBackfitTolerance) break;
  }

  std::vector<double> residuals;
  residuals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    residuals.push_back(points[i].runtime_ms /
                        (machine_of(i) * scaleout_ratio(i) * numeric_product(i, {})));
  }
  model.reference_runtime = geometric_mean(residuals);
  model.scaleout = scaleout;
  for (const auto& [j, factor] : numeric_factor) {
    model.feature_factors[model.feature_names[j]] = factor;
  }
  if (layout.machine_feature.has_value()) {
    for (const auto& [index, factor] : machine_factor) {
      const auto idx = static_cast<std::size_t>(index);
      const std::string name =
          idx < model.machines.size() ? model.machines[idx] : std::to_string(idx);
      model.machine_factors[name] = factor;
    }
  }
  return model;
}

double predict_optimistic(const OptimisticModel& model, const FeatureVector& query) {
  if (query.names != model.feature_names) {
    throw Error(ErrorKind::FeatureMismatch, "query features do not match the model");
  }

  double result = model.reference_runtime;

  if (model.machine_feature.has_value()) {
    const double raw = query.values[*model.machine_feature];
    const auto idx = static_cast<std::size_t>(raw);
    const std::string name =
        idx < model.machines.size() ? model.machines[idx] : std::to_string(idx);
    auto it = model.machine_factors.find(name);
    if (it == model.machine_factors.end()) throw Error::unknown_machine_type(name);
    result *= it->second;
  }

  if (model.node_feature.has_value()) {
    const double reference_nodes = model.reference_point.values[*model.node_feature];
    const double s_ref = model.scaleout.eval(reference_nodes);
    result *= model.scaleout.eval(query.values[*model.node_feature]) / s_ref;
  }

  for (const auto& [name, factor] : model.feature_factors) {
    const auto j = find_feature(model.feature_names, name);
    result *= factor.eval(query.values[*j]);
  }
  return result;
}

double TrainedModel::predict(const FeatureVector& query) const {
  if (const auto* p = pessimistic()) return predict_pessimistic(*p, query);
  return predict_optimistic(*optimistic(), query);
}

const std::vector<std::string>& TrainedModel::feature_names() const {
  if (const auto* p = pessimistic()) return p->feature_names;
  return optimistic()->feature_names;
}

const std::vector<std::string>& TrainedModel::machines() const {
  if (const auto* p = pessimistic()) return p->machines;
  return optimistic()->machines;
}

}  // namespace c3o
