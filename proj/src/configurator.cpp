#include "c3o/configurator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "c3o/features.hpp"

namespace c3o {

std::vector<int> CandidateGrid::default_node_counts() {
  std::vector<int> nodes;
  for (int n = 2; n <= 16; ++n) nodes.push_back(n);
  return nodes;
}

namespace {

double cost_usd(double price_per_hour, int node_count, double runtime_ms) {
  return price_per_hour * node_count * runtime_ms / 3'600'000.0;
}

// Cheapest first; runtime, node count and machine name break ties.
bool cheaper(const CandidateOutcome& a, const CandidateOutcome& b) {
  if (a.predicted_cost_usd != b.predicted_cost_usd) {
    return a.predicted_cost_usd < b.predicted_cost_usd;
  }
  if (a.predicted_runtime_ms != b.predicted_runtime_ms) {
    return a.predicted_runtime_ms < b.predicted_runtime_ms;
  }
  if (a.config.node_count != b.config.node_count) {
    return a.config.node_count < b.config.node_count;
  }
  return a.config.machine_type < b.config.machine_type;
}

bool faster(const CandidateOutcome& a, const CandidateOutcome& b) {
  if (a.predicted_runtime_ms != b.predicted_runtime_ms) {
    return a.predicted_runtime_ms < b.predicted_runtime_ms;
  }
  if (a.config.node_count != b.config.node_count) {
    return a.config.node_count < b.config.node_count;
  }
  return a.config.machine_type < b.config.machine_type;
}

}  // namespace

GridEvaluation evaluate_grid(const TrainedModel& model, const CandidateGrid& grid,
                             const JobInputs& inputs) {
  const std::vector<std::string>& names = model.feature_names();

  // Template query with the job inputs filled in; machine/node slots vary.
  FeatureVector query;
  query.names = names;
  query.values.assign(names.size(), 0.0);
  std::size_t machine_slot = names.size();
  std::size_t node_slot = names.size();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == kMachineTypeFeature) {
      machine_slot = j;
    } else if (names[j] == kNodeCountFeature) {
      node_slot = j;
    } else if (auto it = inputs.data_characteristics.find(names[j]);
               it != inputs.data_characteristics.end()) {
      query.values[j] = it->second;
    } else if (auto pit = inputs.parameters.find(names[j]); pit != inputs.parameters.end()) {
      query.values[j] = pit->second;
    } else {
      throw Error(ErrorKind::FeatureMismatch, "job inputs lack feature: " + names[j]);
    }
  }
  const std::size_t expected =
      inputs.data_characteristics.size() + inputs.parameters.size() +
      (machine_slot < names.size() ? 1 : 0) + (node_slot < names.size() ? 1 : 0);
  if (expected != names.size()) {
    throw Error(ErrorKind::FeatureMismatch, "job inputs carry keys the model was not trained on");
  }

  GridEvaluation evaluation;
  evaluation.model_family = model.family_name();
  for (const MachineType& machine : grid.machine_types) {
    const int index = [&] {
      const auto& known = model.machines();
      auto it = std::find(known.begin(), known.end(), machine.name);
      return it == known.end() ? -1 : static_cast<int>(it - known.begin());
    }();
    for (int nodes : grid.node_counts) {
      CandidateOutcome outcome;
      outcome.config = {machine.name, nodes};
      if (index >= 0) {
        if (machine_slot < names.size()) query.values[machine_slot] = index;
        if (node_slot < names.size()) query.values[node_slot] = nodes;
        try {
          outcome.predicted_runtime_ms = model.predict(query);
          outcome.predicted_cost_usd =
              cost_usd(machine.price_per_hour, nodes, outcome.predicted_runtime_ms);
          outcome.predictable = true;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::UnknownMachineType) throw;
        }
      }
      evaluation.candidates.push_back(outcome);
    }
  }
  return evaluation;
}

Recommendation recommend(const GridEvaluation& evaluation, const RuntimeTarget& target,
                         std::optional<double> budget_usd) {
  std::vector<CandidateOutcome> candidates = evaluation.candidates;
  bool any_predictable = false;
  for (auto& candidate : candidates) {
    if (!candidate.predictable) continue;
    any_predictable = true;
    candidate.feasible =
        candidate.predicted_runtime_ms * target.safety_margin <= target.max_runtime_ms;
  }
  if (!any_predictable) {
    throw Error(ErrorKind::NoPredictableCandidate, "no candidate has a predictable machine type");
  }

  const CandidateOutcome* best = nullptr;
  std::string reason;
  for (const auto& candidate : candidates) {
    if (!candidate.feasible) continue;
    if (budget_usd.has_value() && candidate.predicted_cost_usd > *budget_usd) continue;
    if (best == nullptr || cheaper(candidate, *best)) best = &candidate;
  }
  if (best == nullptr) {
    // Nothing satisfies both constraints. Surface the best attainable option:
    // the cheapest runtime-feasible candidate if only the budget failed,
    // otherwise the fastest predictable one.
    const CandidateOutcome* runtime_feasible = nullptr;
    for (const auto& candidate : candidates) {
      if (!candidate.feasible) continue;
      if (runtime_feasible == nullptr || cheaper(candidate, *runtime_feasible)) {
        runtime_feasible = &candidate;
      }
    }
    if (runtime_feasible != nullptr) {
      best = runtime_feasible;
      reason = "budget";
    } else {
      for (const auto& candidate : candidates) {
        if (!candidate.predictable) continue;
        if (best == nullptr || faster(candidate, *best)) best = &candidate;
      }
      reason = "runtime";
    }
  }

  Recommendation recommendation;
  recommendation.config = best->config;
  recommendation.predicted_runtime_ms = best->predicted_runtime_ms;
  recommendation.predicted_cost_usd = best->predicted_cost_usd;
  recommendation.feasible = reason.empty();
  recommendation.model_used = evaluation.model_family;
  recommendation.infeasibility_reason = reason;

  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateOutcome& a, const CandidateOutcome& b) {
              if (a.predictable != b.predictable) return a.predictable;
              if (a.feasible != b.feasible) return a.feasible;
              if (!a.predictable) {
                if (a.config.machine_type != b.config.machine_type) {
                  return a.config.machine_type < b.config.machine_type;
                }
                return a.config.node_count < b.config.node_count;
              }
              return cheaper(a, b);
            });
  recommendation.alternatives = std::move(candidates);
  return recommendation;
}

MachineRanking rank_machine_types(const GridEvaluation& evaluation) {
  std::map<int, std::vector<const CandidateOutcome*>> by_node;
  std::set<std::string> machines;
  for (const auto& candidate : evaluation.candidates) {
    if (!candidate.predictable) continue;
    by_node[candidate.config.node_count].push_back(&candidate);
    machines.insert(candidate.config.machine_type);
  }
  if (machines.size() < 2) {
    throw Error(ErrorKind::NotEnoughData, "need >= 2 predictable machine types to rank");
  }

  MachineRanking ranking;
  for (auto& [nodes, candidates] : by_node) {
    std::sort(candidates.begin(), candidates.end(),
              [](const CandidateOutcome* a, const CandidateOutcome* b) {
                if (a->predicted_cost_usd != b->predicted_cost_usd) {
                  return a->predicted_cost_usd < b->predicted_cost_usd;
                }
                return a->config.machine_type < b->config.machine_type;
              });
    std::vector<std::string> names;
    names.reserve(candidates.size());
    for (const auto* c : candidates) names.push_back(c->config.machine_type);
    ranking.node_counts.push_back(nodes);
    ranking.ranking_per_node.push_back(std::move(names));
  }
  ranking.stable = true;
  for (const auto& names : ranking.ranking_per_node) {
    if (names != ranking.ranking_per_node.front()) {
      ranking.stable = false;
      break;
    }
  }
  return ranking;
}

nlohmann::json Recommendation::to_json() const {
  nlohmann::json alternatives_json = nlohmann::json::array();
  for (const auto& alt : alternatives) {
    nlohmann::json entry{{"machine_type", alt.config.machine_type},
                         {"node_count", alt.config.node_count},
                         {"predictable", alt.predictable},
                         {"feasible", alt.feasible}};
    if (alt.predictable) {
      entry["predicted_runtime_ms"] = alt.predicted_runtime_ms;
      entry["predicted_cost_usd"] = alt.predicted_cost_usd;
    }
    alternatives_json.push_back(std::move(entry));
  }
  nlohmann::json out{
      {"config",
       {{"machine_type", config.machine_type}, {"node_count", config.node_count}}},
      {"predicted_runtime_ms", predicted_runtime_ms},
      {"predicted_cost_usd", predicted_cost_usd},
      {"feasible", feasible},
      {"model_used", model_used},
      {"alternatives", alternatives_json},
  };
  if (!infeasibility_reason.empty()) out["infeasibility_reason"] = infeasibility_reason;
  return out;
}

std::string alternatives_to_csv(const std::vector<CandidateOutcome>& alternatives) {
  std::ostringstream out;
  out << "machine_type,node_count,predicted_runtime_ms,predicted_cost_usd,feasible\n";
  for (const auto& alt : alternatives) {
    out << alt.config.machine_type << ',' << alt.config.node_count << ',';
    if (alt.predictable) {
      out << alt.predicted_runtime_ms << ',' << alt.predicted_cost_usd;
    } else {
      out << ',';
    }
    out << ',' << (alt.feasible ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace c3o
