#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "c3o/predictors.hpp"
#include "c3o/types.hpp"

namespace c3o {

struct CandidateGrid {
  std::vector<MachineType> machine_types;
  std::vector<int> node_counts;  // strictly increasing

  static std::vector<int> default_node_counts();  // {2..16}
};

struct JobInputs {
  std::map<std::string, double> data_characteristics;
  std::map<std::string, double> parameters;
};

struct CandidateOutcome {
  ClusterConfig config;
  bool predictable = false;
  double predicted_runtime_ms = 0.0;
  double predicted_cost_usd = 0.0;
  bool feasible = false;
};

struct GridEvaluation {
  std::vector<CandidateOutcome> candidates;
  std::string model_family;
};

// Predicts every (machine type, node count) pair of the grid. Candidates the
// model cannot predict (machine type unknown to it) are kept with the
// predictable flag cleared rather than dropped.
GridEvaluation evaluate_grid(const TrainedModel& model, const CandidateGrid& grid,
                             const JobInputs& inputs);  // throws FeatureMismatch

struct Recommendation {
  ClusterConfig config;
  double predicted_runtime_ms = 0.0;
  double predicted_cost_usd = 0.0;
  bool feasible = false;
  std::string model_used;
  std::string infeasibility_reason;  // "", "runtime" or "budget"
  std::vector<CandidateOutcome> alternatives;

  nlohmann::json to_json() const;
};

// Cheapest predictable candidate whose padded runtime fits the target (and
// the optional budget). With no feasible candidate the fastest predictable
// one is returned flagged infeasible.
Recommendation recommend(const GridEvaluation& evaluation, const RuntimeTarget& target,
                         std::optional<double> budget_usd =
                             std::nullopt);  // throws NoPredictableCandidate

struct MachineRanking {
  std::vector<int> node_counts;
  std::vector<std::vector<std::string>> ranking_per_node;  // cost-ascending machine names
  bool stable = false;  // identical ranking at every node count
};

MachineRanking rank_machine_types(const GridEvaluation& evaluation);  // throws NotEnoughData

std::string alternatives_to_csv(const std::vector<CandidateOutcome>& alternatives);

}  // namespace c3o
