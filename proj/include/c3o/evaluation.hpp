#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c3o/configurator.hpp"
#include "c3o/selector.hpp"
#include "c3o/simulator.hpp"

namespace c3o {

struct EvalQuery {
  SampledConfig config;
  double truth_ms = 0.0;
};

// One benchmark scenario: a training dataset recipe, held-out queries with
// ground-truth runtimes, and a recommendation task scored against the
// ground-truth optimum.
struct EvalCase {
  std::string name;
  ScenarioSpec training;
  std::vector<EvalQuery> queries;
  JobInputs job_inputs;  // fixed inputs for the recommendation task
  CandidateGrid grid;
  double target_ms = 0.0;
  double safety_margin = 1.0;
};

struct EvalResult {
  std::string name;
  int n_points = 0;
  std::string chosen;
  double pessimistic_mrae = 0.0;
  double optimistic_mrae = 0.0;
  double regret = 0.0;
  ClusterConfig recommended_config;
  ClusterConfig oracle_config;
  bool matches_oracle = false;
};

// A context pinned to exactly one configuration (recurring job).
ContextSpec point_context(const std::string& id, const SampledConfig& config);

// A context spanning the spec's full data/parameter ranges at the given node
// counts.
ContextSpec region_context(const std::string& id, int count, const GroundTruthSpec& spec,
                           std::pair<int, int> nodes);

// Training covers the candidate grid and the queries (recurring executions);
// queries interpolate. With bottleneck_free the data ranges are clipped so no
// sampled or grid configuration triggers a memory bottleneck.
EvalCase make_dense_case(const std::string& job, std::uint64_t seed, double noise_cv,
                         bool bottleneck_free = false);

// Training is clipped to node counts <= 4; queries sit at node count 12.
EvalCase make_extrapolation_case(const std::string& job, std::uint64_t seed, double noise_cv);

EvalResult run_eval_case(const EvalCase& eval_case, const SelectorOptions& options = {});

// Brute force over the grid using ground-truth runtimes: cheapest feasible
// configuration, or the fastest one when nothing is feasible.
ClusterConfig oracle_recommendation(const GroundTruthSpec& spec, const CandidateGrid& grid,
                                    const JobInputs& inputs, double target_ms,
                                    double safety_margin);

// dense + extrapolation cases for every builtin job (or the given subset),
// sorted by case name.
std::vector<EvalResult> run_standard_evaluation(std::uint64_t seed, double noise_cv,
                                                const std::vector<std::string>& jobs = {},
                                                const SelectorOptions& options = {});

std::string evaluation_to_csv(const std::vector<EvalResult>& results);

}  // namespace c3o
