#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "c3o/predictors.hpp"
#include "c3o/types.hpp"

namespace c3o {

// Monotone power-law response (value / reference)^alpha, positive everywhere.
struct ParamCurve {
  double reference = 1.0;
  double alpha = 1.0;

  double eval(double value) const;
};

struct ParamSpec {
  double lo = 0.0;
  double hi = 0.0;
  bool integral = false;
  ParamCurve curve;
  double step = 0.0;  // 0: continuous; otherwise values are lo + k*step
};

// Jobs are executed on datasets that come in discrete sizes; a non-zero step
// samples from that grid instead of the continuum.
struct DataRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

// A job bottlenecks on a node when the per-node share of the dataset exceeds
// both the node's memory and this per-node threshold; the whole run is then
// slowed by the penalty factor.
struct BottleneckSpec {
  double memory_gb_per_node = 0.0;
  double penalty = 1.0;
};

// Blends the scale-out curve with an alternative one, weighted by a data
// characteristic in [0,1] (grep: keyword_ratio pulls toward the
// sequential-write-dominated curve).
struct InteractionSpec {
  std::string feature;
  ScaleoutParams alternative;
};

// Closed-form ground truth for one benchmark job. All coefficients are fixed
// constants of the artifact, chosen so the qualitative behavior (linear data
// size effect, non-linear parameters, memory cliffs, stable machine ranking,
// flat pagerank scaling) holds.
struct GroundTruthSpec {
  std::string job;
  JobSignature signature;
  Catalog catalog;  // machine types with prices
  std::map<std::string, double> machine_factors;
  double base_rate_ms_per_gb = 0.0;
  ScaleoutParams scaleout;
  std::map<std::string, DataRange> data_ranges;  // includes size_mb
  std::map<std::string, ParamSpec> params;
  std::optional<BottleneckSpec> bottleneck;
  std::optional<InteractionSpec> interaction;
};

// Noise-free runtime for one configuration. Throws UnknownMachineType.
double ground_truth_runtime(const GroundTruthSpec& spec, const ClusterConfig& config,
                            const std::map<std::string, double>& data_characteristics,
                            const std::map<std::string, double>& parameters);

bool bottleneck_active(const GroundTruthSpec& spec, const MachineType& machine, double size_gb,
                       int node_count);

// One contributing organization: a sub-region of the feature space and the
// number of distinct configurations it executed.
struct ContextSpec {
  std::string context_id;
  int count = 1;
  std::vector<std::string> machine_types;  // empty: all catalog machines
  std::pair<int, int> node_counts{2, 16};
  std::map<std::string, std::pair<double, double>> data_ranges;   // defaults: spec ranges
  std::map<std::string, std::pair<double, double>> param_ranges;  // defaults: spec ranges
};

struct ScenarioSpec {
  GroundTruthSpec spec;
  std::vector<ContextSpec> contexts;
  double noise_cv = 0.0;  // coefficient of variation of the log-normal noise
  std::uint64_t seed = 0;
  int replicates = 5;
};

struct SampledConfig {
  ClusterConfig config;
  std::map<std::string, double> data_characteristics;
  std::map<std::string, double> parameters;
};

// Uniform draw of one configuration from a context's region.
SampledConfig sample_config(const GroundTruthSpec& spec, const ContextSpec& context,
                            std::mt19937_64& rng);

// Emits `replicates` records per sampled configuration, runtimes multiplied
// by median-unbiased log-normal noise. Deterministic for a given seed.
std::vector<RuntimeRecord> generate_dataset(const ScenarioSpec& scenario);  // throws InvalidScenario

void validate_scenario(const ScenarioSpec& scenario);  // throws InvalidScenario

// The five benchmark jobs: sort, grep, sgd, kmeans, pagerank.
const std::map<std::string, GroundTruthSpec>& builtin_specs();

// Scenario file schema: {"job": ..., "seed": ..., "noise_cv": ...,
// "contexts": [{"context_id", "count", "machine_types"?, "node_counts"?,
// "data_characteristics"?, "parameters"?}]}.
ScenarioSpec scenario_from_json(const nlohmann::json& j);  // throws ParseError/InvalidScenario

// Deterministic uniform/normal draws (stable across standard libraries).
double uniform_real(std::mt19937_64& rng, double lo, double hi);
int uniform_int(std::mt19937_64& rng, int lo, int hi);
double standard_normal(std::mt19937_64& rng);

}  // namespace c3o
