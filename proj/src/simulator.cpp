#include "c3o/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace c3o {

double ParamCurve::eval(double value) const { return std::pow(value / reference, alpha); }

double ground_truth_runtime(const GroundTruthSpec& spec, const ClusterConfig& config,
                            const std::map<std::string, double>& data_characteristics,
                            const std::map<std::string, double>& parameters) {
  const int machine_index = catalog_index(spec.catalog, config.machine_type);
  if (machine_index < 0) throw Error::unknown_machine_type(config.machine_type);
  const MachineType& machine = spec.catalog[machine_index];

  auto data_it = data_characteristics.find("size_mb");
  if (data_it == data_characteristics.end()) {
    throw Error::invalid_field("data_characteristics.size_mb", "missing");
  }
  const double size_gb = data_it->second / 1024.0;
  const double n = static_cast<double>(config.node_count);

  double runtime = spec.base_rate_ms_per_gb * size_gb;
  runtime *= spec.machine_factors.at(config.machine_type);

  if (spec.interaction.has_value()) {
    auto blend_it = data_characteristics.find(spec.interaction->feature);
    if (blend_it == data_characteristics.end()) {
      throw Error::invalid_field("data_characteristics." + spec.interaction->feature, "missing");
    }
    const double ratio = blend_it->second;
    runtime *= (1.0 - ratio) * spec.scaleout.eval(n) + ratio * spec.interaction->alternative.eval(n);
  } else {
    runtime *= spec.scaleout.eval(n);
  }

  for (const auto& [name, param] : spec.params) {
    auto it = parameters.find(name);
    if (it == parameters.end()) throw Error::invalid_field("parameters." + name, "missing");
    runtime *= param.curve.eval(it->second);
  }

  if (bottleneck_active(spec, machine, size_gb, config.node_count)) {
    runtime *= spec.bottleneck->penalty;
  }
  return runtime;
}

bool bottleneck_active(const GroundTruthSpec& spec, const MachineType& machine, double size_gb,
                       int node_count) {
  if (!spec.bottleneck.has_value()) return false;
  const double per_node_gb = size_gb / static_cast<double>(node_count);
  return per_node_gb > spec.bottleneck->memory_gb_per_node && per_node_gb > machine.memory_gb;
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  // 53-bit mantissa draw; distribution classes are implementation-defined.
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

double standard_normal(std::mt19937_64& rng) {
  // Marsaglia polar method.
  while (true) {
    const double u = 2.0 * uniform_real(rng, 0.0, 1.0) - 1.0;
    const double v = 2.0 * uniform_real(rng, 0.0, 1.0) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

namespace {

double sample_range(std::mt19937_64& rng, double lo, double hi, double step, bool integral) {
  if (integral) return static_cast<double>(uniform_int(rng, static_cast<int>(lo),
                                                       static_cast<int>(hi)));
  if (step > 0.0) {
    const int slots = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    return lo + step * uniform_int(rng, 0, slots);
  }
  return uniform_real(rng, lo, hi);
}

}  // namespace

SampledConfig sample_config(const GroundTruthSpec& spec, const ContextSpec& context,
                            std::mt19937_64& rng) {
  SampledConfig sampled;
  const std::vector<std::string>* machines = &context.machine_types;
  std::vector<std::string> all_machines;
  if (machines->empty()) {
    for (const auto& m : spec.catalog) all_machines.push_back(m.name);
    machines = &all_machines;
  }
  sampled.config.machine_type = (*machines)[static_cast<std::size_t>(
      uniform_int(rng, 0, static_cast<int>(machines->size()) - 1))];
  sampled.config.node_count = uniform_int(rng, context.node_counts.first, context.node_counts.second);

  for (const auto& [name, range] : spec.data_ranges) {
    auto it = context.data_ranges.find(name);
    const double lo = it != context.data_ranges.end() ? it->second.first : range.lo;
    const double hi = it != context.data_ranges.end() ? it->second.second : range.hi;
    sampled.data_characteristics[name] = sample_range(rng, lo, hi, range.step, false);
  }
  for (const auto& [name, param] : spec.params) {
    auto it = context.param_ranges.find(name);
    const double lo = it != context.param_ranges.end() ? it->second.first : param.lo;
    const double hi = it != context.param_ranges.end() ? it->second.second : param.hi;
    sampled.parameters[name] = sample_range(rng, lo, hi, param.step, param.integral);
  }
  return sampled;
}

void validate_scenario(const ScenarioSpec& scenario) {
  if (!(scenario.noise_cv >= 0.0 && scenario.noise_cv < 0.5)) {
    throw Error(ErrorKind::InvalidScenario, "noise_cv must be in [0, 0.5)");
  }
  if (scenario.replicates < 1) {
    throw Error(ErrorKind::InvalidScenario, "replicates must be >= 1");
  }
  if (scenario.contexts.empty()) {
    throw Error(ErrorKind::InvalidScenario, "scenario needs at least one context");
  }
  for (const auto& context : scenario.contexts) {
    if (context.count < 1) {
      throw Error(ErrorKind::InvalidScenario, "context record count must be >= 1");
    }
    if (context.node_counts.first < 1 || context.node_counts.second < context.node_counts.first) {
      throw Error(ErrorKind::InvalidScenario, "invalid node count range");
    }
    for (const std::string& machine : context.machine_types) {
      if (catalog_index(scenario.spec.catalog, machine) < 0) {
        throw Error(ErrorKind::InvalidScenario, "machine type not in catalog: " + machine);
      }
    }
    for (const auto& [name, range] : context.data_ranges) {
      auto it = scenario.spec.data_ranges.find(name);
      if (it == scenario.spec.data_ranges.end()) {
        throw Error(ErrorKind::InvalidScenario, "unknown data characteristic: " + name);
      }
      if (range.first < it->second.lo || range.second > it->second.hi ||
          range.first > range.second) {
        throw Error(ErrorKind::InvalidScenario, name + " range outside the job's bounds");
      }
    }
    for (const auto& [name, range] : context.param_ranges) {
      auto it = scenario.spec.params.find(name);
      if (it == scenario.spec.params.end()) {
        throw Error(ErrorKind::InvalidScenario, "unknown parameter: " + name);
      }
      if (range.first < it->second.lo || range.second > it->second.hi ||
          range.first > range.second) {
        throw Error(ErrorKind::InvalidScenario, name + " range outside the job's bounds");
      }
    }
  }
}

std::vector<RuntimeRecord> generate_dataset(const ScenarioSpec& scenario) {
  validate_scenario(scenario);
  // sigma of log-normal noise with the requested coefficient of variation;
  // exp(sigma * z) has median 1, so replicate medians stay unbiased.
  const double sigma = std::sqrt(std::log(1.0 + scenario.noise_cv * scenario.noise_cv));

  std::vector<RuntimeRecord> records;
  std::int64_t submitted_at = 1'600'000'000;
  std::mt19937_64 rng(scenario.seed);
  for (const auto& context : scenario.contexts) {
    for (int c = 0; c < context.count; ++c) {
      const SampledConfig sampled = sample_config(scenario.spec, context, rng);
      const double truth = ground_truth_runtime(scenario.spec, sampled.config,
                                                sampled.data_characteristics, sampled.parameters);
      for (int rep = 0; rep < scenario.replicates; ++rep) {
        const double noise =
            scenario.noise_cv > 0.0 ? std::exp(sigma * standard_normal(rng)) : 1.0;
        RuntimeRecord record;
        record.signature = scenario.spec.signature;
        record.config = sampled.config;
        record.data_characteristics = sampled.data_characteristics;
        record.parameters = sampled.parameters;
        record.context_id = context.context_id;
        record.runtime_ms = truth * noise;
        record.submitted_at = submitted_at++;
        records.push_back(std::move(record));
      }
    }
  }
  return records;
}

namespace {

Catalog builtin_catalog() {
  return {
      {"c5.xlarge", 4, 8.0, 0.17},
      {"m5.xlarge", 4, 16.0, 0.192},
      {"m5.2xlarge", 8, 32.0, 0.384},
      {"r5.xlarge", 4, 32.0, 0.252},
  };
}

// All ground-truth coefficients live here. The magnitudes are free choices;
// the orderings, ratios and curve shapes are what the rest of the system and
// the tests rely on.
std::map<std::string, GroundTruthSpec> make_builtin_specs() {
  std::map<std::string, GroundTruthSpec> specs;
  const Catalog catalog = builtin_catalog();

  {
    GroundTruthSpec sort;
    sort.job = "sort";
    sort.signature = {"sort", "spark-2.4.4"};
    sort.catalog = catalog;
    sort.machine_factors = {
        {"c5.xlarge", 1.0}, {"m5.xlarge", 0.92}, {"m5.2xlarge", 0.55}, {"r5.xlarge", 0.88}};
    sort.base_rate_ms_per_gb = 9000.0;
    sort.scaleout = {0.35, 3.2, 0.05, 0.012};
    sort.data_ranges = {{"size_mb", {10240.0, 20480.0, 1024.0}}};
    specs["sort"] = std::move(sort);
  }

  {
    GroundTruthSpec grep;
    grep.job = "grep";
    grep.signature = {"grep", "spark-2.4.4"};
    grep.catalog = catalog;
    grep.machine_factors = {
        {"c5.xlarge", 1.0}, {"m5.xlarge", 0.95}, {"m5.2xlarge", 0.56}, {"r5.xlarge", 0.92}};
    grep.base_rate_ms_per_gb = 7000.0;
    // Searching parallelizes; writing matched lines back in order does not.
    // The keyword ratio blends between the two regimes.
    grep.scaleout = {0.3, 3.5, 0.0, 0.01};
    grep.interaction = InteractionSpec{"keyword_ratio", {2.6, 1.4, 0.0, 0.02}};
    grep.data_ranges = {{"size_mb", {10240.0, 20480.0, 1024.0}},
                       {"keyword_ratio", {0.0, 1.0, 0.1}}};
    specs["grep"] = std::move(grep);
  }

  {
    GroundTruthSpec sgd;
    sgd.job = "sgd";
    sgd.signature = {"sgd", "spark-2.4.4"};
    sgd.catalog = catalog;
    sgd.machine_factors = {
        {"c5.xlarge", 1.0}, {"m5.xlarge", 0.93}, {"m5.2xlarge", 0.52}, {"r5.xlarge", 0.82}};
    sgd.base_rate_ms_per_gb = 11000.0;
    sgd.scaleout = {0.4, 3.2, 0.0, 0.01};
    sgd.data_ranges = {{"size_mb", {10240.0, 30720.0, 1024.0}}};
    sgd.params = {{"max_iterations", {1.0, 100.0, false, {50.0, 0.75}, 11.0}}};
    sgd.bottleneck = BottleneckSpec{8.0, 3.0};
    specs["sgd"] = std::move(sgd);
  }

  {
    GroundTruthSpec kmeans;
    kmeans.job = "kmeans";
    kmeans.signature = {"kmeans", "spark-2.4.4"};
    kmeans.catalog = catalog;
    kmeans.machine_factors = {
        {"c5.xlarge", 1.0}, {"m5.xlarge", 0.94}, {"m5.2xlarge", 0.53}, {"r5.xlarge", 0.85}};
    kmeans.base_rate_ms_per_gb = 10000.0;
    kmeans.scaleout = {0.45, 3.0, 0.04, 0.01};
    kmeans.data_ranges = {{"size_mb", {10240.0, 20480.0, 1024.0}}};
    kmeans.params = {{"k_clusters", {3.0, 9.0, true, {6.0, 1.6}}}};
    kmeans.bottleneck = BottleneckSpec{8.0, 3.0};
    specs["kmeans"] = std::move(kmeans);
  }

  {
    GroundTruthSpec pagerank;
    pagerank.job = "pagerank";
    pagerank.signature = {"pagerank", "spark-2.4.4"};
    pagerank.catalog = catalog;
    pagerank.machine_factors = {
        {"c5.xlarge", 1.0}, {"m5.xlarge", 0.9}, {"m5.2xlarge", 0.5}, {"r5.xlarge", 0.75}};
    pagerank.base_rate_ms_per_gb = 400000.0;
    pagerank.scaleout = {3.0, 1.0, 0.0, 0.0};  // benefits little from scaling out
    pagerank.data_ranges = {{"size_mb", {130.0, 440.0, 10.0}}};
    pagerank.params = {{"convergence_criterion", {0.0001, 0.01, false, {0.001, -0.22}, 0.0033}}};
    specs["pagerank"] = std::move(pagerank);
  }

  return specs;
}

}  // namespace

const std::map<std::string, GroundTruthSpec>& builtin_specs() {
  static const std::map<std::string, GroundTruthSpec> specs = make_builtin_specs();
  return specs;
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "scenario must be a JSON object");
  auto job_it = j.find("job");
  if (job_it == j.end() || !job_it->is_string()) {
    throw Error(ErrorKind::ParseError, "scenario needs a \"job\" name");
  }
  const auto& specs = builtin_specs();
  auto spec_it = specs.find(job_it->get<std::string>());
  if (spec_it == specs.end()) {
    throw Error(ErrorKind::InvalidScenario, "unknown job: " + job_it->get<std::string>());
  }

  ScenarioSpec scenario;
  scenario.spec = spec_it->second;
  scenario.seed = j.value("seed", std::uint64_t{0});
  scenario.noise_cv = j.value("noise_cv", 0.0);
  scenario.replicates = j.value("replicates", 5);

  auto contexts_it = j.find("contexts");
  if (contexts_it == j.end() || !contexts_it->is_array()) {
    throw Error(ErrorKind::ParseError, "scenario needs a \"contexts\" array");
  }
  for (const auto& entry : *contexts_it) {
    ContextSpec context;
    context.context_id = entry.value("context_id", std::string{"default"});
    context.count = entry.value("count", 1);
    if (auto it = entry.find("machine_types"); it != entry.end()) {
      context.machine_types = it->get<std::vector<std::string>>();
    }
    if (auto it = entry.find("node_counts"); it != entry.end()) {
      const auto range = it->get<std::vector<int>>();
      if (range.size() != 2) {
        throw Error(ErrorKind::ParseError, "node_counts must be [lo, hi]");
      }
      context.node_counts = {range[0], range[1]};
    }
    auto read_ranges = [](const nlohmann::json& source) {
      std::map<std::string, std::pair<double, double>> out;
      for (const auto& [key, value] : source.items()) {
        const auto range = value.get<std::vector<double>>();
        if (range.size() != 2) {
          throw Error(ErrorKind::ParseError, key + " range must be [lo, hi]");
        }
        out[key] = {range[0], range[1]};
      }
      return out;
    };
    if (auto it = entry.find("data_characteristics"); it != entry.end()) {
      context.data_ranges = read_ranges(*it);
    }
    if (auto it = entry.find("parameters"); it != entry.end()) {
      context.param_ranges = read_ranges(*it);
    }
    scenario.contexts.push_back(std::move(context));
  }
  validate_scenario(scenario);
  return scenario;
}

}  // namespace c3o
