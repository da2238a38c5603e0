// Command line for the collaborative cluster-configuration toolkit: generate
// synthetic runtime data, ingest and sample shared datasets, predict runtimes,
// recommend cluster configurations, and run the model evaluation suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "c3o/configurator.hpp"
#include "c3o/dataset.hpp"
#include "c3o/evaluation.hpp"
#include "c3o/jsonl.hpp"
#include "c3o/model_io.hpp"
#include "c3o/selector.hpp"
#include "c3o/simulator.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string data_dir;
  std::string catalog_path;
  std::string data_path;
  std::string job;  // <algorithm_name>__<implementation_id>
  std::string format = "table";
  int knn_k = 3;
  int folds = 5;
  int min_points_for_cv = 5;
  double safety_margin = 1.0;
};

std::filesystem::path resolve_data_path(const GlobalOptions& options) {
  if (!options.data_path.empty()) return options.data_path;
  if (!options.job.empty() && !options.data_dir.empty()) {
    return std::filesystem::path(options.data_dir) / (options.job + ".jsonl");
  }
  throw UsageError("need --data, or --data-dir (or C3O_DATA_DIR) together with --job");
}

std::filesystem::path resolve_catalog_path(const GlobalOptions& options) {
  if (!options.catalog_path.empty()) return options.catalog_path;
  if (!options.data_dir.empty()) {
    return std::filesystem::path(options.data_dir) / "catalog.json";
  }
  throw UsageError("need --catalog or --data-dir (or C3O_DATA_DIR)");
}

std::map<std::string, double> parse_key_values(const std::vector<std::string>& entries,
                                               const std::string& flag) {
  std::map<std::string, double> out;
  for (const std::string& entry : entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(flag + " expects key=value, got: " + entry);
    }
    try {
      out[entry.substr(0, eq)] = std::stod(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError(flag + " value is not a number: " + entry);
    }
  }
  return out;
}

std::vector<int> parse_node_list(const std::string& text) {
  std::vector<int> nodes;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int n = lo; n <= hi; ++n) nodes.push_back(n);
  } else {
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) nodes.push_back(std::stoi(item));
  }
  if (nodes.empty()) throw UsageError("empty node grid: " + text);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i] <= nodes[i - 1]) throw UsageError("node grid must be strictly increasing");
  }
  if (nodes.front() < 1) throw UsageError("node counts must be >= 1");
  return nodes;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

c3o::RuntimeDataset load_dataset(const std::filesystem::path& data_path,
                                 const c3o::Catalog& catalog) {
  const std::vector<c3o::RuntimeRecord> records = c3o::read_records(data_path);
  if (records.empty()) {
    throw c3o::Error(c3o::ErrorKind::NotEnoughData, "dataset is empty: " + data_path.string());
  }
  c3o::IngestReport report;
  c3o::RuntimeDataset dataset =
      c3o::dataset_from_records(records.front().signature, catalog, records, &report);
  if (report.rejected > 0) {
    throw c3o::Error(c3o::ErrorKind::ParseError,
                     data_path.string() + ": " + std::to_string(report.rejected) +
                         " records rejected (first: " + report.rejections.front().message + ")");
  }
  return dataset;
}

c3o::FeatureVector build_query(const c3o::RuntimeDataset& dataset, const std::string& machine,
                               int nodes, const std::map<std::string, double>& data,
                               const std::map<std::string, double>& params) {
  c3o::RuntimeRecord probe;
  probe.signature = dataset.signature();
  probe.config = {machine, nodes};
  probe.data_characteristics = data;
  probe.parameters = params;
  probe.runtime_ms = 1.0;
  return c3o::encode_features(probe, dataset.catalog());
}

int run_generate(const std::string& builtin, const std::string& scenario_path, std::uint64_t seed,
                 bool seed_given, double noise, bool noise_given, int replicates,
                 const std::string& output, const std::string& emit_catalog) {
  c3o::ScenarioSpec scenario;
  if (!builtin.empty()) {
    const auto& specs = c3o::builtin_specs();
    auto it = specs.find(builtin);
    if (it == specs.end()) {
      std::string names;
      for (const auto& [name, spec] : specs) names += (names.empty() ? "" : ", ") + name;
      throw UsageError("unknown builtin job '" + builtin + "'; available: " + names);
    }
    scenario.spec = it->second;
    scenario.noise_cv = 0.1;
    // Three contributing organizations with different scale-out habits.
    scenario.contexts = {c3o::ContextSpec{"org-a", 12, {}, {2, 8}, {}, {}},
                         c3o::ContextSpec{"org-b", 12, {}, {4, 12}, {}, {}},
                         c3o::ContextSpec{"org-c", 12, {}, {8, 16}, {}, {}}};
  } else if (!scenario_path.empty()) {
    std::ifstream in(scenario_path);
    if (!in) throw c3o::Error(c3o::ErrorKind::IoError, "cannot open " + scenario_path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      throw c3o::Error(c3o::ErrorKind::ParseError, "invalid JSON in " + scenario_path);
    }
    scenario = c3o::scenario_from_json(j);
  } else {
    throw UsageError("generate needs --builtin or --scenario");
  }
  if (seed_given) scenario.seed = seed;
  if (noise_given) scenario.noise_cv = noise;
  scenario.replicates = replicates;
  c3o::validate_scenario(scenario);

  const std::vector<c3o::RuntimeRecord> records = c3o::generate_dataset(scenario);
  c3o::write_records(output, records);
  if (!emit_catalog.empty()) c3o::write_catalog(emit_catalog, scenario.spec.catalog);
  std::cout << "wrote " << records.size() << " records to " << output << "\n";
  return 0;
}

int run_ingest(const GlobalOptions& options, const std::string& input, const std::string& output) {
  const c3o::Catalog catalog = c3o::read_catalog(resolve_catalog_path(options));
  const std::filesystem::path data_path = resolve_data_path(options);

  std::vector<c3o::RuntimeRecord> existing;
  if (std::filesystem::exists(data_path)) existing = c3o::read_records(data_path);
  const std::vector<c3o::RuntimeRecord> incoming = c3o::read_records(input);
  if (existing.empty() && incoming.empty()) {
    throw c3o::Error(c3o::ErrorKind::NotEnoughData, "no records to ingest");
  }

  const c3o::JobSignature signature =
      existing.empty() ? incoming.front().signature : existing.front().signature;
  c3o::RuntimeDataset dataset(signature, catalog);
  if (!existing.empty()) dataset.ingest(existing);
  const c3o::IngestReport report = dataset.ingest(incoming);

  const std::filesystem::path out_path =
      output.empty() ? data_path : std::filesystem::path(output);
  c3o::write_records(out_path, dataset.records());

  nlohmann::json rejections = nlohmann::json::array();
  for (const auto& r : report.rejections) {
    rejections.push_back({{"batch_index", r.batch_index},
                          {"reason", c3o::to_string(r.kind)},
                          {"message", r.message}});
  }
  std::cout << nlohmann::json{{"accepted", report.accepted},
                              {"rejected", report.rejected},
                              {"duplicates", report.duplicates},
                              {"replicates_merged", report.replicates_merged},
                              {"rejections", rejections}}
                   .dump(2)
            << "\n";
  return 0;
}

int run_sample(const GlobalOptions& options, std::size_t max_points, const std::string& output) {
  const c3o::Catalog catalog = c3o::read_catalog(resolve_catalog_path(options));
  const c3o::RuntimeDataset dataset = load_dataset(resolve_data_path(options), catalog);

  const std::vector<c3o::CollapsedPoint> sample = c3o::coverage_sample(dataset, max_points);
  std::vector<c3o::RuntimeRecord> out;
  out.reserve(sample.size());
  for (const auto& point : sample) {
    // Representative record: the first replicate, carrying the median runtime.
    c3o::RuntimeRecord record = dataset.records()[point.first_index];
    record.runtime_ms = point.runtime_ms;
    out.push_back(std::move(record));
  }
  c3o::write_records(output, out);
  std::cout << "wrote " << out.size() << " of " << dataset.collapsed().size()
            << " collapsed points to " << output << "\n";
  return 0;
}

int run_predict(const GlobalOptions& options, const std::string& machine, int nodes,
                const std::vector<std::string>& inputs, const std::vector<std::string>& params,
                bool explain) {
  const c3o::Catalog catalog = c3o::read_catalog(resolve_catalog_path(options));
  const c3o::RuntimeDataset dataset = load_dataset(resolve_data_path(options), catalog);

  const c3o::SelectorOptions selector_options{options.knn_k, options.folds,
                                              options.min_points_for_cv};
  auto [model, report] = c3o::select_and_train(c3o::training_points(dataset),
                                               c3o::machine_names(catalog), selector_options);

  const c3o::FeatureVector query =
      build_query(dataset, machine, nodes, parse_key_values(inputs, "--input"),
                  parse_key_values(params, "--param"));
  const double predicted = model.predict(query);

  if (options.format == "json") {
    nlohmann::json out{{"predicted_runtime_ms", predicted}, {"model", model.family_name()}};
    if (explain) out["selection"] = report.to_json();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "predicted_runtime_ms: " << predicted << "\n"
              << "model: " << model.family_name() << "\n";
    if (explain) std::cout << report.to_json().dump(2) << "\n";
  }
  return 0;
}

int run_configure(const GlobalOptions& options, const std::string& machines_csv,
                  const std::string& nodes_grid, const std::vector<std::string>& inputs,
                  const std::vector<std::string>& params, double target_ms,
                  std::optional<double> budget, bool explain) {
  const c3o::Catalog catalog = c3o::read_catalog(resolve_catalog_path(options));
  const c3o::RuntimeDataset dataset = load_dataset(resolve_data_path(options), catalog);

  c3o::CandidateGrid grid;
  if (machines_csv.empty()) {
    grid.machine_types = catalog;
  } else {
    for (const std::string& name : split_csv(machines_csv)) {
      const int index = c3o::catalog_index(catalog, name);
      if (index < 0) throw c3o::Error::unknown_machine_type(name);
      grid.machine_types.push_back(catalog[index]);
    }
  }
  grid.node_counts =
      nodes_grid.empty() ? c3o::CandidateGrid::default_node_counts() : parse_node_list(nodes_grid);

  const c3o::SelectorOptions selector_options{options.knn_k, options.folds,
                                              options.min_points_for_cv};
  auto [model, report] = c3o::select_and_train(c3o::training_points(dataset),
                                               c3o::machine_names(catalog), selector_options);

  const c3o::JobInputs job_inputs{parse_key_values(inputs, "--input"),
                                  parse_key_values(params, "--param")};
  const c3o::GridEvaluation evaluation = c3o::evaluate_grid(model, grid, job_inputs);
  const c3o::Recommendation recommendation =
      c3o::recommend(evaluation, {target_ms, options.safety_margin}, budget);

  if (options.format == "json") {
    nlohmann::json out = recommendation.to_json();
    if (explain) out["selection"] = report.to_json();
    std::cout << out.dump(2) << "\n";
  } else if (options.format == "csv") {
    std::cout << c3o::alternatives_to_csv(recommendation.alternatives);
  } else {
    std::cout << "recommended: " << recommendation.config.machine_type << " x "
              << recommendation.config.node_count << "\n"
              << "predicted_runtime_ms: " << recommendation.predicted_runtime_ms << "\n"
              << "predicted_cost_usd: " << recommendation.predicted_cost_usd << "\n"
              << "feasible: " << (recommendation.feasible ? "true" : "false") << "\n";
    if (!recommendation.feasible) {
      std::cout << "reason: " << recommendation.infeasibility_reason << "\n";
    }
    std::cout << "model: " << recommendation.model_used << "\n";
    if (explain) std::cout << report.to_json().dump(2) << "\n";
  }
  return 0;
}

int run_evaluate(const GlobalOptions& options, const std::string& jobs_csv, std::uint64_t seed,
                 double noise) {
  const c3o::SelectorOptions selector_options{options.knn_k, options.folds,
                                              options.min_points_for_cv};
  const std::vector<c3o::EvalResult> results =
      c3o::run_standard_evaluation(seed, noise, split_csv(jobs_csv), selector_options);
  if (options.format == "table") {
    std::cout << "scenario                  n    chosen       mrae(pess)  mrae(opt)   regret\n";
    for (const auto& r : results) {
      std::ostringstream row;
      row.setf(std::ios::fixed);
      row.precision(4);
      row << r.name;
      for (std::size_t pad = r.name.size(); pad < 26; ++pad) row << ' ';
      row << r.n_points << "   " << r.chosen;
      for (std::size_t pad = r.chosen.size(); pad < 13; ++pad) row << ' ';
      row << r.pessimistic_mrae << "      " << r.optimistic_mrae << "      " << r.regret;
      std::cout << row.str() << "\n";
    }
  } else {
    std::cout << c3o::evaluation_to_csv(results);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative cluster configurator for distributed dataflow jobs"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--data-dir", options.data_dir, "directory of shared runtime data files")
      ->envname("C3O_DATA_DIR");
  app.add_option("--catalog", options.catalog_path, "machine-type catalog JSON");
  app.add_option("--data", options.data_path, "runtime data JSONL file");
  app.add_option("--job", options.job, "dataset name <algorithm>__<implementation>");
  app.add_option("--format", options.format, "output format: table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--k", options.knn_k, "neighbor count of the similarity model")
      ->check(CLI::PositiveNumber);
  app.add_option("--folds", options.folds, "cross-validation folds")->check(CLI::PositiveNumber);
  app.add_option("--min-points-for-cv", options.min_points_for_cv,
                 "below this many points the factor model is chosen without CV")
      ->check(CLI::PositiveNumber);
  app.add_option("--margin", options.safety_margin, "safety margin on predicted runtimes")
      ->check(CLI::Range(1.0, 100.0));

  auto* generate = app.add_subcommand("generate", "generate synthetic runtime data");
  generate->fallthrough();
  std::string builtin, scenario_path, output, emit_catalog;
  std::uint64_t seed = 0;
  double noise = 0.1;
  int replicates = 5;
  generate->add_option("--builtin", builtin, "builtin job: grep|kmeans|pagerank|sgd|sort");
  generate->add_option("--scenario", scenario_path, "scenario JSON file");
  auto* seed_option = generate->add_option("--seed", seed, "random seed");
  auto* noise_option = generate->add_option("--noise", noise, "noise coefficient of variation");
  generate->add_option("--replicates", replicates, "executions per configuration")
      ->check(CLI::PositiveNumber);
  generate->add_option("-o,--output", output, "output JSONL path")->required();
  generate->add_option("--emit-catalog", emit_catalog, "also write the machine catalog here");

  auto* ingest = app.add_subcommand("ingest", "merge new records into a dataset");
  ingest->fallthrough();
  std::string ingest_input, ingest_output;
  ingest->add_option("--input", ingest_input, "JSONL file with new records")->required();
  ingest->add_option("-o,--output", ingest_output, "output path (default: the data file)");

  auto* sample = app.add_subcommand("sample", "coverage-maximizing sample of a dataset");
  sample->fallthrough();
  std::size_t max_points = 0;
  std::string sample_output;
  sample->add_option("--max-points", max_points, "maximal sample size")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("-o,--output", sample_output, "output JSONL path")->required();

  auto* predict = app.add_subcommand("predict", "predict the runtime of one configuration");
  predict->fallthrough();
  std::string machine;
  int nodes = 0;
  std::vector<std::string> input_kv, param_kv;
  bool explain = false;
  predict->add_option("--machine", machine, "machine type name")->required();
  predict->add_option("--nodes", nodes, "node count")->required()->check(CLI::PositiveNumber);
  predict->add_option("--input", input_kv, "data characteristic key=value (repeatable)");
  predict->add_option("--param", param_kv, "job parameter key=value (repeatable)");
  predict->add_flag("--explain", explain, "print the model-selection report");

  auto* configure = app.add_subcommand("configure", "recommend the cheapest fitting cluster");
  configure->fallthrough();
  std::string machines_csv, nodes_grid;
  double target_ms = 0.0;
  double budget_usd = 0.0;
  configure->add_option("--target-ms", target_ms, "runtime target in milliseconds")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* budget_option = configure->add_option("--budget-usd", budget_usd, "maximal cost in USD")
                            ->check(CLI::PositiveNumber);
  configure->add_option("--machines", machines_csv, "candidate machine types (default: catalog)");
  configure->add_option("--nodes-grid", nodes_grid, "candidate node counts, list or lo..hi");
  configure->add_option("--input", input_kv, "data characteristic key=value (repeatable)");
  configure->add_option("--param", param_kv, "job parameter key=value (repeatable)");
  configure->add_flag("--explain", explain, "print the model-selection report");

  auto* evaluate = app.add_subcommand("evaluate", "benchmark both model families per scenario");
  evaluate->fallthrough();
  std::string jobs_csv;
  std::uint64_t eval_seed = 1;
  double eval_noise = 0.05;
  evaluate->add_option("--jobs", jobs_csv, "comma-separated builtin jobs (default: all)");
  evaluate->add_option("--seed", eval_seed, "base seed");
  evaluate->add_option("--noise", eval_noise, "noise coefficient of variation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      return run_generate(builtin, scenario_path, seed, seed_option->count() > 0, noise,
                          noise_option->count() > 0, replicates, output, emit_catalog);
    }
    if (ingest->parsed()) return run_ingest(options, ingest_input, ingest_output);
    if (sample->parsed()) return run_sample(options, max_points, sample_output);
    if (predict->parsed()) {
      return run_predict(options, machine, nodes, input_kv, param_kv, explain);
    }
    if (configure->parsed()) {
      std::optional<double> budget;
      if (budget_option->count() > 0) budget = budget_usd;
      return run_configure(options, machines_csv, nodes_grid, input_kv, param_kv, target_ms,
                           budget, explain);
    }
    if (evaluate->parsed()) return run_evaluate(options, jobs_csv, eval_seed, eval_noise);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const c3o::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
