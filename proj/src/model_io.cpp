#include "c3o/model_io.hpp"

namespace c3o {

namespace {

nlohmann::json optional_index_to_json(const std::optional<std::size_t>& index) {
  if (!index.has_value()) return nullptr;
  return *index;
}

std::optional<std::size_t> optional_index_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::size_t>();
}

nlohmann::json feature_vector_to_json(const FeatureVector& v) {
  return {{"names", v.names}, {"values", v.values}};
}

FeatureVector feature_vector_from_json(const nlohmann::json& j) {
  FeatureVector v;
  v.names = j.at("names").get<std::vector<std::string>>();
  v.values = j.at("values").get<std::vector<double>>();
  return v;
}

}  // namespace

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json out{{"model_format", kModelFormatVersion}, {"family", model.family_name()}};

  if (const PessimisticModel* p = model.pessimistic()) {
    out["feature_names"] = p->feature_names;
    out["machines"] = p->machines;
    out["machine_feature"] = optional_index_to_json(p->machine_feature);
    out["table"] = {{"names", p->table.names}, {"mins", p->table.mins}, {"maxs", p->table.maxs}};
    out["points"] = p->points;
    out["runtimes"] = p->runtimes;
    out["weights"] = {{"names", p->weights.names}, {"weights", p->weights.weights}};
    out["k"] = p->k;
    return out;
  }

  const OptimisticModel* o = model.optimistic();
  out["feature_names"] = o->feature_names;
  out["machines"] = o->machines;
  out["machine_feature"] = optional_index_to_json(o->machine_feature);
  out["node_feature"] = optional_index_to_json(o->node_feature);
  out["reference_runtime"] = o->reference_runtime;
  out["scaleout"] = {o->scaleout.theta0, o->scaleout.theta1, o->scaleout.theta2,
                     o->scaleout.theta3};
  out["reference_point"] = feature_vector_to_json(o->reference_point);
  nlohmann::json factors = nlohmann::json::object();
  for (const auto& [name, factor] : o->feature_factors) {
    factors[name] = {{"xs", factor.xs}, {"factors", factor.factors}};
  }
  out["feature_factors"] = std::move(factors);
  out["machine_factors"] = o->machine_factors;
  return out;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("model_format").get<int>() != kModelFormatVersion) {
      throw Error(ErrorKind::ParseError, "unsupported model_format");
    }
    const std::string family = j.at("family").get<std::string>();
    if (family == "pessimistic") {
      PessimisticModel p;
      p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
      p.machines = j.at("machines").get<std::vector<std::string>>();
      p.machine_feature = optional_index_from_json(j.at("machine_feature"));
      p.table.names = j.at("table").at("names").get<std::vector<std::string>>();
      p.table.mins = j.at("table").at("mins").get<std::vector<double>>();
      p.table.maxs = j.at("table").at("maxs").get<std::vector<double>>();
      p.points = j.at("points").get<std::vector<std::vector<double>>>();
      p.runtimes = j.at("runtimes").get<std::vector<double>>();
      p.weights.names = j.at("weights").at("names").get<std::vector<std::string>>();
      p.weights.weights = j.at("weights").at("weights").get<std::vector<double>>();
      p.k = j.at("k").get<int>();
      return TrainedModel(std::move(p));
    }
    if (family == "optimistic") {
      OptimisticModel o;
      o.feature_names = j.at("feature_names").get<std::vector<std::string>>();
      o.machines = j.at("machines").get<std::vector<std::string>>();
      o.machine_feature = optional_index_from_json(j.at("machine_feature"));
      o.node_feature = optional_index_from_json(j.at("node_feature"));
      o.reference_runtime = j.at("reference_runtime").get<double>();
      const auto theta = j.at("scaleout").get<std::vector<double>>();
      if (theta.size() != 4) throw Error(ErrorKind::ParseError, "scaleout needs 4 parameters");
      o.scaleout = {theta[0], theta[1], theta[2], theta[3]};
      o.reference_point = feature_vector_from_json(j.at("reference_point"));
      for (const auto& [name, factor] : j.at("feature_factors").items()) {
        PiecewiseFactor f;
        f.xs = factor.at("xs").get<std::vector<double>>();
        f.factors = factor.at("factors").get<std::vector<double>>();
        o.feature_factors[name] = std::move(f);
      }
      o.machine_factors = j.at("machine_factors").get<std::map<std::string, double>>();
      return TrainedModel(std::move(o));
    }
    throw Error(ErrorKind::ParseError, "unknown model family: " + family);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed model document: ") + e.what());
  }
}

}  // namespace c3o
