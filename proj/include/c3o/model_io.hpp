#pragma once

#include <json.hpp>

#include "c3o/predictors.hpp"

namespace c3o {

inline constexpr int kModelFormatVersion = 1;

// Full round-trip serialization of a trained model (all parameters, knots,
// normalization tables and weights), versioned via "model_format".
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);  // throws ParseError

}  // namespace c3o
