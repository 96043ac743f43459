#pragma once

#include <string>

#include "json.hpp"

#include "polyrec/config.hpp"

namespace polyrec::capi {

using Json = nlohmann::ordered_json;

struct RunOutput {
  Json document;  // full report, "timing" holds the only non-deterministic field
  std::string csv;
  bool passed = true;
};

RunOutput run_subcommand(const std::string& name, const nlohmann::json& args,
                         const ExperimentConfig& config);

Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace polyrec::capi
