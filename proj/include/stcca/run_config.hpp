#pragma once

#include <json.hpp>
#include <string>

#include "stcca/eval.hpp"
#include "stcca/solver.hpp"

namespace stcca {

struct RunSettings {
  ProblemConfig problem;
  EvalConfig eval;
};

// Parses the nested run configuration. Unknown keys and range violations are
// collected and reported together before any computation starts.
RunSettings parse_run_config(const nlohmann::json& doc);

// Loads a JSON config file; an empty path yields the defaults.
RunSettings load_run_config(const std::string& path);

// Echo of the resolved settings, embedded in every structured summary.
nlohmann::json run_settings_json(const RunSettings& settings);

}  // namespace stcca
