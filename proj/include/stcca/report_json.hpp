#pragma once

#include <json.hpp>
#include <string>

#include "stcca/run_config.hpp"

namespace stcca {

// Structured run summaries. The exact field layout is documented in the
// README and frozen by a golden-file test; summaries deliberately carry no
// wall-clock timings so that identical seeds reproduce identical bytes.

nlohmann::json dataset_summary_json(const MultiViewDataset& data);

nlohmann::json fit_summary_json(const RunSettings& settings,
                                const MultiViewDataset& data,
                                const FitResult& result, std::uint64_t seed);

nlohmann::json report_summary_json(const RunSettings& settings,
                                   const MultiViewDataset& data,
                                   const Report& report, std::uint64_t seed);

// Serialization used for every summary file (sorted keys, two-space indent,
// trailing newline).
std::string summary_text(const nlohmann::json& summary);

}  // namespace stcca
