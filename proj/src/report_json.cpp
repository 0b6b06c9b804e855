#include "stcca/report_json.hpp"

#include "stcca/prox.hpp"

namespace stcca {

using nlohmann::json;

json dataset_summary_json(const MultiViewDataset& data) {
  json dims = json::array();
  for (const auto& x : data.views) dims.push_back(x.rows());
  json out{{"views", data.num_views()},
           {"samples", data.samples()},
           {"dims", dims},
           {"classes", data.num_classes()}};
  if (!data.names.empty()) out["names"] = data.names;
  return out;
}

json fit_summary_json(const RunSettings& settings, const MultiViewDataset& data,
                      const FitResult& result, std::uint64_t seed) {
  json sparsity = json::array();
  json zero_rows = json::array();
  for (const auto& h : result.projections) {
    sparsity.push_back(l21_norm(h));
    int zeros = 0;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (h.row(i).norm() == 0.0) ++zeros;
    zero_rows.push_back(zeros);
  }
  json res{{"converged", result.converged},
           {"iterations", result.iterations},
           {"initial_objective", result.trace.objective.front()},
           {"final_objective", result.final_objective},
           {"final_stationarity", result.final_stationarity},
           {"l21_per_view", sparsity},
           {"zero_rows_per_view", zero_rows}};
  return json{{"command", "fit"},
              {"seed", seed},
              {"config", run_settings_json(settings)},
              {"dataset", dataset_summary_json(data)},
              {"result", res}};
}

json report_summary_json(const RunSettings& settings,
                         const MultiViewDataset& data, const Report& report,
                         std::uint64_t seed) {
  json rep{{"repeats", report.repeats},
           {"test_ratio", report.test_ratio},
           {"accuracy",
            {{"mean", report.accuracy_mean},
             {"std", report.accuracy_std},
             {"per_repeat", report.accuracy}}},
           {"f1_macro",
            {{"mean", report.f1_mean},
             {"std", report.f1_std},
             {"per_repeat", report.f1}}}};
  return json{{"command", "evaluate"},
              {"seed", seed},
              {"config", run_settings_json(settings)},
              {"dataset", dataset_summary_json(data)},
              {"report", rep}};
}

std::string summary_text(const json& summary) {
  return summary.dump(2) + "\n";
}

}  // namespace stcca
