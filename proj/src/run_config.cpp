#include "stcca/run_config.hpp"

#include <algorithm>
#include <fstream>

#include "stcca/errors.hpp"

namespace stcca {

namespace {

using nlohmann::json;

class Problems {
 public:
  void add(const std::string& message) { messages_.push_back(message); }
  void raise_if_any() const {
    if (messages_.empty()) return;
    std::string joined = "invalid run config:";
    for (const auto& m : messages_) joined += "\n  - " + m;
    throw ConfigError(joined);
  }

 private:
  std::vector<std::string> messages_;
};

void check_keys(const json& section, const std::string& name,
                const std::vector<std::string>& known, Problems& problems) {
  for (const auto& [key, value] : section.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      problems.add("unknown key '" + name + "." + key + "'");
}

template <typename T>
void read(const json& section, const std::string& key, T& target,
          Problems& problems, const std::string& prefix) {
  if (!section.contains(key)) return;
  try {
    target = section.at(key).get<T>();
  } catch (const json::exception&) {
    problems.add("key '" + prefix + "." + key + "' has the wrong type");
  }
}

}  // namespace

RunSettings parse_run_config(const json& doc) {
  Problems problems;
  RunSettings settings;
  if (!doc.is_object()) {
    problems.add("top level must be an object");
    problems.raise_if_any();
  }
  check_keys(doc, "config", {"solver", "graph", "eval"}, problems);

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    check_keys(s, "solver",
               {"lambda", "rank", "step", "backtrack", "max_iter", "tol",
                "seed", "init", "sparsity", "laplacian", "orthogonality",
                "armijo_smooth_only"},
               problems);
    if (s.contains("lambda")) {
      if (s["lambda"].is_array()) {
        read(s, "lambda", settings.problem.lambda, problems, "solver");
      } else {
        double value = settings.problem.lambda.front();
        read(s, "lambda", value, problems, "solver");
        settings.problem.lambda = {value};
      }
    }
    read(s, "rank", settings.problem.rank, problems, "solver");
    read(s, "step", settings.problem.step, problems, "solver");
    read(s, "backtrack", settings.problem.backtrack, problems, "solver");
    read(s, "max_iter", settings.problem.max_iter, problems, "solver");
    read(s, "tol", settings.problem.tol, problems, "solver");
    read(s, "seed", settings.problem.seed, problems, "solver");
    if (s.contains("init")) {
      std::string name;
      read(s, "init", name, problems, "solver");
      try {
        settings.problem.init = init_strategy_from_string(name);
      } catch (const ParameterError& e) {
        problems.add(e.what());
      }
    }
    read(s, "sparsity", settings.problem.sparsity_on, problems, "solver");
    read(s, "laplacian", settings.problem.laplacian_on, problems, "solver");
    read(s, "orthogonality", settings.problem.orthogonality_on, problems,
         "solver");
    read(s, "armijo_smooth_only", settings.problem.armijo_smooth_only,
         problems, "solver");
  }

  if (doc.contains("graph")) {
    const json& g = doc["graph"];
    check_keys(g, "graph",
               {"method", "k", "sigma", "order", "order_weights", "order_decay"},
               problems);
    if (g.contains("method")) {
      std::string name;
      read(g, "method", name, problems, "graph");
      try {
        settings.problem.graph_method = graph_method_from_string(name);
      } catch (const ParameterError& e) {
        problems.add(e.what());
      }
    }
    read(g, "k", settings.problem.graph_params.k, problems, "graph");
    read(g, "sigma", settings.problem.graph_params.sigma, problems, "graph");
    int order = settings.problem.graph_order.max_order;
    double decay = 0.5;
    read(g, "order", order, problems, "graph");
    read(g, "order_decay", decay, problems, "graph");
    if (g.contains("order_weights")) {
      std::vector<double> weights;
      read(g, "order_weights", weights, problems, "graph");
      settings.problem.graph_order.max_order = order;
      settings.problem.graph_order.order_weights = std::move(weights);
    } else {
      try {
        settings.problem.graph_order = MultiOrderConfig::geometric(order, decay);
      } catch (const ParameterError& e) {
        problems.add(e.what());
      }
    }
  }

  if (doc.contains("eval")) {
    const json& e = doc["eval"];
    check_keys(e, "eval",
               {"repeats", "test_ratio", "knn_k", "pca_dim", "noise_sigma"},
               problems);
    read(e, "repeats", settings.eval.repeats, problems, "eval");
    read(e, "test_ratio", settings.eval.test_ratio, problems, "eval");
    read(e, "knn_k", settings.eval.knn_k, problems, "eval");
    read(e, "pca_dim", settings.eval.pca_dim, problems, "eval");
    read(e, "noise_sigma", settings.eval.noise_sigma, problems, "eval");
  }

  // range checks, all reported together
  if (settings.problem.rank < 1) problems.add("solver.rank must be >= 1");
  if (settings.problem.step <= 0.0) problems.add("solver.step must be > 0");
  if (settings.problem.backtrack <= 0.0 || settings.problem.backtrack >= 1.0)
    problems.add("solver.backtrack must lie in (0, 1)");
  if (settings.problem.max_iter < 0) problems.add("solver.max_iter must be >= 0");
  if (settings.problem.tol <= 0.0) problems.add("solver.tol must be > 0");
  for (double l : settings.problem.lambda)
    if (l < 0.0) problems.add("solver.lambda entries must be >= 0");
  if (settings.problem.graph_params.k < 1) problems.add("graph.k must be >= 1");
  if (settings.problem.graph_params.sigma <= 0.0)
    problems.add("graph.sigma must be > 0");
  try {
    settings.problem.graph_order.validate();
  } catch (const ConfigError& e) {
    problems.add(e.what());
  }
  try {
    settings.eval.validate();
  } catch (const ConfigError& e) {
    problems.add(e.what());
  }
  problems.raise_if_any();
  return settings;
}

RunSettings load_run_config(const std::string& path) {
  if (path.empty()) return RunSettings{};
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

nlohmann::json run_settings_json(const RunSettings& settings) {
  const ProblemConfig& p = settings.problem;
  json solver{{"lambda", p.lambda},
              {"rank", p.rank},
              {"step", p.step},
              {"backtrack", p.backtrack},
              {"max_iter", p.max_iter},
              {"tol", p.tol},
              {"init", to_string(p.init)},
              {"sparsity", p.sparsity_on},
              {"laplacian", p.laplacian_on},
              {"orthogonality", p.orthogonality_on},
              {"armijo_smooth_only", p.armijo_smooth_only}};
  json graph{{"method", to_string(p.graph_method)},
             {"k", p.graph_params.k},
             {"sigma", p.graph_params.sigma},
             {"order", p.graph_order.max_order},
             {"order_weights", p.graph_order.order_weights}};
  json eval{{"repeats", settings.eval.repeats},
            {"test_ratio", settings.eval.test_ratio},
            {"knn_k", settings.eval.knn_k},
            {"pca_dim", settings.eval.pca_dim},
            {"noise_sigma", settings.eval.noise_sigma}};
  return json{{"solver", solver}, {"graph", graph}, {"eval", eval}};
}

}  // namespace stcca
