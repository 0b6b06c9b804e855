#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "stcca/dataset_io.hpp"
#include "stcca/errors.hpp"
#include "stcca/report_json.hpp"
#include "stcca/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stcca;

namespace {

bool log_enabled() {
  const char* level = std::getenv("STCCA_LOG");
  if (level == nullptr) return false;
  const std::string value(level);
  return !value.empty() && value != "0" && value != "quiet";
}

void log_line(const std::string& message) {
  static const bool enabled = log_enabled();
  if (enabled) std::cerr << "[stcca] " << message << '\n';
}

struct CommonArgs {
  std::string manifest;
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_jobs = false) {
  cmd->add_option("--manifest", args.manifest, "dataset manifest (JSON)")
      ->required();
  cmd->add_option("--config", args.config, "run configuration (JSON)");
  cmd->add_option("--out-dir", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "random seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
  if (with_jobs)
    cmd->add_option("--jobs", args.jobs, "parallel sweep cells")
        ->check(CLI::PositiveNumber);
}

struct LoadedRun {
  RunSettings settings;
  MultiViewDataset data;
  std::uint64_t seed = 0;
};

LoadedRun load_run(const CommonArgs& args) {
  LoadedRun run;
  run.settings = load_run_config(args.config);
  run.data = load_dataset(args.manifest);
  run.seed = args.seed_given ? args.seed : run.settings.problem.seed;
  run.settings.problem.seed = run.seed;
  fs::create_directories(args.out_dir);
  log_line("loaded " + std::to_string(run.data.num_views()) + " views, " +
           std::to_string(run.data.samples()) + " samples");
  return run;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write output file: " + path.string());
  out << text;
}

std::ofstream open_table(const fs::path& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write output file: " + path.string());
  out << header << '\n';
  out << std::setprecision(10);
  return out;
}

// Per-view PCA ahead of a direct fit; the covariance tensor is only built on
// reduced views.
std::vector<Eigen::MatrixXd> reduce_views(const MultiViewDataset& data,
                                          int pca_dim, int rank,
                                          std::vector<Eigen::Index>* dims_out) {
  std::vector<Eigen::MatrixXd> reduced;
  for (const auto& x : data.views) {
    const Eigen::Index dim =
        std::min<Eigen::Index>({pca_dim, x.rows(), x.cols()});
    if (dim < rank)
      throw ConfigError("PCA dimension is below the embedding rank");
    reduced.push_back(pca_reduce(x, dim));
    if (dims_out) dims_out->push_back(dim);
  }
  return reduced;
}

// Runs `count` cells on `jobs` threads; completed rows are flushed to the
// table in index order as soon as the prefix is ready.
void run_cells(int count, int jobs, std::ofstream& table,
               const std::function<std::string(int)>& cell) {
  std::vector<std::string> rows(count);
  std::vector<bool> done(count, false);
  std::mutex flush_mutex;
  int flushed = 0;
  const auto flush_ready = [&](int index, std::string row) {
    const std::lock_guard<std::mutex> lock(flush_mutex);
    rows[index] = std::move(row);
    done[index] = true;
    while (flushed < count && done[flushed]) {
      table << rows[flushed] << '\n';
      table.flush();
      ++flushed;
    }
  };
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) flush_ready(i, cell(i));
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < std::min(jobs, count); ++w)
    workers.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          flush_ready(i, cell(i));
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

std::string format_cell(double value) {
  std::ostringstream out;
  out << std::setprecision(10) << value;
  return out.str();
}

void cmd_fit(const CommonArgs& args) {
  LoadedRun run = load_run(args);
  std::vector<Eigen::Index> pca_dims;
  const auto reduced = reduce_views(run.data, run.settings.eval.pca_dim,
                                    run.settings.problem.rank, &pca_dims);
  const FitResult result = fit(reduced, run.settings.problem);
  for (std::size_t p = 0; p < result.projections.size(); ++p)
    save_delimited_matrix(
        fs::path(args.out_dir) / ("projection_view" + std::to_string(p) + ".csv"),
        result.projections[p]);
  json summary = fit_summary_json(run.settings, run.data, result, run.seed);
  summary["dataset"]["pca_dims"] = pca_dims;
  write_text(fs::path(args.out_dir) / "fit_summary.json", summary_text(summary));
  log_line("fit finished: converged=" + std::to_string(result.converged) +
           " iterations=" + std::to_string(result.iterations));
  std::cout << (result.converged ? "converged" : "not converged") << " after "
            << result.iterations << " iterations; objective "
            << result.final_objective << '\n';
}

void cmd_evaluate(const CommonArgs& args) {
  LoadedRun run = load_run(args);
  const Report report =
      benchmark(run.data, run.settings.problem, run.settings.eval, run.seed);
  write_text(fs::path(args.out_dir) / "report.json",
             summary_text(report_summary_json(run.settings, run.data, report,
                                              run.seed)));
  auto table = open_table(fs::path(args.out_dir) / "repeats.csv",
                          "repeat,accuracy,f1_macro");
  for (int rep = 0; rep < report.repeats; ++rep)
    table << rep << ',' << report.accuracy[rep] << ',' << report.f1[rep] << '\n';
  std::cout << "accuracy " << report.accuracy_mean << " (+/- "
            << report.accuracy_std << "), f1 " << report.f1_mean << " (+/- "
            << report.f1_std << ")\n";
}

void cmd_dim_sweep(const CommonArgs& args, const std::vector<int>& dims) {
  LoadedRun run = load_run(args);
  auto table = open_table(fs::path(args.out_dir) / "dim_sweep.csv",
                          "rank,accuracy_mean,accuracy_std,f1_mean,f1_std");
  json entries = json::array();
  std::mutex entries_mutex;
  run_cells(static_cast<int>(dims.size()), args.jobs, table, [&](int i) {
    RunSettings cell = run.settings;
    cell.problem.rank = dims[i];
    cell.eval.pca_dim = std::max(cell.eval.pca_dim, dims[i]);
    const Report report = benchmark(run.data, cell.problem, cell.eval, run.seed);
    log_line("dim-sweep rank=" + std::to_string(dims[i]) + " accuracy=" +
             format_cell(report.accuracy_mean));
    {
      const std::lock_guard<std::mutex> lock(entries_mutex);
      entries.push_back(json{{"rank", dims[i]},
                             {"accuracy_mean", report.accuracy_mean},
                             {"accuracy_std", report.accuracy_std},
                             {"f1_mean", report.f1_mean},
                             {"f1_std", report.f1_std}});
    }
    return std::to_string(dims[i]) + ',' + format_cell(report.accuracy_mean) +
           ',' + format_cell(report.accuracy_std) + ',' +
           format_cell(report.f1_mean) + ',' + format_cell(report.f1_std);
  });
  std::sort(entries.begin(), entries.end(), [](const json& a, const json& b) {
    return a["rank"].get<int>() < b["rank"].get<int>();
  });
  write_text(fs::path(args.out_dir) / "dim_sweep_summary.json",
             summary_text(json{{"command", "dim-sweep"},
                               {"seed", run.seed},
                               {"config", run_settings_json(run.settings)},
                               {"dataset", dataset_summary_json(run.data)},
                               {"cells", entries}}));
}

void cmd_grid(const CommonArgs& args, const std::vector<double>& lambdas,
              const std::vector<int>& orders) {
  LoadedRun run = load_run(args);
  std::ostringstream header;
  header << "lambda";
  for (int l : orders) header << ",l=" << l;
  auto acc_table =
      open_table(fs::path(args.out_dir) / "grid_accuracy.csv", header.str());
  auto f1_table =
      open_table(fs::path(args.out_dir) / "grid_f1.csv", header.str());

  const int cols = static_cast<int>(orders.size());
  const int count = static_cast<int>(lambdas.size()) * cols;
  std::vector<Report> reports(count);
  std::mutex reports_mutex;
  // flush row-by-row: a synthetic table row is one lambda across all orders
  auto row_table = open_table(fs::path(args.out_dir) / "grid_cells.csv",
                              "lambda,order,accuracy_mean,accuracy_std,"
                              "f1_mean,f1_std");
  run_cells(count, args.jobs, row_table, [&](int i) {
    const int row = i / cols, col = i % cols;
    RunSettings cell = run.settings;
    cell.problem.lambda = {lambdas[row]};
    cell.problem.graph_order = MultiOrderConfig::geometric(orders[col]);
    const Report report = benchmark(run.data, cell.problem, cell.eval, run.seed);
    log_line("grid lambda=" + format_cell(lambdas[row]) + " l=" +
             std::to_string(orders[col]) + " accuracy=" +
             format_cell(report.accuracy_mean));
    {
      const std::lock_guard<std::mutex> lock(reports_mutex);
      reports[i] = report;
    }
    return format_cell(lambdas[row]) + ',' + std::to_string(orders[col]) + ',' +
           format_cell(report.accuracy_mean) + ',' +
           format_cell(report.accuracy_std) + ',' + format_cell(report.f1_mean) +
           ',' + format_cell(report.f1_std);
  });
  json cells = json::array();
  for (std::size_t row = 0; row < lambdas.size(); ++row) {
    acc_table << format_cell(lambdas[row]);
    f1_table << format_cell(lambdas[row]);
    for (int col = 0; col < cols; ++col) {
      const Report& report = reports[row * cols + col];
      acc_table << ',' << format_cell(report.accuracy_mean);
      f1_table << ',' << format_cell(report.f1_mean);
      cells.push_back(json{{"lambda", lambdas[row]},
                           {"order", orders[col]},
                           {"accuracy_mean", report.accuracy_mean},
                           {"accuracy_std", report.accuracy_std},
                           {"f1_mean", report.f1_mean},
                           {"f1_std", report.f1_std}});
    }
    acc_table << '\n';
    f1_table << '\n';
  }
  write_text(fs::path(args.out_dir) / "grid_summary.json",
             summary_text(json{{"command", "grid"},
                               {"seed", run.seed},
                               {"config", run_settings_json(run.settings)},
                               {"dataset", dataset_summary_json(run.data)},
                               {"cells", cells}}));
}

void cmd_noise_sweep(const CommonArgs& args,
                     const std::vector<double>& fractions) {
  LoadedRun run = load_run(args);
  auto table = open_table(fs::path(args.out_dir) / "noise_sweep.csv",
                          "fraction,accuracy_mean,accuracy_std,f1_mean,f1_std");
  json entries = json::array();
  std::mutex entries_mutex;
  run_cells(static_cast<int>(fractions.size()), args.jobs, table, [&](int i) {
    const MultiViewDataset noisy =
        inject_noise(run.data, fractions[i], run.settings.eval.noise_sigma,
                     mix_seed(run.seed, 0x4000 + i));
    const Report report =
        benchmark(noisy, run.settings.problem, run.settings.eval, run.seed);
    log_line("noise-sweep fraction=" + format_cell(fractions[i]) +
             " accuracy=" + format_cell(report.accuracy_mean));
    {
      const std::lock_guard<std::mutex> lock(entries_mutex);
      entries.push_back(json{{"fraction", fractions[i]},
                             {"accuracy_mean", report.accuracy_mean},
                             {"accuracy_std", report.accuracy_std},
                             {"f1_mean", report.f1_mean},
                             {"f1_std", report.f1_std}});
    }
    return format_cell(fractions[i]) + ',' + format_cell(report.accuracy_mean) +
           ',' + format_cell(report.accuracy_std) + ',' +
           format_cell(report.f1_mean) + ',' + format_cell(report.f1_std);
  });
  std::sort(entries.begin(), entries.end(), [](const json& a, const json& b) {
    return a["fraction"].get<double>() < b["fraction"].get<double>();
  });
  write_text(fs::path(args.out_dir) / "noise_sweep_summary.json",
             summary_text(json{{"command", "noise-sweep"},
                               {"seed", run.seed},
                               {"config", run_settings_json(run.settings)},
                               {"dataset", dataset_summary_json(run.data)},
                               {"cells", entries}}));
}

void cmd_graph_export(const CommonArgs& args, int view) {
  LoadedRun run = load_run(args);
  const auto& cfg = run.settings.problem;
  const auto export_view = [&](std::size_t p) {
    const AffinityGraph graph =
        build_graph(run.data.views[p], cfg.graph_method, cfg.graph_params);
    const MultiOrderLaplacian multi = multi_order(graph, cfg.graph_order);
    save_delimited_matrix(
        fs::path(args.out_dir) / ("graph_view" + std::to_string(p) + ".csv"),
        multi.w_multi);
    log_line("exported multi-order graph for view " + std::to_string(p));
  };
  if (view >= 0) {
    if (static_cast<std::size_t>(view) >= run.data.num_views())
      throw ParameterError("view index out of range");
    export_view(static_cast<std::size_t>(view));
  } else {
    for (std::size_t p = 0; p < run.data.num_views(); ++p) export_view(p);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse tensor CCA with multi-order graph Laplacian "
               "regularization (STCCA-L)"};
  app.require_subcommand(1);

  CommonArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit projections on a dataset");
  add_common(fit_cmd, fit_args);
  fit_cmd->callback([&] { cmd_fit(fit_args); });

  CommonArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "classification benchmark protocol");
  add_common(eval_cmd, eval_args);
  eval_cmd->callback([&] { cmd_evaluate(eval_args); });

  CommonArgs dim_args;
  std::vector<int> dims{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  auto* dim_cmd =
      app.add_subcommand("dim-sweep", "accuracy across embedding dimensions");
  add_common(dim_cmd, dim_args, true);
  dim_cmd->add_option("--dims", dims, "ranks to sweep")->delimiter(',');
  dim_cmd->callback([&] { cmd_dim_sweep(dim_args, dims); });

  CommonArgs grid_args;
  std::vector<double> lambdas{1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<int> orders{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto* grid_cmd =
      app.add_subcommand("grid", "lambda x order hyper-parameter grid");
  add_common(grid_cmd, grid_args, true);
  grid_cmd->add_option("--lambdas", lambdas, "sparsity weights")->delimiter(',');
  grid_cmd->add_option("--orders", orders, "graph orders")->delimiter(',');
  grid_cmd->callback([&] { cmd_grid(grid_args, lambdas, orders); });

  CommonArgs noise_args;
  std::vector<double> fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  auto* noise_cmd =
      app.add_subcommand("noise-sweep", "robustness to entry-wise noise");
  add_common(noise_cmd, noise_args, true);
  noise_cmd->add_option("--fractions", fractions, "corrupted entry fractions")
      ->delimiter(',');
  noise_cmd->callback([&] { cmd_noise_sweep(noise_args, fractions); });

  CommonArgs graph_args;
  int graph_view = -1;
  auto* graph_cmd =
      app.add_subcommand("graph-export", "write multi-order graph weights");
  add_common(graph_cmd, graph_args);
  graph_cmd->add_option("--view", graph_view, "view index (default: all)");
  graph_cmd->callback([&] { cmd_graph_export(graph_args, graph_view); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
