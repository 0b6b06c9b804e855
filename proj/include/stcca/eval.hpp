#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "stcca/rng.hpp"
#include "stcca/solver.hpp"

namespace stcca {

struct MultiViewDataset {
  std::vector<Eigen::MatrixXd> views;  // d_p x N each
  std::vector<int> labels;             // N entries in [0, C)
  std::vector<std::string> names;      // optional view names

  std::size_t num_views() const { return views.size(); }
  Eigen::Index samples() const {
    return views.empty() ? 0 : views.front().cols();
  }
  int num_classes() const;
  void validate() const;
};

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;       // d x target_dim, descending variance
  Eigen::VectorXd singular_values;  // all min(d, N) of them

  double explained_variance_ratio() const;
};

// Centers rows and keeps the top principal directions. Component signs are
// fixed so the largest-magnitude loading is positive.
PcaModel pca_fit(const Eigen::MatrixXd& x, Eigen::Index target_dim);
Eigen::MatrixXd pca_apply(const PcaModel& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd pca_reduce(const Eigen::MatrixXd& x, Eigen::Index target_dim);

// Concatenated per-view projections [X_1^T H_1, ..., X_m^T H_m], N x (m r).
Eigen::MatrixXd project(const std::vector<Eigen::MatrixXd>& views,
                        const ProjectionSet& projections);
Eigen::MatrixXd project(const MultiViewDataset& data,
                        const ProjectionSet& projections);

// Euclidean k-nearest-neighbor majority vote. Vote ties are broken by the
// smaller total distance, then the smaller label.
std::vector<int> knn_classify(const Eigen::MatrixXd& train_z,
                              const std::vector<int>& train_labels,
                              const Eigen::MatrixXd& test_z, int k);

double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& truth);

// Unweighted mean of per-class F1 = 2TP/(2TP+FP+FN); classes absent from
// both arrays contribute 1.
double f1_macro(const std::vector<int>& predictions,
                const std::vector<int>& truth);

struct EvalConfig {
  int repeats = 10;
  double test_ratio = 0.3;
  int knn_k = 5;
  // per-view PCA cap; the effective dimension is min(pca_dim, d_p, n_train)
  int pca_dim = 20;
  double noise_sigma = 1.0;

  void validate() const;
};

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};

// Per-class random split; every class contributes round(ratio * n_c) test
// samples (at least 1, at most n_c - 1). Classes with fewer than 2 samples
// are rejected.
SplitIndices stratified_split(const std::vector<int>& labels,
                              double test_ratio, Rng& rng);

struct Report {
  std::vector<double> accuracy;
  std::vector<double> f1;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double f1_mean = 0.0;
  double f1_std = 0.0;
  std::vector<double> fit_seconds;
  int repeats = 0;
  double test_ratio = 0.0;
};

// Full protocol: stratified split, per-view PCA fitted on the training
// samples only, fit on the training views, KNN on the concatenated
// projections. Deterministic given (data, cfg, eval_cfg, seed).
Report benchmark(const MultiViewDataset& data, const ProblemConfig& cfg,
                 const EvalConfig& eval_cfg, std::uint64_t seed);

// Adds N(0, sigma^2 * feature_std^2) noise to a random `fraction` of the
// entries of every view.
MultiViewDataset inject_noise(const MultiViewDataset& data, double fraction,
                              double sigma, std::uint64_t seed);

struct TimingRow {
  Eigen::Index samples = 0;
  double seconds = 0.0;
};

// Stratified subsampling at each ratio followed by a timed fit.
std::vector<TimingRow> runtime_scaling(const MultiViewDataset& data,
                                       const ProblemConfig& cfg,
                                       const std::vector<double>& ratios,
                                       std::uint64_t seed);

// Least-squares R^2 of seconds regressed on samples.
double linear_fit_r2(const std::vector<TimingRow>& rows);

}  // namespace stcca
