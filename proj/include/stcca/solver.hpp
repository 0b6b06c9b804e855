#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "stcca/graph.hpp"
#include "stcca/manifold.hpp"
#include "stcca/ssn.hpp"
#include "stcca/tensor.hpp"

namespace stcca {

struct ProblemConfig {
  std::vector<double> lambda{1e-3};  // per-view sparsity weights; size 1 broadcasts
  int rank = 2;                      // embedding dimension r
  double step = 1e-2;                // proximal step parameter t
  double backtrack = 0.5;            // line-search factor gamma in (0, 1)
  int max_iter = 100;
  double tol = 1e-6;                 // stationarity tolerance on max_p ||D_p||
  std::uint64_t seed = 0;
  InitStrategy init = InitStrategy::Random;

  GraphMethod graph_method = GraphMethod::Adaptive;
  GraphParams graph_params;
  MultiOrderConfig graph_order = MultiOrderConfig::geometric(2);

  // ablation switches
  bool sparsity_on = true;
  bool laplacian_on = true;
  bool orthogonality_on = true;

  // test the line-search condition on the smooth term alone, as opposed to
  // the full objective (comparison variant; breaks the monotone-G guarantee)
  bool armijo_smooth_only = false;

  double lambda_for(std::size_t view) const;
  // effective weight: zero when the sparsity term is ablated
  double effective_lambda(std::size_t view) const;
  void validate(std::size_t num_views) const;
};

struct StepRecord {
  int iteration = 0;
  int view = 0;
  double alpha = 0.0;
  double direction_norm = 0.0;
  // view-local part of the objective around the step; terms of the other
  // views are constant during the step and omitted from both values
  double objective_before = 0.0;
  double objective_after = 0.0;
  bool stalled = false;
  bool applied = false;
  bool subproblem_converged = true;
};

struct SolverTrace {
  std::vector<double> objective;       // G per outer iteration; [0] is initial
  std::vector<double> direction_norm;  // max_p ||D_p||_F per outer iteration
  std::vector<double> feasibility;     // max_p ||H^T M H - I||_F per iteration
  std::vector<StepRecord> steps;
};

struct FitResult {
  ProjectionSet projections;
  bool converged = false;
  int iterations = 0;
  double final_objective = 0.0;
  double final_stationarity = std::numeric_limits<double>::infinity();
  double wall_seconds = 0.0;
  SolverTrace trace;
};

// Precomputed problem state: covariance tensor, per-view metrics, and the
// d x d Laplacian quadratics X L X^T.
class Problem {
 public:
  Problem(std::vector<Eigen::MatrixXd> views, ProblemConfig cfg);

  std::size_t num_views() const { return views_.size(); }
  Eigen::Index view_dim(std::size_t p) const { return views_[p].rows(); }
  Eigen::Index samples() const { return views_.front().cols(); }
  const ProblemConfig& config() const { return cfg_; }
  const Tensor& covariance() const { return covariance_; }
  const ViewMetric& metric(std::size_t p) const { return metrics_[p]; }
  const Eigen::MatrixXd& laplacian_quad(std::size_t p) const {
    return laplacian_quads_[p];
  }

  // Full objective G: -1/2 ||P||_F^2 + sum_p lambda_p ||H_p||_{2,1}
  //                   + sum_p tr(H_p^T X L X^T H_p), ablated terms omitted.
  double objective(const ProjectionSet& h) const;
  // Smooth part F (no sparsity term).
  double smooth_objective(const ProjectionSet& h) const;
  // Gradient of F with respect to H_p.
  Eigen::MatrixXd euclidean_grad(const ProjectionSet& h, std::size_t p) const;

  ProjectionSet initial_projections() const;

 private:
  std::vector<Eigen::MatrixXd> views_;
  ProblemConfig cfg_;
  Tensor covariance_;
  std::vector<ViewMetric> metrics_;
  std::vector<Eigen::MatrixXd> laplacian_quads_;
};

struct LineSearchResult {
  double alpha = 0.0;
  double objective_after = 0.0;
  bool stalled = false;
};

// Backtracking search for the largest alpha = gamma^j with
//   objective_at(alpha) <= objective_now - (alpha / (2 t)) ||D||_F^2.
// When no alpha above the floor satisfies the test, the floor value is
// returned with the stall flag set.
LineSearchResult line_search(const std::function<double(double)>& objective_at,
                             double objective_now, double direction_norm_sq,
                             double t, double gamma, double floor = 1e-10);

// Alternating manifold proximal gradient loop over the views.
FitResult fit(const std::vector<Eigen::MatrixXd>& views,
              const ProblemConfig& cfg);

// Convergence measure: max over views of the latest ||D_p||_F.
double stationarity(const SolverTrace& trace);

}  // namespace stcca
