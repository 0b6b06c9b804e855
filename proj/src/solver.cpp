#include "stcca/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "stcca/errors.hpp"
#include "stcca/prox.hpp"
#include "stcca/rng.hpp"

namespace stcca {

double ProblemConfig::lambda_for(std::size_t view) const {
  if (lambda.size() == 1) return lambda.front();
  return lambda.at(view);
}

double ProblemConfig::effective_lambda(std::size_t view) const {
  return sparsity_on ? lambda_for(view) : 0.0;
}

void ProblemConfig::validate(std::size_t num_views) const {
  if (rank < 1) throw ConfigError("rank must be >= 1");
  if (step <= 0.0) throw ConfigError("step parameter t must be > 0");
  if (backtrack <= 0.0 || backtrack >= 1.0)
    throw ConfigError("backtracking factor must lie in (0, 1)");
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  if (tol <= 0.0) throw ConfigError("tolerance must be > 0");
  if (lambda.empty() ||
      (lambda.size() != 1 && lambda.size() != num_views))
    throw ConfigError("lambda must hold one weight or one per view");
  for (double l : lambda)
    if (l < 0.0) throw ConfigError("sparsity weights must be >= 0");
  graph_order.validate();
}

Problem::Problem(std::vector<Eigen::MatrixXd> views, ProblemConfig cfg)
    : views_(std::move(views)), cfg_(std::move(cfg)) {
  if (views_.empty()) throw DataError("fit needs at least one view");
  cfg_.validate(views_.size());
  const Eigen::Index samples = views_.front().cols();
  for (std::size_t p = 0; p < views_.size(); ++p) {
    if (views_[p].cols() != samples)
      throw DataError("views disagree on the sample count");
    if (!views_[p].allFinite())
      throw DataError("view " + std::to_string(p) + " contains non-finite values");
    if (views_[p].rows() < cfg_.rank)
      throw ConfigError("rank exceeds the dimension of view " + std::to_string(p));
  }
  covariance_ = covariance_tensor(views_);
  metrics_.reserve(views_.size());
  for (const auto& x : views_) metrics_.push_back(ViewMetric::from_data(x));
  if (cfg_.laplacian_on) {
    laplacian_quads_.reserve(views_.size());
    for (const auto& x : views_) {
      const AffinityGraph graph =
          build_graph(x, cfg_.graph_method, cfg_.graph_params);
      laplacian_quads_.push_back(laplacian_quadratic(x, graph, cfg_.graph_order));
    }
  }
}

double Problem::smooth_objective(const ProjectionSet& h) const {
  const Tensor contracted = contract_all_but(covariance_, h, 0);
  const Tensor core = mode_product(contracted, h[0].transpose(), 0);
  double value = -0.5 * inner(core, core);
  if (cfg_.laplacian_on)
    for (std::size_t p = 0; p < h.size(); ++p)
      value += (h[p].transpose() * laplacian_quads_[p] * h[p]).trace();
  return value;
}

double Problem::objective(const ProjectionSet& h) const {
  double value = smooth_objective(h);
  for (std::size_t p = 0; p < h.size(); ++p)
    value += cfg_.effective_lambda(p) * l21_norm(h[p]);
  return value;
}

Eigen::MatrixXd Problem::euclidean_grad(const ProjectionSet& h,
                                        std::size_t p) const {
  const Tensor contracted =
      contract_all_but(covariance_, h, static_cast<int>(p));
  const Eigen::MatrixXd u = unfold(contracted, static_cast<int>(p));
  Eigen::MatrixXd grad = -u * (u.transpose() * h[p]);
  if (cfg_.laplacian_on) grad += 2.0 * laplacian_quads_[p] * h[p];
  return grad;
}

ProjectionSet Problem::initial_projections() const {
  ProjectionSet h;
  h.reserve(views_.size());
  for (std::size_t p = 0; p < views_.size(); ++p)
    h.push_back(random_point(views_[p].rows(), cfg_.rank, metrics_[p],
                             mix_seed(cfg_.seed, p), cfg_.init)
                    .h);
  return h;
}

LineSearchResult line_search(const std::function<double(double)>& objective_at,
                             double objective_now, double direction_norm_sq,
                             double t, double gamma, double floor) {
  double alpha = 1.0;
  double value = 0.0;
  while (true) {
    value = objective_at(alpha);
    if (value <= objective_now - (alpha / (2.0 * t)) * direction_norm_sq)
      return {alpha, value, false};
    if (alpha * gamma < floor) break;
    alpha *= gamma;
  }
  return {alpha, value, true};
}

namespace {

double max_feasibility(const Problem& problem, const ProjectionSet& h) {
  double worst = 0.0;
  for (std::size_t p = 0; p < h.size(); ++p)
    worst = std::max(worst,
                     feasibility_residual({h[p]}, problem.metric(p)));
  return worst;
}

}  // namespace

FitResult fit(const std::vector<Eigen::MatrixXd>& views,
              const ProblemConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Problem problem(views, cfg);
  ProjectionSet h = problem.initial_projections();
  const std::size_t m = problem.num_views();

  SolverTrace trace;
  trace.objective.push_back(problem.objective(h));
  trace.feasibility.push_back(max_feasibility(problem, h));

  bool converged = false;
  int iterations = 0;
  for (int k = 0; k < cfg.max_iter && !converged; ++k) {
    double sweep_norm = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      const double lambda_p = cfg.effective_lambda(p);
      const Eigen::MatrixXd grad = problem.euclidean_grad(h, p);

      Eigen::MatrixXd direction;
      double t_used = cfg.step;
      bool subproblem_ok = true;
      if (cfg.orthogonality_on) {
        SubproblemSpec spec{h[p], grad, &problem.metric(p), cfg.step, lambda_p};
        SubproblemResult sub = solve_subproblem(spec);
        for (int shrink = 0; shrink < 3 && !sub.converged; ++shrink) {
          spec.t *= 0.5;
          sub = solve_subproblem(spec);
        }
        t_used = spec.t;
        subproblem_ok = sub.converged;
        direction = std::move(sub.direction);
      } else {
        // ablation without the manifold constraint: ambient proximal step
        direction = row_shrink(h[p] - cfg.step * grad, cfg.step * lambda_p) - h[p];
      }

      const double dir_norm = direction.norm();
      sweep_norm = std::max(sweep_norm, dir_norm);

      StepRecord record;
      record.iteration = k;
      record.view = static_cast<int>(p);
      record.direction_norm = dir_norm;
      record.subproblem_converged = subproblem_ok;
      if (dir_norm == 0.0) {
        record.objective_before = record.objective_after = trace.objective.back();
        trace.steps.push_back(record);
        continue;
      }

      // partial objective: only view-p terms vary during the search
      const Tensor contracted =
          contract_all_but(problem.covariance(), h, static_cast<int>(p));
      const auto partial = [&](const Eigen::MatrixXd& candidate) {
        const Tensor core = mode_product(contracted, candidate.transpose(),
                                         static_cast<int>(p));
        double value = -0.5 * inner(core, core);
        if (cfg.laplacian_on)
          value += (candidate.transpose() * problem.laplacian_quad(p) * candidate)
                       .trace();
        if (!cfg.armijo_smooth_only) value += lambda_p * l21_norm(candidate);
        return value;
      };
      const auto candidate_at = [&](double alpha) -> Eigen::MatrixXd {
        if (cfg.orthogonality_on)
          return retract({h[p]}, alpha * direction, problem.metric(p)).h;
        return h[p] + alpha * direction;
      };

      const double partial_now = partial(h[p]);
      const LineSearchResult search = line_search(
          [&](double alpha) { return partial(candidate_at(alpha)); },
          partial_now, dir_norm * dir_norm, t_used, cfg.backtrack);

      record.alpha = search.alpha;
      record.stalled = search.stalled;
      record.objective_before = partial_now;
      record.objective_after = search.objective_after;
      // a stalled step is applied only if it cannot break monotonicity
      record.applied =
          !search.stalled || search.objective_after <= partial_now + 1e-12;
      if (record.applied) h[p] = candidate_at(search.alpha);
      trace.steps.push_back(record);
    }

    trace.objective.push_back(problem.objective(h));
    trace.direction_norm.push_back(sweep_norm);
    trace.feasibility.push_back(max_feasibility(problem, h));
    iterations = k + 1;
    converged = sweep_norm <= cfg.tol;
  }

  FitResult result;
  result.projections = std::move(h);
  result.converged = converged;
  result.iterations = iterations;
  result.final_objective = trace.objective.back();
  result.final_stationarity = stationarity(trace);
  result.trace = std::move(trace);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

double stationarity(const SolverTrace& trace) {
  if (trace.direction_norm.empty())
    return std::numeric_limits<double>::infinity();
  return trace.direction_norm.back();
}

}  // namespace stcca
