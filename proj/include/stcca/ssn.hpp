#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stcca/manifold.hpp"

namespace stcca {

// Data of the tangent-constrained proximal subproblem at the current point:
//   min_D  <grad, D> + (1/2t) ||D||_F^2 + lambda ||H + D||_{2,1}
//   s.t.   D^T M H + H^T M D = 0.
struct SubproblemSpec {
  Eigen::MatrixXd h;     // current feasible point, d x r
  Eigen::MatrixXd grad;  // Euclidean gradient of the smooth term at h
  const ViewMetric* metric = nullptr;
  double t = 1e-2;
  double lambda = 0.0;

  void validate() const;
};

struct SubproblemResult {
  Eigen::MatrixXd direction;   // D
  Eigen::MatrixXd multiplier;  // Lambda, symmetric r x r
  double residual = 0.0;       // ||Q(Lambda)||_F at return
  int iterations = 0;
  bool converged = false;
};

// Half-vectorization of symmetric matrices with off-diagonals scaled by
// sqrt(2), making the map a Frobenius isometry. Lower triangle, column by
// column.
Eigen::VectorXd hvec(const Eigen::MatrixXd& s);
Eigen::MatrixXd unhvec(const Eigen::VectorXd& v, Eigen::Index r);

// B(Lambda) = H - t (grad - 2 M H Lambda)
Eigen::MatrixXd proximal_argument(const Eigen::MatrixXd& lam,
                                  const SubproblemSpec& spec);

// D(Lambda) = shrink(B(Lambda), t*lambda) - H
Eigen::MatrixXd direction_from_multiplier(const Eigen::MatrixXd& lam,
                                          const SubproblemSpec& spec);

// Q(Lambda) = D^T M H + H^T M D with D = D(Lambda); symmetric, and zero
// exactly when D is tangent at H.
Eigen::MatrixXd kkt_residual(const Eigen::MatrixXd& lam,
                             const SubproblemSpec& spec);

// Clarke-Jacobian blocks of the row-wise shrinkage, one r x r block per row
// of B. The zero matrix is chosen on the shrinkage boundary.
std::vector<Eigen::MatrixXd> jacobian_blocks(const Eigen::MatrixXd& b,
                                             double t, double lambda);

// Regularized semismooth Newton direction: solves (Vbar + eta I) d = -hvec(Q)
// where Vbar is the generalized Jacobian of Q restricted to symmetric
// multipliers, assembled column by column. Throws NumericError when the
// solve breaks down (caller raises eta and retries).
Eigen::VectorXd newton_step(const Eigen::MatrixXd& lam,
                            const SubproblemSpec& spec, double eta);

// Objective of the subproblem at D (used by descent tests).
double subproblem_objective(const Eigen::MatrixXd& d,
                            const SubproblemSpec& spec);

// Inner stopping tolerance: 1e-8 * max(1, ||H||_F).
double subproblem_tolerance(const SubproblemSpec& spec);

// Damped semismooth Newton loop on Q(Lambda) = 0 from Lambda = 0. On
// non-convergence within 50 iterations the best iterate is returned with
// converged = false.
SubproblemResult solve_subproblem(const SubproblemSpec& spec);

}  // namespace stcca
