#pragma once

#include <Eigen/Dense>

namespace stcca {

// Sum of Euclidean norms of the rows.
double l21_norm(const Eigen::MatrixXd& x);

// Row-wise shrinkage with threshold beta >= 0; beta == 0 is the identity.
// Internal form used by the subproblem solver, where the threshold t*lambda
// may legitimately be zero.
Eigen::MatrixXd row_shrink(const Eigen::MatrixXd& x, double beta);

// Proximal operator of beta * ||.||_{2,1}: each row is rescaled to
// max(0, ||row|| - beta); zero rows stay zero. Requires beta > 0.
Eigen::MatrixXd prox_l21(const Eigen::MatrixXd& x, double beta);

// Verifies the first-order optimality of y for the prox problem
// min_y ||y||_{2,1} + (1/(2 beta)) ||y - x||_F^2: nonzero rows must satisfy
// y_i + beta y_i/||y_i|| = x_i, zero rows must have ||x_i|| <= beta.
bool prox_optimality_check(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                           double beta, double tol = 1e-8);

}  // namespace stcca
