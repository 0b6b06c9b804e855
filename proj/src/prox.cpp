#include "stcca/prox.hpp"

#include "stcca/errors.hpp"

namespace stcca {

double l21_norm(const Eigen::MatrixXd& x) {
  return x.rowwise().norm().sum();
}

Eigen::MatrixXd row_shrink(const Eigen::MatrixXd& x, double beta) {
  if (beta < 0.0) throw ParameterError("shrinkage threshold must be >= 0");
  if (beta == 0.0) return x;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).norm();
    if (norm > beta) y.row(i) = x.row(i) * (1.0 - beta / norm);
  }
  return y;
}

Eigen::MatrixXd prox_l21(const Eigen::MatrixXd& x, double beta) {
  if (beta <= 0.0) throw ParameterError("prox_l21 requires beta > 0");
  return row_shrink(x, beta);
}

bool prox_optimality_check(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                           double beta, double tol) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("prox_optimality_check shapes differ");
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double ynorm = y.row(i).norm();
    if (ynorm > 0.0) {
      const Eigen::RowVectorXd stationarity =
          y.row(i) + (beta / ynorm) * y.row(i) - x.row(i);
      if (stationarity.norm() > tol) return false;
    } else if (x.row(i).norm() > beta + tol) {
      return false;
    }
  }
  return true;
}

}  // namespace stcca
