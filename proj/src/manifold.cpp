#include "stcca/manifold.hpp"

#include <cmath>

#include "stcca/errors.hpp"
#include "stcca/rng.hpp"

namespace stcca {

ViewMetric ViewMetric::from_data(const Eigen::MatrixXd& x) {
  if (x.rows() < 1 || x.cols() < 1)
    throw DataError("metric needs a nonempty data matrix");
  if (!x.allFinite()) throw DataError("metric data contains non-finite values");
  Eigen::MatrixXd m = x * x.transpose();
  m = 0.5 * (m + m.transpose()).eval();
  const double trace = m.trace();
  const double eps =
      trace > 0.0 ? 1e-8 * trace / static_cast<double>(m.rows()) : 1e-8;
  m.diagonal().array() += eps;
  ViewMetric out;
  out.m_ = std::move(m);
  out.epsilon_ = eps;
  out.llt_.compute(out.m_);
  if (out.llt_.info() != Eigen::Success)
    throw NumericError("metric Cholesky factorization failed");
  return out;
}

ViewMetric ViewMetric::from_matrix(Eigen::MatrixXd m, double epsilon) {
  if (m.rows() != m.cols()) throw DimensionError("metric must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw DataError("metric must be symmetric");
  ViewMetric out;
  out.m_ = std::move(m);
  out.epsilon_ = epsilon;
  out.llt_.compute(out.m_);
  if (out.llt_.info() != Eigen::Success)
    throw NumericError("metric is not positive definite");
  return out;
}

namespace {

// One Cholesky-based orthonormalization pass; returns false on breakdown.
bool orthonormalize_pass(Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd gram = a.transpose() * m * a;
  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::MatrixXd lower = llt.matrixL();
  // H = A R^{-1}, R = L^T upper with positive diagonal
  a = lower.triangularView<Eigen::Lower>()
          .solve(a.transpose())
          .transpose();
  return a.allFinite();
}

}  // namespace

StiefelPoint m_orthonormalize(const Eigen::MatrixXd& a,
                              const ViewMetric& metric) {
  if (a.rows() != metric.dim())
    throw DimensionError("matrix rows do not match the metric dimension");
  if (a.cols() < 1 || a.cols() > a.rows())
    throw DimensionError("need 1 <= r <= d columns");
  StiefelPoint point{a};
  if (!orthonormalize_pass(point.h, metric.matrix()))
    throw RankError("input is rank-deficient in the M metric");
  // a second pass squares the residual when the first Gram was ill-conditioned
  if (feasibility_residual(point, metric) > 1e-12) {
    if (!orthonormalize_pass(point.h, metric.matrix()))
      throw RankError("input is rank-deficient in the M metric");
  }
  if (feasibility_residual(point, metric) > 1e-10)
    throw RankError("orthonormalization failed to reach feasibility");
  return point;
}

StiefelPoint retract(const StiefelPoint& h, const Eigen::MatrixXd& step,
                     const ViewMetric& metric) {
  if (step.rows() != h.h.rows() || step.cols() != h.h.cols())
    throw DimensionError("retraction step shape does not match the point");
  return m_orthonormalize(h.h + step, metric);
}

double feasibility_residual(const StiefelPoint& h, const ViewMetric& metric) {
  const Eigen::Index r = h.h.cols();
  const Eigen::MatrixXd gram = h.h.transpose() * metric.matrix() * h.h;
  return (gram - Eigen::MatrixXd::Identity(r, r)).norm();
}

double tangent_violation(const StiefelPoint& h, const Eigen::MatrixXd& d,
                         const ViewMetric& metric) {
  const Eigen::MatrixXd cross = d.transpose() * metric.matrix() * h.h;
  return (cross + cross.transpose()).norm();
}

InitStrategy init_strategy_from_string(const std::string& name) {
  if (name == "random") return InitStrategy::Random;
  if (name == "svd") return InitStrategy::Svd;
  if (name == "identity") return InitStrategy::Identity;
  if (name == "orthogonal") return InitStrategy::Orthogonal;
  throw ParameterError("unknown init strategy: " + name);
}

std::string to_string(InitStrategy strategy) {
  switch (strategy) {
    case InitStrategy::Random: return "random";
    case InitStrategy::Svd: return "svd";
    case InitStrategy::Identity: return "identity";
    case InitStrategy::Orthogonal: return "orthogonal";
  }
  return "?";
}

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.normal();
  return a;
}

}  // namespace

StiefelPoint random_point(Eigen::Index dim, Eigen::Index rank,
                          const ViewMetric& metric, std::uint64_t seed,
                          InitStrategy strategy) {
  if (rank < 1 || rank > dim)
    throw ParameterError("need 1 <= r <= d for a Stiefel point");
  if (metric.dim() != dim)
    throw DimensionError("metric dimension does not match d");

  switch (strategy) {
    case InitStrategy::Identity:
      return m_orthonormalize(
          Eigen::MatrixXd::Identity(dim, dim).leftCols(rank), metric);
    case InitStrategy::Svd: {
      // leading eigenvectors of M = leading left singular vectors of X
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(metric.matrix());
      if (eig.info() != Eigen::Success)
        throw NumericError("eigendecomposition of the metric failed");
      Eigen::MatrixXd a(dim, rank);
      for (Eigen::Index j = 0; j < rank; ++j)
        a.col(j) = eig.eigenvectors().col(dim - 1 - j);
      return m_orthonormalize(a, metric);
    }
    case InitStrategy::Orthogonal: {
      Rng rng(seed);
      Eigen::MatrixXd a = gaussian_matrix(dim, rank, rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
      // fix signs so the factorization is unique
      const Eigen::MatrixXd r_factor =
          qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
      for (Eigen::Index j = 0; j < rank; ++j)
        if (r_factor(j, j) < 0.0) q.col(j) = -q.col(j);
      return m_orthonormalize(q, metric);
    }
    case InitStrategy::Random:
    default: {
      Rng rng(seed);
      for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd a = gaussian_matrix(dim, rank, rng);
        try {
          return m_orthonormalize(a, metric);
        } catch (const RankError&) {
          // resample; a Gaussian draw is rank-deficient with probability 0
        }
      }
      throw RankError("could not draw a full-rank random point");
    }
  }
}

}  // namespace stcca
