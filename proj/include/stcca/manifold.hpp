#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace stcca {

// SPD metric M = X X^T + eps*I defining the feasible set
// {H : H^T M H = I_r}. The ridge keeps M invertible when d > N or features
// are collinear.
class ViewMetric {
 public:
  static ViewMetric from_data(const Eigen::MatrixXd& x);
  // For tests and toy problems; validates symmetry and positive definiteness.
  static ViewMetric from_matrix(Eigen::MatrixXd m, double epsilon = 0.0);

  const Eigen::MatrixXd& matrix() const { return m_; }
  double epsilon() const { return epsilon_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::LLT<Eigen::MatrixXd>& cholesky() const { return llt_; }

 private:
  Eigen::MatrixXd m_;
  double epsilon_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// A d x r matrix satisfying ||H^T M H - I||_F <= 1e-8.
struct StiefelPoint {
  Eigen::MatrixXd h;
};

enum class InitStrategy { Random, Svd, Identity, Orthogonal };

InitStrategy init_strategy_from_string(const std::string& name);
std::string to_string(InitStrategy strategy);

// H = A R^{-1} with R the upper Cholesky factor of A^T M A (positive
// diagonal, so the output is deterministic). Throws RankError when A is
// rank-deficient in the M metric.
StiefelPoint m_orthonormalize(const Eigen::MatrixXd& a,
                              const ViewMetric& metric);

// M-metric analog of the QR retraction: orthonormalize H + step.
StiefelPoint retract(const StiefelPoint& h, const Eigen::MatrixXd& step,
                     const ViewMetric& metric);

// ||H^T M H - I||_F
double feasibility_residual(const StiefelPoint& h, const ViewMetric& metric);

// ||D^T M H + H^T M D||_F, zero iff D is tangent at H.
double tangent_violation(const StiefelPoint& h, const Eigen::MatrixXd& d,
                         const ViewMetric& metric);

StiefelPoint random_point(Eigen::Index dim, Eigen::Index rank,
                          const ViewMetric& metric, std::uint64_t seed,
                          InitStrategy strategy = InitStrategy::Random);

}  // namespace stcca
