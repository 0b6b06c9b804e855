#pragma once

#include <Eigen/Dense>
#include <vector>

namespace stcca {

// Dense multi-way array with 64-bit float entries. Storage is linearized
// with the first index fastest (column-major generalization), which makes
// the mode-p unfolding below follow the reverse-mode Kronecker column
// ordering: modes q < p vary fastest, then modes q > p.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<Eigen::Index> shape);
  Tensor(std::vector<Eigen::Index> shape, Eigen::VectorXd data);

  const std::vector<Eigen::Index>& shape() const { return shape_; }
  int order() const { return static_cast<int>(shape_.size()); }
  Eigen::Index size() const { return data_.size(); }
  const Eigen::VectorXd& data() const { return data_; }
  Eigen::VectorXd& data() { return data_; }

  double at(const std::vector<Eigen::Index>& index) const;
  double& at(const std::vector<Eigen::Index>& index);

  // Order-2 conversions.
  static Tensor from_matrix(const Eigen::MatrixXd& m);
  Eigen::MatrixXd as_matrix() const;

 private:
  std::vector<Eigen::Index> shape_;
  Eigen::VectorXd data_;
};

// Sum over all index tuples of elementwise products. Shapes must agree.
double inner(const Tensor& a, const Tensor& b);

double frobenius_norm(const Tensor& t);

// m-way outer product: entry (i_1,...,i_m) = prod_p vectors[p][i_p].
// Requires m >= 2.
Tensor outer_product(const std::vector<Eigen::VectorXd>& vectors);

// Mode product along `mode` (0-based). `mat` is r x I_mode; the result
// replaces extent I_mode by r.
Tensor mode_product(const Tensor& t, const Eigen::MatrixXd& mat, int mode);

// Mode-p unfolding, I_p x (prod of the other extents).
Eigen::MatrixXd unfold(const Tensor& t, int mode);

// Inverse of unfold: refold(unfold(t, p), t.shape(), p) == t.
Tensor refold(const Eigen::MatrixXd& m, std::vector<Eigen::Index> shape,
              int mode);

// Multi-view covariance tensor: (1/N) sum_n x_{1n} o ... o x_{mn} for views
// X_p of shape d_p x N sharing the sample count N.
Tensor covariance_tensor(const std::vector<Eigen::MatrixXd>& views);

// The per-view canonical projection matrices H_p (d_p x r each).
using ProjectionSet = std::vector<Eigen::MatrixXd>;

// Contracts every mode except `skip_view` with the corresponding H_q^T,
// ascending mode order. Result keeps extent d_p at mode skip_view and has
// extent r elsewhere.
Tensor contract_all_but(const Tensor& c, const ProjectionSet& projections,
                        int skip_view);

}  // namespace stcca
