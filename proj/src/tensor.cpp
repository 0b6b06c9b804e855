#include "stcca/tensor.hpp"

#include <cmath>
#include <string>

#include "stcca/errors.hpp"

namespace stcca {

namespace {

Eigen::Index checked_count(const std::vector<Eigen::Index>& shape) {
  if (shape.empty()) throw DimensionError("tensor needs at least one mode");
  Eigen::Index n = 1;
  for (Eigen::Index e : shape) {
    if (e < 1) throw DimensionError("tensor extents must be >= 1");
    n *= e;
  }
  return n;
}

void check_mode(const Tensor& t, int mode) {
  if (mode < 0 || mode >= t.order())
    throw DimensionError("mode " + std::to_string(mode) +
                         " out of range for order " + std::to_string(t.order()));
}

// stride of `mode` = product of extents before it (first index fastest)
Eigen::Index stride_of(const std::vector<Eigen::Index>& shape, int mode) {
  Eigen::Index s = 1;
  for (int q = 0; q < mode; ++q) s *= shape[q];
  return s;
}

}  // namespace

Tensor::Tensor(std::vector<Eigen::Index> shape) : shape_(std::move(shape)) {
  data_ = Eigen::VectorXd::Zero(checked_count(shape_));
}

Tensor::Tensor(std::vector<Eigen::Index> shape, Eigen::VectorXd data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_count(shape_) != data_.size())
    throw DimensionError("tensor data length does not match extents");
}

double Tensor::at(const std::vector<Eigen::Index>& index) const {
  return const_cast<Tensor*>(this)->at(index);
}

double& Tensor::at(const std::vector<Eigen::Index>& index) {
  if (static_cast<int>(index.size()) != order())
    throw DimensionError("index arity does not match tensor order");
  Eigen::Index lin = 0;
  Eigen::Index stride = 1;
  for (int q = 0; q < order(); ++q) {
    if (index[q] < 0 || index[q] >= shape_[q])
      throw DimensionError("tensor index out of range");
    lin += index[q] * stride;
    stride *= shape_[q];
  }
  return data_[lin];
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m) {
  Eigen::VectorXd data = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
  return Tensor({m.rows(), m.cols()}, std::move(data));
}

Eigen::MatrixXd Tensor::as_matrix() const {
  if (order() != 2) throw DimensionError("as_matrix requires an order-2 tensor");
  return Eigen::Map<const Eigen::MatrixXd>(data_.data(), shape_[0], shape_[1]);
}

double inner(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw DimensionError("inner product requires identical shapes");
  return a.data().dot(b.data());
}

double frobenius_norm(const Tensor& t) { return t.data().norm(); }

namespace {

// Accumulates coeff * (v_0 o ... o v_{m-1}) into data, recursing from the
// slowest mode down to a vectorized axpy on mode 0.
void accumulate_outer(double* data, const std::vector<const Eigen::VectorXd*>& vs,
                      int mode, Eigen::Index offset, Eigen::Index stride,
                      double coeff) {
  const Eigen::VectorXd& v = *vs[mode];
  if (mode == 0) {
    Eigen::Map<Eigen::VectorXd>(data + offset, v.size()) += coeff * v;
    return;
  }
  const Eigen::Index inner_stride = stride / v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    accumulate_outer(data, vs, mode - 1, offset + i * inner_stride,
                     inner_stride, coeff * v[i]);
}

}  // namespace

Tensor outer_product(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.size() < 2)
    throw DimensionError("outer_product requires at least two vectors");
  std::vector<Eigen::Index> shape;
  std::vector<const Eigen::VectorXd*> vs;
  for (const auto& v : vectors) {
    if (v.size() == 0) throw DimensionError("outer_product vector is empty");
    shape.push_back(v.size());
    vs.push_back(&v);
  }
  Tensor out(shape);
  accumulate_outer(out.data().data(), vs, out.order() - 1, 0, out.size(), 1.0);
  return out;
}

Tensor mode_product(const Tensor& t, const Eigen::MatrixXd& mat, int mode) {
  check_mode(t, mode);
  const Eigen::Index extent = t.shape()[mode];
  if (mat.cols() != extent)
    throw DimensionError("mode_product matrix has " + std::to_string(mat.cols()) +
                         " columns, mode extent is " + std::to_string(extent));
  std::vector<Eigen::Index> out_shape = t.shape();
  out_shape[mode] = mat.rows();
  Tensor out(std::move(out_shape));

  // Memory splits into `outer` slabs of (inner x extent); each slab is a
  // column-major matrix with the fused fast modes as rows.
  const Eigen::Index inner = stride_of(t.shape(), mode);
  const Eigen::Index outer = t.size() / (inner * extent);
  for (Eigen::Index b = 0; b < outer; ++b) {
    Eigen::Map<const Eigen::MatrixXd> slab(t.data().data() + b * inner * extent,
                                           inner, extent);
    Eigen::Map<Eigen::MatrixXd> dst(out.data().data() + b * inner * mat.rows(),
                                    inner, mat.rows());
    dst.noalias() = slab * mat.transpose();
  }
  return out;
}

Eigen::MatrixXd unfold(const Tensor& t, int mode) {
  check_mode(t, mode);
  const Eigen::Index rows = t.shape()[mode];
  const Eigen::Index cols = t.size() / rows;
  const Eigen::Index inner = stride_of(t.shape(), mode);
  const Eigen::Index outer = t.size() / (inner * rows);
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index b = 0; b < outer; ++b) {
    Eigen::Map<const Eigen::MatrixXd> slab(t.data().data() + b * inner * rows,
                                           inner, rows);
    out.block(0, b * inner, rows, inner) = slab.transpose();
  }
  return out;
}

Tensor refold(const Eigen::MatrixXd& m, std::vector<Eigen::Index> shape,
              int mode) {
  Tensor out(std::move(shape));
  check_mode(out, mode);
  const Eigen::Index rows = out.shape()[mode];
  if (m.rows() != rows || m.cols() != out.size() / rows)
    throw DimensionError("refold matrix shape does not match target extents");
  const Eigen::Index inner = stride_of(out.shape(), mode);
  const Eigen::Index outer = out.size() / (inner * rows);
  for (Eigen::Index b = 0; b < outer; ++b) {
    Eigen::Map<Eigen::MatrixXd> slab(out.data().data() + b * inner * rows,
                                     inner, rows);
    slab = m.block(0, b * inner, rows, inner).transpose();
  }
  return out;
}

Tensor covariance_tensor(const std::vector<Eigen::MatrixXd>& views) {
  if (views.empty()) throw DataError("covariance_tensor needs at least one view");
  const Eigen::Index samples = views.front().cols();
  if (samples < 1) throw DataError("covariance_tensor needs at least one sample");
  std::vector<Eigen::Index> shape;
  for (const auto& x : views) {
    if (x.cols() != samples)
      throw DataError("views disagree on the sample count");
    shape.push_back(x.rows());
  }
  Tensor out(shape);
  std::vector<Eigen::VectorXd> cols(views.size());
  std::vector<const Eigen::VectorXd*> vs(views.size());
  for (std::size_t p = 0; p < views.size(); ++p) vs[p] = &cols[p];
  for (Eigen::Index n = 0; n < samples; ++n) {
    for (std::size_t p = 0; p < views.size(); ++p) cols[p] = views[p].col(n);
    accumulate_outer(out.data().data(), vs, out.order() - 1, 0, out.size(), 1.0);
  }
  out.data() /= static_cast<double>(samples);
  return out;
}

Tensor contract_all_but(const Tensor& c, const ProjectionSet& projections,
                        int skip_view) {
  if (static_cast<int>(projections.size()) != c.order())
    throw DimensionError("projection count does not match tensor order");
  check_mode(c, skip_view);
  const Eigen::Index r = projections.front().cols();
  for (int q = 0; q < c.order(); ++q) {
    if (projections[q].cols() != r)
      throw DimensionError("projections disagree on the embedding dimension");
    if (projections[q].rows() != c.shape()[q])
      throw DimensionError("projection rows do not match tensor extent at mode " +
                           std::to_string(q));
  }
  Tensor out = c;
  for (int q = 0; q < c.order(); ++q) {
    if (q == skip_view) continue;
    out = mode_product(out, projections[q].transpose(), q);
  }
  return out;
}

}  // namespace stcca
