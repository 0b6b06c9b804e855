#include "stcca/ssn.hpp"

#include <cmath>

#include "stcca/errors.hpp"
#include "stcca/prox.hpp"

namespace stcca {

void SubproblemSpec::validate() const {
  if (metric == nullptr) throw ParameterError("subproblem needs a metric");
  if (h.rows() != metric->dim())
    throw DimensionError("point rows do not match the metric dimension");
  if (grad.rows() != h.rows() || grad.cols() != h.cols())
    throw DimensionError("gradient shape does not match the point");
  if (t <= 0.0) throw ParameterError("step parameter t must be > 0");
  if (lambda < 0.0) throw ParameterError("sparsity weight must be >= 0");
  if (feasibility_residual({h}, *metric) > 1e-8)
    throw ParameterError("subproblem point is not feasible");
}

Eigen::VectorXd hvec(const Eigen::MatrixXd& s) {
  const Eigen::Index r = s.rows();
  if (s.cols() != r) throw DimensionError("hvec requires a square matrix");
  const double sqrt2 = std::sqrt(2.0);
  Eigen::VectorXd v(r * (r + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = j; i < r; ++i, ++k)
      v[k] = i == j ? s(i, i) : sqrt2 * s(i, j);
  return v;
}

Eigen::MatrixXd unhvec(const Eigen::VectorXd& v, Eigen::Index r) {
  if (v.size() != r * (r + 1) / 2)
    throw DimensionError("half-vector length does not match r");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd s(r, r);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = j; i < r; ++i, ++k) {
      if (i == j) {
        s(i, i) = v[k];
      } else {
        s(i, j) = inv_sqrt2 * v[k];
        s(j, i) = s(i, j);
      }
    }
  return s;
}

Eigen::MatrixXd proximal_argument(const Eigen::MatrixXd& lam,
                                  const SubproblemSpec& spec) {
  return spec.h - spec.t * (spec.grad - 2.0 * spec.metric->matrix() * spec.h * lam);
}

Eigen::MatrixXd direction_from_multiplier(const Eigen::MatrixXd& lam,
                                          const SubproblemSpec& spec) {
  return row_shrink(proximal_argument(lam, spec), spec.t * spec.lambda) - spec.h;
}

Eigen::MatrixXd kkt_residual(const Eigen::MatrixXd& lam,
                             const SubproblemSpec& spec) {
  const Eigen::MatrixXd d = direction_from_multiplier(lam, spec);
  const Eigen::MatrixXd cross =
      d.transpose() * spec.metric->matrix() * spec.h;
  return cross + cross.transpose();
}

std::vector<Eigen::MatrixXd> jacobian_blocks(const Eigen::MatrixXd& b,
                                             double t, double lambda) {
  const double threshold = t * lambda;
  if (threshold < 0.0) throw ParameterError("t*lambda must be >= 0");
  const Eigen::Index r = b.cols();
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    if (threshold == 0.0) {
      blocks.push_back(Eigen::MatrixXd::Identity(r, r));
      continue;
    }
    const double norm = b.row(j).norm();
    if (std::abs(norm - threshold) <= 1e-14 || norm < threshold) {
      blocks.push_back(Eigen::MatrixXd::Zero(r, r));
      continue;
    }
    const Eigen::VectorXd unit = b.row(j).transpose() / norm;
    Eigen::MatrixXd block = Eigen::MatrixXd::Identity(r, r) -
                            (threshold / norm) *
                                (Eigen::MatrixXd::Identity(r, r) -
                                 unit * unit.transpose());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

namespace {

// Pairs (i, j), i >= j, in hvec order.
std::vector<std::pair<Eigen::Index, Eigen::Index>> hvec_pairs(Eigen::Index r) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(r * (r + 1) / 2);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = j; i < r; ++i) pairs.emplace_back(i, j);
  return pairs;
}

// Assembles the generalized Jacobian of Q as a matrix on the half-vectorized
// symmetric space: column k is hvec of 2t (K + K^T) with
// K = E^T J(E Delta_k), E = M H, J the row-wise Clarke blocks.
Eigen::MatrixXd assemble_jacobian(const Eigen::MatrixXd& lam,
                                  const SubproblemSpec& spec) {
  const Eigen::Index r = spec.h.cols();
  const Eigen::Index d = spec.h.rows();
  const Eigen::MatrixXd e = spec.metric->matrix() * spec.h;
  const Eigen::MatrixXd b = proximal_argument(lam, spec);
  const auto blocks = jacobian_blocks(b, spec.t, spec.lambda);
  const auto pairs = hvec_pairs(r);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Eigen::MatrixXd vbar(pairs.size(), pairs.size());
  Eigen::MatrixXd z(d, r), jz(d, r);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    // z = E * Delta_k; the basis element has at most two nonzero entries
    z.setZero();
    if (i == j) {
      z.col(i) = e.col(i);
    } else {
      z.col(j) = inv_sqrt2 * e.col(i);
      z.col(i) = inv_sqrt2 * e.col(j);
    }
    for (Eigen::Index row = 0; row < d; ++row)
      jz.row(row) = z.row(row) * blocks[row];
    const Eigen::MatrixXd cross = e.transpose() * jz;
    vbar.col(k) = hvec(2.0 * spec.t * (cross + cross.transpose()));
  }
  return vbar;
}

}  // namespace

Eigen::VectorXd newton_step(const Eigen::MatrixXd& lam,
                            const SubproblemSpec& spec, double eta) {
  if (eta <= 0.0) throw ParameterError("eta must be > 0");
  Eigen::MatrixXd vbar = assemble_jacobian(lam, spec);
  vbar = 0.5 * (vbar + vbar.transpose()).eval();
  vbar.diagonal().array() += eta;
  const Eigen::LLT<Eigen::MatrixXd> llt(vbar);
  if (llt.info() != Eigen::Success)
    throw NumericError("Newton system factorization failed");
  const Eigen::VectorXd rhs = -hvec(kkt_residual(lam, spec));
  Eigen::VectorXd step = llt.solve(rhs);
  if (!step.allFinite()) throw NumericError("Newton solve returned non-finite step");
  return step;
}

double subproblem_objective(const Eigen::MatrixXd& d,
                            const SubproblemSpec& spec) {
  return spec.grad.cwiseProduct(d).sum() +
         d.squaredNorm() / (2.0 * spec.t) +
         spec.lambda * l21_norm(spec.h + d);
}

double subproblem_tolerance(const SubproblemSpec& spec) {
  return 1e-8 * std::max(1.0, spec.h.norm());
}

SubproblemResult solve_subproblem(const SubproblemSpec& spec) {
  spec.validate();
  const Eigen::Index r = spec.h.cols();
  const double tol = subproblem_tolerance(spec);

  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(r, r);
  double res = kkt_residual(lam, spec).norm();
  int iter = 0;
  while (res > tol && iter < 50) {
    double eta = 1e-4 * std::max(1.0, res);
    bool accepted = false;
    for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
      Eigen::VectorXd direction;
      try {
        direction = newton_step(lam, spec, eta);
      } catch (const NumericError&) {
        eta *= 10.0;
        continue;
      }
      double step = 1.0;
      for (int bt = 0; bt < 20; ++bt, step *= 0.5) {
        Eigen::MatrixXd trial = lam + step * unhvec(direction, r);
        trial = 0.5 * (trial + trial.transpose()).eval();
        const double trial_res = kkt_residual(trial, spec).norm();
        if (trial_res < res) {
          lam = std::move(trial);
          res = trial_res;
          accepted = true;
          break;
        }
      }
      if (!accepted) eta *= 10.0;
    }
    ++iter;
    if (!accepted) break;  // stagnated; residual can no longer be reduced
  }

  SubproblemResult out;
  out.direction = direction_from_multiplier(lam, spec);
  out.multiplier = std::move(lam);
  out.residual = res;
  out.iterations = iter;
  out.converged = res <= tol;
  return out;
}

}  // namespace stcca
