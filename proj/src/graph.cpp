#include "stcca/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stcca/errors.hpp"

namespace stcca {

GraphMethod graph_method_from_string(const std::string& name) {
  if (name == "adaptive") return GraphMethod::Adaptive;
  if (name == "gaussian") return GraphMethod::Gaussian;
  if (name == "knn") return GraphMethod::Knn;
  if (name == "cosine") return GraphMethod::Cosine;
  throw ParameterError("unknown graph method: " + name);
}

std::string to_string(GraphMethod method) {
  switch (method) {
    case GraphMethod::Adaptive: return "adaptive";
    case GraphMethod::Gaussian: return "gaussian";
    case GraphMethod::Knn: return "knn";
    case GraphMethod::Cosine: return "cosine";
  }
  return "?";
}

MultiOrderConfig MultiOrderConfig::geometric(int max_order, double decay) {
  if (max_order < 1) throw ParameterError("max_order must be >= 1");
  if (decay <= 0.0 || decay > 1.0)
    throw ParameterError("order decay must be in (0, 1]");
  MultiOrderConfig cfg;
  cfg.max_order = max_order;
  cfg.order_weights.assign(max_order, 0.0);
  double w = 1.0, total = 0.0;
  for (int i = 0; i < max_order; ++i, w *= decay) {
    cfg.order_weights[i] = w;
    total += w;
  }
  for (double& q : cfg.order_weights) q /= total;
  return cfg;
}

void MultiOrderConfig::validate() const {
  if (max_order < 1) throw ConfigError("max_order must be >= 1");
  if (static_cast<int>(order_weights.size()) != max_order)
    throw ConfigError("order_weights length must equal max_order");
  double total = 0.0;
  for (double q : order_weights) {
    if (q < 0.0 || q > 1.0)
      throw ConfigError("order weights must lie in [0, 1]");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("order weights must sum to 1");
}

namespace {

// Pairwise squared Euclidean distances between columns, clamped nonnegative.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::VectorXd sq = x.colwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, x.cols()) +
                       sq.transpose().replicate(x.cols(), 1) -
                       2.0 * x.transpose() * x;
  d2 = d2.cwiseMax(0.0);
  d2.diagonal().setZero();
  return d2;
}

void check_neighbor_count(int k, Eigen::Index samples) {
  if (k < 1 || k > samples - 1)
    throw ParameterError("neighbor count k must satisfy 1 <= k <= N-1");
}

// Indices of the k smallest scores among j != i, ties broken by index.
std::vector<Eigen::Index> k_smallest(const Eigen::VectorXd& scores,
                                     Eigen::Index self, int k) {
  std::vector<Eigen::Index> idx;
  idx.reserve(scores.size() - 1);
  for (Eigen::Index j = 0; j < scores.size(); ++j)
    if (j != self) idx.push_back(j);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      if (scores[a] != scores[b]) return scores[a] < scores[b];
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

Eigen::MatrixXd symmetrized(Eigen::MatrixXd w) {
  w = 0.5 * (w + w.transpose()).eval();
  w.diagonal().setZero();
  return w;
}

}  // namespace

Eigen::MatrixXd adaptive_neighbor_weights(const Eigen::MatrixXd& x, int k) {
  const Eigen::Index n = x.cols();
  check_neighbor_count(k, n);
  const Eigen::MatrixXd d2 = squared_distances(x);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // one extra neighbor gives the cut-off distance d_(k+1)
    const bool has_cutoff = k < n - 1;
    const auto nearest = k_smallest(d2.row(i), i, has_cutoff ? k + 1 : k);
    double denom = 0.0;
    double cutoff = 0.0;
    if (has_cutoff) {
      cutoff = d2(i, nearest[k]);
      double sum_k = 0.0;
      for (int h = 0; h < k; ++h) sum_k += d2(i, nearest[h]);
      denom = k * cutoff - sum_k;
    }
    if (!has_cutoff || denom <= 1e-12 * std::max(1.0, cutoff)) {
      // all candidate distances coincide (or no cut-off exists): uniform
      for (int h = 0; h < k; ++h) w(i, nearest[h]) = 1.0 / k;
    } else {
      for (int h = 0; h < k; ++h)
        w(i, nearest[h]) = std::max(0.0, (cutoff - d2(i, nearest[h])) / denom);
    }
  }
  return w;
}

AffinityGraph adaptive_neighbor_graph(const Eigen::MatrixXd& x, int k) {
  return AffinityGraph{symmetrized(adaptive_neighbor_weights(x, k))};
}

AffinityGraph baseline_graph(const Eigen::MatrixXd& x, GraphMethod method,
                             const GraphParams& params) {
  const Eigen::Index n = x.cols();
  check_neighbor_count(params.k, n);
  const int k = params.k;

  if (method == GraphMethod::Gaussian) {
    if (params.sigma <= 0.0)
      throw ParameterError("gaussian graph requires sigma > 0");
    const Eigen::MatrixXd d2 = squared_distances(x);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    const double scale = 1.0 / (2.0 * params.sigma * params.sigma);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j : k_smallest(d2.row(i), i, k))
        w(i, j) = std::exp(-d2(i, j) * scale);
    return AffinityGraph{symmetrized(std::move(w))};
  }

  if (method == GraphMethod::Knn) {
    const Eigen::MatrixXd d2 = squared_distances(x);
    Eigen::MatrixXd onesided = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j : k_smallest(d2.row(i), i, k)) onesided(i, j) = 1.0;
    // mutual kNN keeps the graph binary and symmetric
    Eigen::MatrixXd w = onesided.cwiseProduct(onesided.transpose());
    w.diagonal().setZero();
    return AffinityGraph{std::move(w)};
  }

  if (method == GraphMethod::Cosine) {
    Eigen::MatrixXd sim = x.transpose() * x;
    Eigen::VectorXd norms = x.colwise().norm();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double scale = norms[i] * norms[j];
        sim(i, j) = scale > 0.0 ? std::max(0.0, sim(i, j) / scale) : 0.0;
      }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      // neighbors ranked by similarity, largest first
      const auto nearest = k_smallest(-sim.row(i), i, k);
      for (Eigen::Index j : nearest) w(i, j) = sim(i, j);
    }
    return AffinityGraph{symmetrized(std::move(w))};
  }

  throw ParameterError("baseline_graph does not build adaptive graphs");
}

AffinityGraph build_graph(const Eigen::MatrixXd& x, GraphMethod method,
                          const GraphParams& params) {
  if (method == GraphMethod::Adaptive)
    return adaptive_neighbor_graph(x, params.k);
  return baseline_graph(x, method, params);
}

Eigen::MatrixXd sym_normalize(const Eigen::MatrixXd& w) {
  const Eigen::VectorXd degree = w.rowwise().sum();
  Eigen::VectorXd inv_sqrt(degree.size());
  for (Eigen::Index i = 0; i < degree.size(); ++i)
    inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
  return inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
}

Eigen::MatrixXd high_order(const AffinityGraph& w, int order) {
  if (order < 1) throw ParameterError("graph order must be >= 1");
  if (order == 1) return w.weights;
  const Eigen::MatrixXd normalized = sym_normalize(w.weights);
  Eigen::MatrixXd power = normalized;
  for (int h = 2; h <= order; ++h) power = (power * normalized).eval();
  return 0.5 * (power + power.transpose()).eval();
}

MultiOrderLaplacian multi_order(const AffinityGraph& w,
                                const MultiOrderConfig& cfg) {
  cfg.validate();
  Eigen::MatrixXd combined = cfg.order_weights[0] * w.weights;
  if (cfg.max_order > 1) {
    const Eigen::MatrixXd normalized = sym_normalize(w.weights);
    Eigen::MatrixXd power = normalized;
    for (int h = 2; h <= cfg.max_order; ++h) {
      power = (power * normalized).eval();
      combined += cfg.order_weights[h - 1] * power;
    }
  }
  combined = 0.5 * (combined + combined.transpose()).eval();
  MultiOrderLaplacian out;
  out.laplacian = Eigen::MatrixXd(combined.rowwise().sum().asDiagonal()) - combined;
  out.w_multi = std::move(combined);
  return out;
}

Eigen::MatrixXd laplacian_quadratic(const Eigen::MatrixXd& x,
                                    const AffinityGraph& w,
                                    const MultiOrderConfig& cfg) {
  cfg.validate();
  if (x.cols() != w.size())
    throw DimensionError("graph size does not match the sample count");
  const Eigen::MatrixXd y = x.transpose();  // N x d
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(w.size());

  Eigen::MatrixXd wy = cfg.order_weights[0] * (w.weights * y);
  Eigen::VectorXd degree = cfg.order_weights[0] * (w.weights * ones);
  if (cfg.max_order > 1) {
    const Eigen::MatrixXd normalized = sym_normalize(w.weights);
    Eigen::MatrixXd chain_y = normalized * y;
    Eigen::VectorXd chain_1 = normalized * ones;
    for (int h = 2; h <= cfg.max_order; ++h) {
      chain_y = (normalized * chain_y).eval();
      chain_1 = (normalized * chain_1).eval();
      wy += cfg.order_weights[h - 1] * chain_y;
      degree += cfg.order_weights[h - 1] * chain_1;
    }
  }
  Eigen::MatrixXd quad = x * (degree.asDiagonal() * y - wy);
  return 0.5 * (quad + quad.transpose()).eval();
}

}  // namespace stcca
