#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace stcca {

// Symmetric nonnegative affinity matrix with zero diagonal.
struct AffinityGraph {
  Eigen::MatrixXd weights;

  Eigen::Index size() const { return weights.rows(); }
};

enum class GraphMethod { Adaptive, Gaussian, Knn, Cosine };

GraphMethod graph_method_from_string(const std::string& name);
std::string to_string(GraphMethod method);

struct GraphParams {
  int k = 5;           // neighbor count for all masked methods
  double sigma = 1.0;  // gaussian bandwidth
};

// Order weights q_1..q_l of the multi-order combination, summing to 1.
struct MultiOrderConfig {
  int max_order = 1;
  std::vector<double> order_weights{1.0};

  // q_i proportional to decay^(i-1), normalized.
  static MultiOrderConfig geometric(int max_order, double decay = 0.5);
  void validate() const;
};

struct MultiOrderLaplacian {
  Eigen::MatrixXd w_multi;    // W^l = sum_i q_i W^i
  Eigen::MatrixXd laplacian;  // L = S - W^l, S = diag of row sums
};

// Closed-form adaptive neighbor weights: each sample distributes weight over
// its k nearest neighbors proportionally to (d_(k+1) - d_ij), before
// symmetrization. Exposed for the support-count tests.
Eigen::MatrixXd adaptive_neighbor_weights(const Eigen::MatrixXd& x, int k);

AffinityGraph adaptive_neighbor_graph(const Eigen::MatrixXd& x, int k);

AffinityGraph baseline_graph(const Eigen::MatrixXd& x, GraphMethod method,
                             const GraphParams& params);

// Dispatches to adaptive_neighbor_graph or baseline_graph.
AffinityGraph build_graph(const Eigen::MatrixXd& x, GraphMethod method,
                          const GraphParams& params);

// D^{-1/2} W D^{-1/2}; zero-degree rows are left zero.
Eigen::MatrixXd sym_normalize(const Eigen::MatrixXd& w);

// Order-h graph: W itself for h = 1, powers of the normalized W for h > 1.
Eigen::MatrixXd high_order(const AffinityGraph& w, int order);

MultiOrderLaplacian multi_order(const AffinityGraph& w,
                                const MultiOrderConfig& cfg);

// X L^l X^T (d x d) computed by chained matrix-vector blocks, never forming
// the N x N multi-order matrix. Matches multi_order exactly.
Eigen::MatrixXd laplacian_quadratic(const Eigen::MatrixXd& x,
                                    const AffinityGraph& w,
                                    const MultiOrderConfig& cfg);

}  // namespace stcca
