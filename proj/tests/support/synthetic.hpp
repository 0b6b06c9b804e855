#pragma once

#include <cstdint>
#include <vector>

#include "stcca/eval.hpp"

namespace stcca::testsupport {

// Multi-view Gaussian blobs: class-dependent latent centers shared across
// views, per-view linear maps, plus view-specific high-variance distractor
// subspaces that are uncorrelated across views.
struct BlobSpec {
  int views = 3;
  int classes = 3;
  int per_class = 100;
  int dim = 10;
  int latent_dim = 4;
  double separation = 3.5;
  double latent_noise = 0.8;
  double view_noise = 0.5;
  int distractor_dims = 4;
  double distractor_scale = 3.5;
};

MultiViewDataset make_blobs(const BlobSpec& spec, std::uint64_t seed);

// Classes on adjacent circular arcs in a 2-D latent space, mapped to views
// like make_blobs. Clusters are elongated curves, so local-geometry
// regularization is informative.
struct ArcSpec {
  int views = 3;
  int classes = 3;
  int per_class = 60;
  int dim = 10;
  double radius = 5.0;
  double radial_noise = 0.35;
  double view_noise = 0.5;
  int distractor_dims = 3;
  double distractor_scale = 2.0;
};

MultiViewDataset make_arcs(const ArcSpec& spec, std::uint64_t seed);

// Plain random Gaussian views sharing a sample count, for solver-level tests.
std::vector<Eigen::MatrixXd> random_views(const std::vector<Eigen::Index>& dims,
                                          Eigen::Index samples,
                                          std::uint64_t seed);

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed);

// The fixed 3-view instance (d_p = 6, N = 40) used by the convergence and
// descent tests.
MultiViewDataset convergence_instance();

// Config matching that instance: r = 2, lambda = 1e-3, order-2 graph.
ProblemConfig convergence_config();

}  // namespace stcca::testsupport
