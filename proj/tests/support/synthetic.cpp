#include "synthetic.hpp"

#include <cmath>
#include <numbers>

#include "stcca/rng.hpp"

namespace stcca::testsupport {

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

MultiViewDataset views_from_latent(const Eigen::MatrixXd& latent,
                                   const std::vector<int>& labels, int views,
                                   int dim, double view_noise,
                                   int distractor_dims, double distractor_scale,
                                   Rng& rng) {
  const Eigen::Index latent_dim = latent.rows();
  const Eigen::Index n = latent.cols();
  MultiViewDataset data;
  data.labels = labels;
  for (int p = 0; p < views; ++p) {
    const Eigen::MatrixXd map =
        gaussian(dim, latent_dim, rng) / std::sqrt(double(latent_dim));
    Eigen::MatrixXd x = map * latent + view_noise * gaussian(dim, n, rng);
    if (distractor_dims > 0) {
      const Eigen::MatrixXd basis =
          gaussian(dim, distractor_dims, rng) / std::sqrt(double(distractor_dims));
      x += basis * (distractor_scale * gaussian(distractor_dims, n, rng));
    }
    data.views.push_back(std::move(x));
  }
  return data;
}

}  // namespace

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
  Rng rng(seed);
  return gaussian(rows, cols, rng);
}

MultiViewDataset make_blobs(const BlobSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd centers =
      spec.separation * gaussian(spec.latent_dim, spec.classes, rng);
  const Eigen::Index n =
      static_cast<Eigen::Index>(spec.classes) * spec.per_class;
  std::vector<int> labels(n);
  Eigen::MatrixXd latent(spec.latent_dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = static_cast<int>(i) / spec.per_class;
    labels[i] = c;
    for (Eigen::Index j = 0; j < spec.latent_dim; ++j)
      latent(j, i) = centers(j, c) + spec.latent_noise * rng.normal();
  }
  return views_from_latent(latent, labels, spec.views, spec.dim,
                           spec.view_noise, spec.distractor_dims,
                           spec.distractor_scale, rng);
}

MultiViewDataset make_arcs(const ArcSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n =
      static_cast<Eigen::Index>(spec.classes) * spec.per_class;
  std::vector<int> labels(n);
  Eigen::MatrixXd latent(2, n);
  const double slice = 2.0 * std::numbers::pi / spec.classes;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = static_cast<int>(i) / spec.per_class;
    labels[i] = c;
    // 85% of the slice is used, leaving small gaps between classes
    const double angle = slice * (c + 0.075 + 0.85 * rng.uniform());
    const double radius = spec.radius + spec.radial_noise * rng.normal();
    latent(0, i) = radius * std::cos(angle);
    latent(1, i) = radius * std::sin(angle);
  }
  return views_from_latent(latent, labels, spec.views, spec.dim,
                           spec.view_noise, spec.distractor_dims,
                           spec.distractor_scale, rng);
}

std::vector<Eigen::MatrixXd> random_views(const std::vector<Eigen::Index>& dims,
                                          Eigen::Index samples,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::MatrixXd> views;
  for (Eigen::Index d : dims) views.push_back(gaussian(d, samples, rng));
  return views;
}

MultiViewDataset convergence_instance() {
  BlobSpec spec;
  spec.views = 3;
  spec.classes = 2;
  spec.per_class = 20;
  spec.dim = 6;
  spec.latent_dim = 2;
  spec.separation = 2.0;
  spec.latent_noise = 0.6;
  spec.view_noise = 0.4;
  spec.distractor_dims = 2;
  spec.distractor_scale = 1.0;
  return make_blobs(spec, 424242);
}

ProblemConfig convergence_config() {
  ProblemConfig cfg;
  cfg.rank = 2;
  cfg.lambda = {1e-3};
  cfg.graph_order = MultiOrderConfig::geometric(2);
  cfg.graph_method = GraphMethod::Adaptive;
  cfg.graph_params.k = 5;
  cfg.max_iter = 500;
  cfg.tol = 1e-6;
  cfg.seed = 7;
  return cfg;
}

}  // namespace stcca::testsupport
