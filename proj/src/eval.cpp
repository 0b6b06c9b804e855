#include "stcca/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "stcca/errors.hpp"

namespace stcca {

int MultiViewDataset::num_classes() const {
  int top = -1;
  for (int label : labels) top = std::max(top, label);
  return top + 1;
}

void MultiViewDataset::validate() const {
  if (views.empty()) throw DataError("dataset has no views");
  const Eigen::Index n = views.front().cols();
  for (const auto& x : views)
    if (x.cols() != n) throw DataError("views disagree on the sample count");
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw DataError("label count does not match the sample count");
  for (int label : labels)
    if (label < 0) throw DataError("labels must be nonnegative");
  if (!names.empty() && names.size() != views.size())
    throw DataError("view name count does not match the view count");
}

double PcaModel::explained_variance_ratio() const {
  const double total = singular_values.squaredNorm();
  if (total == 0.0) return 0.0;
  return singular_values.head(components.cols()).squaredNorm() / total;
}

PcaModel pca_fit(const Eigen::MatrixXd& x, Eigen::Index target_dim) {
  const Eigen::Index d = x.rows(), n = x.cols();
  if (target_dim < 1 || target_dim > std::min(d, n))
    throw ParameterError("PCA target dimension out of range");
  PcaModel model;
  model.mean = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - model.mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
  model.singular_values = svd.singularValues();
  model.components = svd.matrixU().leftCols(target_dim);
  // deterministic sign: the largest-magnitude loading is positive
  for (Eigen::Index j = 0; j < model.components.cols(); ++j) {
    Eigen::Index argmax = 0;
    model.components.col(j).cwiseAbs().maxCoeff(&argmax);
    if (model.components(argmax, j) < 0.0)
      model.components.col(j) = -model.components.col(j);
  }
  return model;
}

Eigen::MatrixXd pca_apply(const PcaModel& model, const Eigen::MatrixXd& x) {
  if (x.rows() != model.mean.size())
    throw DimensionError("PCA model dimension does not match the data");
  return model.components.transpose() * (x.colwise() - model.mean);
}

Eigen::MatrixXd pca_reduce(const Eigen::MatrixXd& x, Eigen::Index target_dim) {
  return pca_apply(pca_fit(x, target_dim), x);
}

Eigen::MatrixXd project(const std::vector<Eigen::MatrixXd>& views,
                        const ProjectionSet& projections) {
  if (views.size() != projections.size())
    throw DimensionError("projection count does not match the view count");
  if (views.empty()) throw DimensionError("nothing to project");
  const Eigen::Index n = views.front().cols();
  const Eigen::Index r = projections.front().cols();
  Eigen::MatrixXd z(n, static_cast<Eigen::Index>(views.size()) * r);
  for (std::size_t p = 0; p < views.size(); ++p) {
    if (projections[p].rows() != views[p].rows())
      throw DimensionError("projection rows do not match view dimension");
    if (projections[p].cols() != r)
      throw DimensionError("projections disagree on the embedding dimension");
    z.middleCols(static_cast<Eigen::Index>(p) * r, r) =
        views[p].transpose() * projections[p];
  }
  return z;
}

Eigen::MatrixXd project(const MultiViewDataset& data,
                        const ProjectionSet& projections) {
  return project(data.views, projections);
}

std::vector<int> knn_classify(const Eigen::MatrixXd& train_z,
                              const std::vector<int>& train_labels,
                              const Eigen::MatrixXd& test_z, int k) {
  const Eigen::Index n_train = train_z.rows();
  if (n_train == 0) throw DataError("KNN needs a nonempty training set");
  if (static_cast<Eigen::Index>(train_labels.size()) != n_train)
    throw DimensionError("training label count does not match rows");
  if (test_z.cols() != train_z.cols())
    throw DimensionError("train and test feature dimensions differ");
  if (k < 1 || k > n_train)
    throw ParameterError("KNN neighbor count out of range");

  std::vector<int> predictions(test_z.rows());
  std::vector<Eigen::Index> order(n_train);
  for (Eigen::Index i = 0; i < test_z.rows(); ++i) {
    const Eigen::VectorXd d2 =
        (train_z.rowwise() - test_z.row(i)).rowwise().squaredNorm();
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        if (d2[a] != d2[b]) return d2[a] < d2[b];
                        return a < b;
                      });
    std::map<int, std::pair<int, double>> votes;  // label -> (count, total d2)
    for (int h = 0; h < k; ++h) {
      auto& entry = votes[train_labels[order[h]]];
      entry.first += 1;
      entry.second += d2[order[h]];
    }
    int best_label = -1;
    int best_count = -1;
    double best_total = 0.0;
    for (const auto& [label, entry] : votes) {
      const auto [count, total] = entry;
      const bool wins = count > best_count ||
                        (count == best_count && total < best_total);
      if (wins) {  // map order makes the smallest label win remaining ties
        best_label = label;
        best_count = count;
        best_total = total;
      }
    }
    predictions[i] = best_label;
  }
  return predictions;
}

double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& truth) {
  if (predictions.size() != truth.size())
    throw DimensionError("prediction and truth lengths differ");
  if (predictions.empty()) throw DataError("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predictions[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double f1_macro(const std::vector<int>& predictions,
                const std::vector<int>& truth) {
  if (predictions.size() != truth.size())
    throw DimensionError("prediction and truth lengths differ");
  if (predictions.empty()) throw DataError("F1 of an empty set");
  int num_classes = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predictions[i] < 0 || truth[i] < 0)
      throw DataError("labels must be nonnegative");
    num_classes = std::max({num_classes, predictions[i] + 1, truth[i] + 1});
  }
  std::vector<long> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predictions[i] == truth[i]) {
      ++tp[truth[i]];
    } else {
      ++fp[predictions[i]];
      ++fn[truth[i]];
    }
  }
  double total = 0.0;
  for (int c = 0; c < num_classes; ++c) {
    const long denom = 2 * tp[c] + fp[c] + fn[c];
    total += denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp[c]) /
                                     static_cast<double>(denom);
  }
  return total / num_classes;
}

void EvalConfig::validate() const {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (test_ratio <= 0.0 || test_ratio >= 1.0)
    throw ConfigError("test_ratio must lie in (0, 1)");
  if (knn_k < 1) throw ConfigError("knn_k must be >= 1");
  if (pca_dim < 1) throw ConfigError("pca_dim must be >= 1");
  if (noise_sigma <= 0.0) throw ConfigError("noise_sigma must be > 0");
}

SplitIndices stratified_split(const std::vector<int>& labels,
                              double test_ratio, Rng& rng) {
  if (test_ratio <= 0.0 || test_ratio >= 1.0)
    throw ParameterError("test_ratio must lie in (0, 1)");
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<int>(i));
  SplitIndices split;
  for (auto& [label, indices] : by_class) {
    if (indices.size() < 2)
      throw DataError("class " + std::to_string(label) +
                      " has fewer than 2 samples; cannot stratify");
    // Fisher-Yates with the shared stream
    for (std::size_t i = indices.size() - 1; i > 0; --i)
      std::swap(indices[i], indices[rng.below(i + 1)]);
    const auto n = static_cast<double>(indices.size());
    auto n_test = static_cast<std::size_t>(std::llround(test_ratio * n));
    n_test = std::clamp<std::size_t>(n_test, 1, indices.size() - 1);
    split.test.insert(split.test.end(), indices.begin(), indices.begin() + n_test);
    split.train.insert(split.train.end(), indices.begin() + n_test, indices.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x,
                               const std::vector<int>& indices) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = x.col(indices[i]);
  return out;
}

std::vector<int> select_labels(const std::vector<int>& labels,
                               const std::vector<int>& indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(labels[i]);
  return out;
}

void mean_std(const std::vector<double>& values, double& mean, double& stddev) {
  mean = std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
  if (values.size() < 2) {
    stddev = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

Report benchmark(const MultiViewDataset& data, const ProblemConfig& cfg,
                 const EvalConfig& eval_cfg, std::uint64_t seed) {
  data.validate();
  eval_cfg.validate();
  if (data.num_classes() < 2)
    throw DataError("classification needs at least 2 classes");

  Report report;
  report.repeats = eval_cfg.repeats;
  report.test_ratio = eval_cfg.test_ratio;
  for (int rep = 0; rep < eval_cfg.repeats; ++rep) {
    Rng split_rng(mix_seed(seed, 0x1000 + rep));
    const SplitIndices split =
        stratified_split(data.labels, eval_cfg.test_ratio, split_rng);

    std::vector<Eigen::MatrixXd> train_views, test_views;
    for (const auto& x : data.views) {
      const Eigen::MatrixXd train_x = select_columns(x, split.train);
      const Eigen::Index dim = std::min<Eigen::Index>(
          {eval_cfg.pca_dim, train_x.rows(), train_x.cols()});
      if (dim < cfg.rank)
        throw ConfigError("PCA dimension is below the embedding rank");
      const PcaModel pca = pca_fit(train_x, dim);
      train_views.push_back(pca_apply(pca, train_x));
      test_views.push_back(pca_apply(pca, select_columns(x, split.test)));
    }

    ProblemConfig fit_cfg = cfg;
    fit_cfg.seed = mix_seed(seed, 0x2000 + rep);
    const FitResult fitted = fit(train_views, fit_cfg);
    report.fit_seconds.push_back(fitted.wall_seconds);

    const Eigen::MatrixXd train_z = project(train_views, fitted.projections);
    const Eigen::MatrixXd test_z = project(test_views, fitted.projections);
    const std::vector<int> train_labels = select_labels(data.labels, split.train);
    const std::vector<int> test_labels = select_labels(data.labels, split.test);
    const std::vector<int> predictions =
        knn_classify(train_z, train_labels, test_z, eval_cfg.knn_k);
    report.accuracy.push_back(accuracy(predictions, test_labels));
    report.f1.push_back(f1_macro(predictions, test_labels));
  }
  mean_std(report.accuracy, report.accuracy_mean, report.accuracy_std);
  mean_std(report.f1, report.f1_mean, report.f1_std);
  return report;
}

MultiViewDataset inject_noise(const MultiViewDataset& data, double fraction,
                              double sigma, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw ParameterError("noise fraction must lie in [0, 1]");
  if (sigma <= 0.0) throw ParameterError("noise sigma must be > 0");
  MultiViewDataset noisy = data;
  if (fraction == 0.0) return noisy;
  for (std::size_t p = 0; p < noisy.views.size(); ++p) {
    Eigen::MatrixXd& x = noisy.views[p];
    const Eigen::Index d = x.rows(), n = x.cols();
    Eigen::VectorXd feature_std(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double mu = x.row(i).mean();
      feature_std[i] =
          std::sqrt((x.row(i).array() - mu).square().mean());
    }
    Rng rng(mix_seed(seed, 0x7000 + p));
    const auto total = static_cast<std::size_t>(d * n);
    auto corrupt = static_cast<std::size_t>(std::llround(fraction * total));
    corrupt = std::min(corrupt, total);
    // partial Fisher-Yates draws `corrupt` distinct entry positions
    std::vector<std::size_t> positions(total);
    std::iota(positions.begin(), positions.end(), 0);
    for (std::size_t i = 0; i < corrupt; ++i) {
      const std::size_t j = i + rng.below(total - i);
      std::swap(positions[i], positions[j]);
      const auto row = static_cast<Eigen::Index>(positions[i] % d);
      const auto col = static_cast<Eigen::Index>(positions[i] / d);
      x(row, col) += sigma * feature_std[row] * rng.normal();
    }
  }
  return noisy;
}

namespace {

std::vector<int> stratified_subsample(const std::vector<int>& labels,
                                      double ratio, Rng& rng) {
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<int>(i));
  std::vector<int> keep;
  for (auto& [label, indices] : by_class) {
    for (std::size_t i = indices.size() - 1; i > 0; --i)
      std::swap(indices[i], indices[rng.below(i + 1)]);
    auto count = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(indices.size())));
    count = std::clamp<std::size_t>(count, 1, indices.size());
    keep.insert(keep.end(), indices.begin(), indices.begin() + count);
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace

std::vector<TimingRow> runtime_scaling(const MultiViewDataset& data,
                                       const ProblemConfig& cfg,
                                       const std::vector<double>& ratios,
                                       std::uint64_t seed) {
  data.validate();
  for (double ratio : ratios)
    if (ratio <= 0.0 || ratio > 1.0)
      throw ParameterError("sampling ratios must lie in (0, 1]");
  std::vector<TimingRow> rows;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    Rng rng(mix_seed(seed, 0x9000 + i));
    const std::vector<int> keep =
        stratified_subsample(data.labels, ratios[i], rng);
    std::vector<Eigen::MatrixXd> views;
    for (const auto& x : data.views) views.push_back(select_columns(x, keep));
    const auto start = std::chrono::steady_clock::now();
    (void)fit(views, cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    rows.push_back({static_cast<Eigen::Index>(keep.size()), seconds});
  }
  return rows;
}

double linear_fit_r2(const std::vector<TimingRow>& rows) {
  const auto n = static_cast<double>(rows.size());
  if (rows.size() < 2) throw ParameterError("R^2 needs at least two points");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& row : rows) {
    mean_x += static_cast<double>(row.samples);
    mean_y += row.seconds;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& row : rows) {
    const double dx = static_cast<double>(row.samples) - mean_x;
    const double dy = row.seconds - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 1.0;
  return (sxy * sxy) / (sxx * syy);
}

}  // namespace stcca
