#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "stcca/eval.hpp"

namespace stcca {

// Description of a multi-view dataset on disk. View files are delimited
// numeric matrices with rows as samples; the label file holds one integer
// per line. Relative paths resolve against the manifest's directory.
struct Manifest {
  std::vector<std::string> view_paths;
  std::vector<std::string> view_names;
  std::string label_path;
  char delimiter = ',';
  bool header = false;
};

Manifest load_manifest(const std::string& path);

// Reads a delimited numeric matrix (rows x cols as stored). Errors carry the
// file name and 1-based line number.
Eigen::MatrixXd load_delimited_matrix(const std::string& path, char delimiter,
                                      bool header);
void save_delimited_matrix(const std::string& path, const Eigen::MatrixXd& m,
                           char delimiter = ',');

std::vector<int> load_labels(const std::string& path);
void save_labels(const std::string& path, const std::vector<int>& labels);

// Loads all views (transposed to d_p x N) and labels, then validates.
MultiViewDataset load_dataset(const Manifest& manifest,
                              const std::string& base_dir);
MultiViewDataset load_dataset(const std::string& manifest_path);

}  // namespace stcca
