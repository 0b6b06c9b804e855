#include "stcca/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "stcca/errors.hpp"

namespace stcca {

namespace fs = std::filesystem;

namespace {

std::string location(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

double parse_cell(std::string_view cell, const std::string& path,
                  std::size_t line) {
  // trim spaces and a carriage return left over from CRLF files
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
    cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' ||
                           cell.back() == '\r'))
    cell.remove_suffix(1);
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw DataError("non-numeric cell '" + std::string(cell) + "' at " +
                    location(path, line));
  return value;
}

}  // namespace

Eigen::MatrixXd load_delimited_matrix(const std::string& path, char delimiter,
                                      bool header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::string_view rest = line;
    while (true) {
      const auto cut = rest.find(delimiter);
      row.push_back(parse_cell(rest.substr(0, cut), path, line_no));
      if (cut == std::string_view::npos) break;
      rest.remove_prefix(cut + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("ragged row (" + std::to_string(row.size()) +
                      " cells, expected " + std::to_string(rows.front().size()) +
                      ") at " + location(path, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("matrix file is empty: " + path);
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return out;
}

void save_delimited_matrix(const std::string& path, const Eigen::MatrixXd& m,
                           char delimiter) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write matrix file: " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << delimiter;
      out << m(i, j);
    }
    out << '\n';
  }
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file: " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::string_view cell = line;
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
      cell.remove_suffix(1);
    int value = 0;
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc{} || ptr != end)
      throw DataError("non-integer label at " + location(path, line_no));
    if (value < 0)
      throw DataError("negative label at " + location(path, line_no));
    labels.push_back(value);
  }
  if (labels.empty()) throw DataError("label file is empty: " + path);
  return labels;
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write label file: " + path);
  for (int label : labels) out << label << '\n';
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path + " is not valid JSON: " + e.what());
  }
  static const std::vector<std::string> known = {"views", "labels", "delimiter",
                                                 "header", "names"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("manifest has unknown key: " + key);
  Manifest manifest;
  if (!doc.contains("views") || !doc["views"].is_array() || doc["views"].empty())
    throw ConfigError("manifest needs a nonempty 'views' array");
  for (const auto& v : doc["views"])
    manifest.view_paths.push_back(v.get<std::string>());
  if (!doc.contains("labels"))
    throw ConfigError("manifest needs a 'labels' path");
  manifest.label_path = doc["labels"].get<std::string>();
  if (doc.contains("delimiter")) {
    const auto s = doc["delimiter"].get<std::string>();
    if (s.size() != 1)
      throw ConfigError("manifest delimiter must be a single character");
    manifest.delimiter = s[0];
  }
  if (doc.contains("header")) manifest.header = doc["header"].get<bool>();
  if (doc.contains("names"))
    for (const auto& v : doc["names"])
      manifest.view_names.push_back(v.get<std::string>());
  return manifest;
}

MultiViewDataset load_dataset(const Manifest& manifest,
                              const std::string& base_dir) {
  const auto resolve = [&](const std::string& p) {
    const fs::path candidate(p);
    if (candidate.is_absolute() || base_dir.empty()) return p;
    return (fs::path(base_dir) / candidate).string();
  };
  MultiViewDataset data;
  for (const auto& path : manifest.view_paths) {
    // stored rows are samples; views are kept as d x N
    data.views.push_back(
        load_delimited_matrix(resolve(path), manifest.delimiter, manifest.header)
            .transpose());
  }
  data.labels = load_labels(resolve(manifest.label_path));
  data.names = manifest.view_names;
  data.validate();
  return data;
}

MultiViewDataset load_dataset(const std::string& manifest_path) {
  const Manifest manifest = load_manifest(manifest_path);
  return load_dataset(manifest, fs::path(manifest_path).parent_path().string());
}

}  // namespace stcca
