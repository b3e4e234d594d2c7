#include "anchorfair/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "anchorfair/core.hpp"

namespace anchorfair {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    // trim surrounding whitespace and a possible trailing \r
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos
                        ? std::string()
                        : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw std::invalid_argument("column '" + name + "' not found in header");
  }
  return static_cast<int>(it - header.begin());
}

}  // namespace

Dataset load_csv(const CsvSpec& spec) {
  std::ifstream file(spec.path);
  if (!file) {
    throw std::invalid_argument("cannot open '" + spec.path + "'");
  }
  std::string line;
  if (!std::getline(file, line)) {
    throw std::invalid_argument("'" + spec.path + "' is empty");
  }
  const std::vector<std::string> header = split_line(line);
  const int group_col = column_index(header, spec.group_column);
  const int truth_col =
      spec.truth_column.empty() ? -1 : column_index(header, spec.truth_column);

  std::vector<int> feature_cols;
  if (spec.feature_columns.empty()) {
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
      if (c != group_col && c != truth_col) feature_cols.push_back(c);
    }
  } else {
    for (const std::string& name : spec.feature_columns) {
      feature_cols.push_back(column_index(header, name));
    }
  }
  if (feature_cols.empty()) {
    throw std::invalid_argument("no feature columns left after excluding '" +
                                spec.group_column + "'");
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> group_labels;
  std::vector<std::string> truth_labels;
  int line_no = 1;
  while (std::getline(file, line)) {
    line_no++;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) +
                                  " cells, header has " +
                                  std::to_string(header.size()));
    }
    std::vector<double> row(feature_cols.size());
    for (size_t f = 0; f < feature_cols.size(); ++f) {
      const std::string& cell = cells[feature_cols[f]];
      size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty() || !std::isfinite(value)) {
        throw std::invalid_argument("row " + std::to_string(line_no) +
                                    ", column '" + header[feature_cols[f]] +
                                    "': '" + cell + "' is not a finite number");
      }
      row[f] = value;
    }
    rows.push_back(std::move(row));
    group_labels.push_back(cells[group_col]);
    if (truth_col >= 0) truth_labels.push_back(cells[truth_col]);
  }
  if (rows.empty()) {
    throw std::invalid_argument("'" + spec.path + "' has a header but no data rows");
  }

  const int n = static_cast<int>(rows.size());
  const int d = static_cast<int>(feature_cols.size());
  Eigen::MatrixXd features(d, n);
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < d; ++f) features(f, i) = rows[i][f];
  }

  // z-score per feature; a constant feature keeps scale 1 and lands at zero
  for (int f = 0; f < d; ++f) {
    const double mean = features.row(f).mean();
    features.row(f).array() -= mean;
    const double var = features.row(f).squaredNorm() / n;
    if (var > 0.0) features.row(f) /= std::sqrt(var);
  }

  std::optional<std::vector<int>> truth;
  if (truth_col >= 0) {
    std::vector<int> dense(n);
    std::unordered_map<std::string, int> ids;
    for (int i = 0; i < n; ++i) {
      const auto [it, fresh] =
          ids.emplace(truth_labels[i], static_cast<int>(ids.size()));
      dense[i] = it->second;
      (void)fresh;
    }
    truth = std::move(dense);
  }
  Dataset dataset =
      validate_dataset(features, group_labels, truth ? &*truth : nullptr);
  return dataset;
}

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream file(path);
  if (!file) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  file.precision(17);
  for (int f = 0; f < dataset.d(); ++f) file << "x" << f << ",";
  file << "group";
  if (dataset.truth) file << ",truth";
  file << "\n";
  for (int i = 0; i < dataset.n(); ++i) {
    for (int f = 0; f < dataset.d(); ++f) file << dataset.features(f, i) << ",";
    file << dataset.group_names[dataset.groups[i]];
    if (dataset.truth) file << "," << (*dataset.truth)[i];
    file << "\n";
  }
  if (!file.good()) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace anchorfair
