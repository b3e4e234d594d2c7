#pragma once

#include <string>
#include <vector>

#include "anchorfair/types.hpp"

namespace anchorfair {

// Loads a headered CSV into a Dataset. Features are z-score standardized
// per column (constant columns pass through as zeros); the sensitive
// attribute column may hold arbitrary strings and is densified in
// first-appearance order; the optional truth column is densified the same
// way. feature_columns empty means "every column not otherwise claimed".
// Cells must not contain commas; the parser does not handle quoting.
struct CsvSpec {
  std::string path;
  std::string group_column;
  std::string truth_column;                   // empty = no ground truth
  std::vector<std::string> feature_columns;   // empty = all remaining columns
};

Dataset load_csv(const CsvSpec& spec);

// Writes features (unstandardized), group names, and truth when present,
// with header x0,...,x{d-1},group[,truth]. Inverse of load_csv up to the
// standardization applied at ingest.
void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace anchorfair
