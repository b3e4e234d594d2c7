#pragma once

#include <string>
#include <vector>

#include "anchorfair/types.hpp"

namespace anchorfair {

// Validates raw inputs and produces a Dataset with group ids densified to
// [0, t) in first-appearance order. The original id of each dense group is
// retained in group_names for reporting. Throws std::invalid_argument on
// empty input, shape mismatch, or non-finite feature values (the error
// names the offending row and column).
Dataset validate_dataset(const Eigen::MatrixXd& features,
                         const std::vector<long long>& groups,
                         const std::vector<int>* truth = nullptr);

// Variant for data whose group labels are already strings (CSV ingestion).
Dataset validate_dataset(const Eigen::MatrixXd& features,
                         const std::vector<std::string>& group_labels,
                         const std::vector<int>* truth = nullptr);

GroupStats group_stats(const Dataset& dataset);

}  // namespace anchorfair
