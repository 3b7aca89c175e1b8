#pragma once

#include "lagcast/ardl.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace lagcast {

/// Observations of named lag features with an aligned target. Labels follow
/// the regression term naming; the intercept column is excluded.
struct FeatureMatrix {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> labels;
    bool allow_constant_columns = false;

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }
};

/// Drop the intercept column of a lagged design.
FeatureMatrix feature_matrix_from_design(const Design& design);

/// Row subset, preserving order.
FeatureMatrix take_rows(const FeatureMatrix& data, const std::vector<std::size_t>& rows);

/// Contiguous [begin, end) row slice.
FeatureMatrix slice_rows(const FeatureMatrix& data, Eigen::Index begin, Eigen::Index end);

/// Throws on non-finite data, fewer than two rows, or (unless allowed)
/// constant columns.
void validate_features(const FeatureMatrix& data, bool require_target);

} // namespace lagcast
