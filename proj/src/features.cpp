#include "lagcast/features.hpp"

#include "lagcast/error.hpp"

namespace lagcast {

FeatureMatrix feature_matrix_from_design(const Design& design) {
    FeatureMatrix out;
    Eigen::Index skip = 0;
    if (!design.labels.empty() && design.labels.front() == "(Intercept)") skip = 1;
    out.X = design.X.rightCols(design.X.cols() - skip);
    out.y = design.target;
    out.labels.assign(design.labels.begin() + skip, design.labels.end());
    return out;
}

FeatureMatrix take_rows(const FeatureMatrix& data, const std::vector<std::size_t>& rows) {
    FeatureMatrix out;
    out.labels = data.labels;
    out.allow_constant_columns = data.allow_constant_columns;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), data.X.cols());
    if (data.y.size() > 0) out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(static_cast<Eigen::Index>(rows[i]));
        if (data.y.size() > 0) out.y(static_cast<Eigen::Index>(i)) = data.y(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

FeatureMatrix slice_rows(const FeatureMatrix& data, Eigen::Index begin, Eigen::Index end) {
    FeatureMatrix out;
    out.labels = data.labels;
    out.allow_constant_columns = data.allow_constant_columns;
    out.X = data.X.middleRows(begin, end - begin);
    if (data.y.size() > 0) out.y = data.y.segment(begin, end - begin);
    return out;
}

void validate_features(const FeatureMatrix& data, bool require_target) {
    if (data.X.rows() < 2) {
        throw Error(ErrorCode::InvalidConfig, "need at least two observations");
    }
    if (static_cast<std::size_t>(data.X.cols()) != data.labels.size()) {
        throw Error(ErrorCode::LabelMismatch, "label count does not match feature count");
    }
    if (!data.X.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "feature matrix contains non-finite values");
    }
    if (require_target) {
        if (data.y.size() != data.X.rows()) {
            throw Error(ErrorCode::LengthMismatch, "target length does not match row count");
        }
        if (!data.y.allFinite()) {
            throw Error(ErrorCode::NonFiniteInput, "target contains non-finite values");
        }
    }
    if (!data.allow_constant_columns) {
        for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
            if ((data.X.col(j).array() == data.X(0, j)).all()) {
                throw Error(ErrorCode::InvalidConfig,
                            "feature '" + data.labels[static_cast<std::size_t>(j)] + "' is constant");
            }
        }
    }
}

} // namespace lagcast
