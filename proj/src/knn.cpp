#include "lagcast/error.hpp"
#include "lagcast/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lagcast::detail {

KnnModel fit_knn(const KnnConfig& config, const FeatureMatrix& data) {
    validate_features(data, true);
    const auto n = data.rows();

    KnnModel model;
    model.config = config;
    model.k = config.k > 0 ? config.k
                           : static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (model.k < 1 || model.k > n) {
        throw Error(ErrorCode::InvalidConfig,
                    "k = " + std::to_string(model.k) + " outside [1, " + std::to_string(n) + "]");
    }

    model.feature_mean = data.X.colwise().mean();
    Eigen::MatrixXd centered = data.X.rowwise() - model.feature_mean.transpose();
    model.feature_scale = (centered.array().square().colwise().sum() / double(n)).sqrt();
    for (Eigen::Index j = 0; j < model.feature_scale.size(); ++j) {
        if (model.feature_scale(j) <= 0.0) model.feature_scale(j) = 1.0;
    }
    model.train_X = centered.array().rowwise() / model.feature_scale.transpose().array();
    model.train_y = data.y;
    return model;
}

Eigen::VectorXd predict_knn(const KnnModel& model, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd Xs = (X.rowwise() - model.feature_mean.transpose()).array().rowwise() /
                         model.feature_scale.transpose().array();
    const auto n_train = model.train_X.rows();
    Eigen::VectorXd out(X.rows());
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n_train));
    for (Eigen::Index r = 0; r < Xs.rows(); ++r) {
        for (Eigen::Index i = 0; i < n_train; ++i) {
            double d = (model.train_X.row(i) - Xs.row(r)).squaredNorm();
            dist[static_cast<std::size_t>(i)] = {d, i};  // ties break toward the lower index
        }
        auto mid = dist.begin() + model.k;
        std::nth_element(dist.begin(), mid - 1, dist.end());
        std::sort(dist.begin(), mid);  // fixed summation order keeps reruns bit-identical
        double sum = std::accumulate(dist.begin(), mid, 0.0, [&](double acc, const auto& p) {
            return acc + model.train_y(p.second);
        });
        out(r) = sum / double(model.k);
    }
    return out;
}

} // namespace lagcast::detail
