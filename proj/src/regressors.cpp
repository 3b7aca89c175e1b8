#include "lagcast/regressors.hpp"

#include "lagcast/error.hpp"
#include "lagcast/evaluation.hpp"
#include "lagcast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lagcast {

const char* regressor_kind_name(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::RF: return "RF";
        case RegressorKind::SVR: return "SVR";
        case RegressorKind::KNN: return "KNN";
        case RegressorKind::MLP: return "MLP";
    }
    return "?";
}

RegressorKind regressor_kind_from_name(const std::string& name) {
    if (name == "RF" || name == "rf") return RegressorKind::RF;
    if (name == "SVR" || name == "svr" || name == "SVM" || name == "svm") return RegressorKind::SVR;
    if (name == "KNN" || name == "knn") return RegressorKind::KNN;
    if (name == "MLP" || name == "mlp" || name == "ANN" || name == "ann") return RegressorKind::MLP;
    throw Error(ErrorCode::InvalidConfig, "unknown regressor '" + name + "'");
}

RegressorKind config_kind(const RegressorConfig& config) {
    if (std::holds_alternative<RfConfig>(config)) return RegressorKind::RF;
    if (std::holds_alternative<SvrConfig>(config)) return RegressorKind::SVR;
    if (std::holds_alternative<KnnConfig>(config)) return RegressorKind::KNN;
    return RegressorKind::MLP;
}

TrainedRegressor fit_regressor(const RegressorConfig& config, const FeatureMatrix& data) {
    TrainedRegressor out;
    out.kind = config_kind(config);
    out.feature_labels = data.labels;
    if (const auto* rf = std::get_if<RfConfig>(&config)) {
        out.seed = rf->seed;
        out.model = detail::fit_rf(*rf, data);
    } else if (const auto* svr = std::get_if<SvrConfig>(&config)) {
        out.seed = 0;  // the SVR solver is deterministic without randomness
        out.model = detail::fit_svr(*svr, data);
    } else if (const auto* knn = std::get_if<KnnConfig>(&config)) {
        out.seed = 0;
        out.model = detail::fit_knn(*knn, data);
    } else {
        const auto& mlp = std::get<MlpConfig>(config);
        out.seed = mlp.seed;
        out.model = detail::fit_mlp(mlp, data);
    }
    return out;
}

namespace {

// Reorder query columns to the training layout; the match is by name.
Eigen::MatrixXd match_columns(const TrainedRegressor& model, const FeatureMatrix& rows) {
    if (rows.labels == model.feature_labels) return rows.X;
    if (rows.labels.size() != model.feature_labels.size()) {
        throw Error(ErrorCode::LabelMismatch, "feature label sets differ in size");
    }
    Eigen::MatrixXd out(rows.X.rows(), rows.X.cols());
    for (std::size_t j = 0; j < model.feature_labels.size(); ++j) {
        auto it = std::find(rows.labels.begin(), rows.labels.end(), model.feature_labels[j]);
        if (it == rows.labels.end()) {
            throw Error(ErrorCode::LabelMismatch,
                        "query rows lack feature '" + model.feature_labels[j] + "'");
        }
        out.col(static_cast<Eigen::Index>(j)) =
            rows.X.col(static_cast<Eigen::Index>(it - rows.labels.begin()));
    }
    return out;
}

} // namespace

Eigen::VectorXd predict(const TrainedRegressor& model, const FeatureMatrix& rows) {
    if (!rows.X.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "query rows contain non-finite values");
    }
    Eigen::MatrixXd X = match_columns(model, rows);
    switch (model.kind) {
        case RegressorKind::RF: return detail::predict_rf(std::get<RfModel>(model.model), X);
        case RegressorKind::SVR: return detail::predict_svr(std::get<SvrModel>(model.model), X);
        case RegressorKind::KNN: return detail::predict_knn(std::get<KnnModel>(model.model), X);
        case RegressorKind::MLP: return detail::predict_mlp(std::get<MlpModel>(model.model), X);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown regressor kind");
}

SvrConfig tune_svr(const FeatureMatrix& data, const std::vector<double>& costs,
                   const std::vector<double>& gammas, int folds, std::uint64_t seed,
                   const SvrConfig& base) {
    if (costs.empty() || gammas.empty()) {
        throw Error(ErrorCode::InvalidConfig, "empty tuning grid");
    }
    std::vector<double> sorted_costs = costs;
    std::vector<double> sorted_gammas = gammas;
    std::sort(sorted_costs.begin(), sorted_costs.end());
    std::sort(sorted_gammas.begin(), sorted_gammas.end());

    std::vector<Fold> scheme = k_fold(static_cast<std::size_t>(data.rows()), folds,
                                      FoldScheme::Shuffled, seed);

    SvrConfig best = base;
    double best_score = std::numeric_limits<double>::infinity();
    bool first = true;
    for (double cost : sorted_costs) {
        for (double gamma : sorted_gammas) {
            SvrConfig candidate = base;
            candidate.cost = cost;
            candidate.rbf_gamma = gamma;
            double total = 0.0;
            bool failed = false;
            for (const Fold& fold : scheme) {
                try {
                    FeatureMatrix train = take_rows(data, fold.train);
                    FeatureMatrix val = take_rows(data, fold.validation);
                    TrainedRegressor model = fit_regressor(candidate, train);
                    Eigen::VectorXd pred = predict(model, val);
                    MetricsReport report =
                        metrics(val.y, pred, ZeroActualPolicy::SkipPercent);
                    total += report.rmse;
                } catch (const Error&) {
                    failed = true;
                    break;
                }
            }
            double score = failed ? std::numeric_limits<double>::infinity()
                                  : total / double(scheme.size());
            // strict improvement only: the (cost, gamma) loops visit smaller
            // values first, which implements the tie-break
            if (first || score < best_score) {
                best = candidate;
                best_score = score;
                first = false;
            }
        }
    }
    return best;
}

MlpConfig search_mlp_architecture(const FeatureMatrix& train, const FeatureMatrix& eval,
                                  const std::vector<std::vector<int>>& candidates,
                                  const MlpConfig& base) {
    if (candidates.empty()) {
        throw Error(ErrorCode::InvalidConfig, "no architecture candidates");
    }
    auto weight_count = [&](const std::vector<int>& hidden) {
        long total = 0;
        long prev = train.cols();
        for (int width : hidden) {
            total += prev * width + width;
            prev = width;
        }
        total += prev + 1;
        return total;
    };

    std::optional<MlpConfig> best;
    double best_mape = std::numeric_limits<double>::infinity();
    long best_weights = 0;
    for (const auto& hidden : candidates) {
        MlpConfig candidate = base;
        candidate.hidden_layers = hidden;
        double mape;
        try {
            TrainedRegressor model = fit_regressor(candidate, train);
            Eigen::VectorXd pred = predict(model, eval);
            MetricsReport report = metrics(eval.y, pred, ZeroActualPolicy::Error);
            mape = report.mape.value();
        } catch (const Error&) {
            continue;  // diverging or infeasible candidates are skipped
        }
        long weights = weight_count(hidden);
        if (!best || mape < best_mape - 1e-12 ||
            (std::fabs(mape - best_mape) <= 1e-12 && weights < best_weights)) {
            best = candidate;
            best_mape = mape;
            best_weights = weights;
        }
    }
    if (!best) {
        throw Error(ErrorCode::AllCandidatesFailed, "every architecture candidate failed");
    }
    return *best;
}

} // namespace lagcast
