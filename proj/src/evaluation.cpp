#include "lagcast/evaluation.hpp"

#include "lagcast/error.hpp"
#include "lagcast/rng.hpp"

#include <cmath>
#include <limits>

namespace lagcast {

const char* band_name(Band band) {
    switch (band) {
        case Band::HighlyAccurate: return "highly accurate";
        case Band::Good: return "good";
        case Band::Reasonable: return "reasonable";
        case Band::Weak: return "weak";
        case Band::Inaccurate: return "inaccurate";
    }
    return "?";
}

Band band_of(double mape) {
    if (mape < 1.0) return Band::HighlyAccurate;
    if (mape < 10.0) return Band::Good;
    if (mape < 20.0) return Band::Reasonable;
    if (mape < 50.0) return Band::Weak;
    return Band::Inaccurate;
}

MetricsReport metrics(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted,
                      ZeroActualPolicy policy) {
    if (actual.size() != predicted.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(actual.size()) + " actual vs " +
                        std::to_string(predicted.size()) + " predicted");
    }
    if (actual.size() == 0) {
        throw Error(ErrorCode::EmptyInput, "nothing to score");
    }

    MetricsReport report;
    report.n = static_cast<std::size_t>(actual.size());
    const double n = static_cast<double>(actual.size());

    double se = 0.0, ae = 0.0, e = 0.0;
    double pe = 0.0, ape = 0.0;
    std::size_t pct_n = 0;
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
        double diff = predicted(i) - actual(i);
        e += -diff;  // the mean error subtracts prediction from actual
        se += diff * diff;
        ae += std::fabs(diff);
        if (policy != ZeroActualPolicy::SkipPercent) {
            if (actual(i) == 0.0) {
                if (policy == ZeroActualPolicy::Error) {
                    throw Error(ErrorCode::ZeroActual,
                                "actual value at index " + std::to_string(i) +
                                    " is zero; percentage metrics undefined");
                }
                ++report.zero_dropped;
            } else {
                pe += diff / actual(i);
                ape += std::fabs(diff) / std::fabs(actual(i));
                ++pct_n;
            }
        }
    }
    report.me = e / n;
    report.rmse = std::sqrt(se / n);
    report.mae = ae / n;
    if (policy != ZeroActualPolicy::SkipPercent && pct_n > 0) {
        report.mpe = pe / double(pct_n) * 100.0;
        report.mape = ape / double(pct_n) * 100.0;
        report.band = band_of(*report.mape);
    }
    return report;
}

std::vector<Fold> k_fold(std::size_t n, int k, FoldScheme scheme, std::uint64_t seed) {
    if (k < 2 || static_cast<std::size_t>(k) > n) {
        throw Error(ErrorCode::TooFewRows,
                    std::to_string(n) + " rows cannot make " + std::to_string(k) + " folds");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (scheme == FoldScheme::Shuffled) {
        Rng rng(seed);
        rng.shuffle(order);
    }

    std::vector<Fold> folds(static_cast<std::size_t>(k));
    std::size_t base = n / static_cast<std::size_t>(k);
    std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t cursor = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::size_t size = base + (f < extra ? 1 : 0);
        folds[f].validation.assign(order.begin() + cursor, order.begin() + cursor + size);
        cursor += size;
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
        folds[f].train.reserve(n - folds[f].validation.size());
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            folds[f].train.insert(folds[f].train.end(), folds[g].validation.begin(),
                                  folds[g].validation.end());
        }
    }
    return folds;
}

const ComparisonRow* ComparisonTable::find(RegressorKind kind, const std::string& split) const {
    for (const auto& row : rows) {
        if (row.kind == kind && row.split == split) return &row;
    }
    for (const auto& row : cv_rows) {
        if (row.kind == kind && row.split == split) return &row;
    }
    return nullptr;
}

namespace {

MetricsReport mean_of_reports(const std::vector<MetricsReport>& reports) {
    MetricsReport mean;
    double me = 0, rmse = 0, mae = 0, mpe = 0, mape = 0;
    std::size_t pct_count = 0;
    for (const auto& r : reports) {
        me += r.me;
        rmse += r.rmse;
        mae += r.mae;
        if (r.mpe) {
            mpe += *r.mpe;
            mape += *r.mape;
            ++pct_count;
        }
        mean.n += r.n;
        mean.zero_dropped += r.zero_dropped;
    }
    const double k = static_cast<double>(reports.size());
    mean.me = me / k;
    mean.rmse = rmse / k;
    mean.mae = mae / k;
    if (pct_count == reports.size() && pct_count > 0) {
        mean.mpe = mpe / k;
        mean.mape = mape / k;
        mean.band = band_of(*mean.mape);
    }
    return mean;
}

RegressorConfig config_for(const RegressorConfigs& configs, RegressorKind kind,
                           std::uint64_t seed) {
    switch (kind) {
        case RegressorKind::RF: {
            RfConfig c = configs.rf;
            c.seed = seed;
            return c;
        }
        case RegressorKind::SVR: return configs.svr;
        case RegressorKind::KNN: return configs.knn;
        case RegressorKind::MLP: {
            MlpConfig c = configs.mlp;
            c.seed = seed;
            return c;
        }
    }
    throw Error(ErrorCode::InvalidConfig, "unknown regressor kind");
}

} // namespace

ComparisonTable compare_models(const FeatureMatrix& train, const FeatureMatrix& test,
                               const RegressorConfigs& configs, const EvalOptions& options,
                               std::uint64_t seed) {
    if (train.labels != test.labels) {
        throw Error(ErrorCode::LabelMismatch, "train and test feature labels differ");
    }

    ComparisonTable table;
    table.seed = seed;

    const RegressorKind kinds[] = {RegressorKind::RF, RegressorKind::SVR, RegressorKind::KNN,
                                   RegressorKind::MLP};
    for (std::size_t m = 0; m < 4; ++m) {
        RegressorKind kind = kinds[m];
        std::uint64_t model_seed = derive_seed(seed, m);

        ComparisonRow train_row{kind, "train", {}, false, ""};
        ComparisonRow test_row{kind, "test", {}, false, ""};
        ComparisonRow cv_row{kind, "cv", {}, false, ""};
        try {
            TrainedRegressor model = fit_regressor(config_for(configs, kind, model_seed), train);
            train_row.report = metrics(train.y, predict(model, train), options.zero_policy);
            test_row.report = metrics(test.y, predict(model, test), options.zero_policy);
        } catch (const Error& e) {
            train_row.failed = test_row.failed = true;
            train_row.error = test_row.error = e.what();
        }

        try {
            std::vector<Fold> folds = k_fold(static_cast<std::size_t>(train.rows()),
                                             options.cv_folds, options.scheme,
                                             derive_seed(model_seed, 0xcf));
            std::vector<MetricsReport> fold_reports;
            fold_reports.reserve(folds.size());
            for (std::size_t f = 0; f < folds.size(); ++f) {
                FeatureMatrix fold_train = take_rows(train, folds[f].train);
                FeatureMatrix fold_val = take_rows(train, folds[f].validation);
                TrainedRegressor model = fit_regressor(
                    config_for(configs, kind, derive_seed(model_seed, f + 1)), fold_train);
                fold_reports.push_back(
                    metrics(fold_val.y, predict(model, fold_val), options.zero_policy));
            }
            cv_row.report = mean_of_reports(fold_reports);
        } catch (const Error& e) {
            cv_row.failed = true;
            cv_row.error = e.what();
        }

        table.rows.push_back(std::move(train_row));
        table.rows.push_back(std::move(test_row));
        table.cv_rows.push_back(std::move(cv_row));
    }
    return table;
}

} // namespace lagcast
