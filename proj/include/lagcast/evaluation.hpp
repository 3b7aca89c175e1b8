#pragma once

#include "lagcast/features.hpp"
#include "lagcast/regressors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lagcast {

/// Interpretation scale for MAPE: <1, 1-10, 10-20, 20-50, >=50. Only the first
/// two bands have quoted sources; the rest follow the usual convention.
enum class Band { HighlyAccurate, Good, Reasonable, Weak, Inaccurate };

const char* band_name(Band band);
Band band_of(double mape);

enum class ZeroActualPolicy {
    Error,           // zero actual values abort the percentage metrics (default)
    DropForPercent,  // percentage metrics skip zero-actual points, count recorded
    SkipPercent,     // percentage metrics omitted entirely
};

struct MetricsReport {
    double me = 0.0;    // mean(actual - predicted)
    double rmse = 0.0;  // sqrt(mean((predicted - actual)^2))
    double mae = 0.0;   // mean(|predicted - actual|)
    std::optional<double> mpe;   // mean((predicted - actual)/actual) * 100
    std::optional<double> mape;  // mean(|predicted - actual|/actual) * 100
    std::size_t n = 0;
    std::size_t zero_dropped = 0;
    std::optional<Band> band;  // derived from mape
};

MetricsReport metrics(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted,
                      ZeroActualPolicy policy = ZeroActualPolicy::Error);

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

enum class FoldScheme {
    Shuffled,          // permute indices with the seed, then slice
    ContiguousBlocks,  // slice in time order; leakage-safe for lagged rows
};

/// Partition 0..n-1 into k folds whose sizes differ by at most one.
std::vector<Fold> k_fold(std::size_t n, int k, FoldScheme scheme, std::uint64_t seed = 0);

struct ComparisonRow {
    RegressorKind kind = RegressorKind::RF;
    std::string split;  // "train", "test" or "cv"
    MetricsReport report;
    bool failed = false;
    std::string error;
};

/// Per-model metrics on the train and test splits plus mean-of-folds
/// cross-validation metrics, in the shape of the published comparison tables.
struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // (model, train) and (model, test)
    std::vector<ComparisonRow> cv_rows;
    std::string series_name;
    std::uint64_t seed = 0;

    const ComparisonRow* find(RegressorKind kind, const std::string& split) const;
};

struct RegressorConfigs {
    RfConfig rf;
    SvrConfig svr;
    KnnConfig knn;
    MlpConfig mlp;
};

struct EvalOptions {
    int cv_folds = 10;
    FoldScheme scheme = FoldScheme::Shuffled;
    ZeroActualPolicy zero_policy = ZeroActualPolicy::Error;
};

/// Fit all four regressors on train, score train and test, and cross-validate
/// on train. A model that fails to fit marks its rows instead of aborting.
ComparisonTable compare_models(const FeatureMatrix& train, const FeatureMatrix& test,
                               const RegressorConfigs& configs, const EvalOptions& options,
                               std::uint64_t seed);

} // namespace lagcast
