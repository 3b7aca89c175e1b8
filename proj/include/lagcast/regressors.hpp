#pragma once

#include "lagcast/features.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lagcast {

enum class RegressorKind { RF, SVR, KNN, MLP };

const char* regressor_kind_name(RegressorKind kind);
RegressorKind regressor_kind_from_name(const std::string& name);

struct RfConfig {
    int n_trees = 500;
    int mtry = 0;                   // 0 = max(1, floor(p / 3))
    double sample_fraction = 0.70;  // subsample drawn without replacement
    int min_node_size = 5;
    int max_depth = -1;  // -1 = unlimited, 0 = root is a leaf
    std::uint64_t seed = 0;
};

struct SvrConfig {
    double cost = 100.0;
    double rbf_gamma = 0.1;
    double epsilon = 0.3;
    double tolerance = 1e-3;
    int max_passes = 10000;
    bool record_objective = false;  // keep the dual objective trace for diagnostics
};

struct KnnConfig {
    int k = 0;  // 0 = round(sqrt(n_train))
};

struct MlpConfig {
    std::vector<int> hidden_layers = {4, 4};
    double learning_rate = 0.01;
    double stop_gradient_threshold = 0.01;
    long max_iterations = 10000;
    std::uint64_t seed = 0;
};

using RegressorConfig = std::variant<RfConfig, SvrConfig, KnnConfig, MlpConfig>;

RegressorKind config_kind(const RegressorConfig& config);

// --- fitted model parameter blocks ---------------------------------------

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf mean
};

struct RfModel {
    RfConfig config;
    std::vector<std::vector<TreeNode>> trees;
};

struct SvrModel {
    SvrConfig config;
    Eigen::MatrixXd support_vectors;  // standardized rows with nonzero dual coef
    Eigen::VectorXd dual_coefs;       // alpha_i - alpha_i^*
    double bias = 0.0;
    Eigen::VectorXd feature_mean;
    Eigen::VectorXd feature_scale;
    int iterations = 0;
    std::vector<double> objective_trace;  // filled when config.record_objective
};

struct KnnModel {
    KnnConfig config;
    int k = 1;
    Eigen::MatrixXd train_X;  // standardized
    Eigen::VectorXd train_y;
    Eigen::VectorXd feature_mean;
    Eigen::VectorXd feature_scale;
};

struct MlpModel {
    MlpConfig config;
    std::vector<Eigen::MatrixXd> weights;  // layer l: fan_in x fan_out
    std::vector<Eigen::VectorXd> biases;
    Eigen::VectorXd input_min, input_range;
    double target_min = 0.0, target_range = 1.0;
    long iterations = 0;
    double final_loss = 0.0;
};

/// One of the four learners behind a common fit/predict contract. Predictions
/// match feature columns to the stored labels by name.
struct TrainedRegressor {
    RegressorKind kind = RegressorKind::RF;
    std::vector<std::string> feature_labels;
    std::uint64_t seed = 0;
    std::variant<RfModel, SvrModel, KnnModel, MlpModel> model;
};

TrainedRegressor fit_regressor(const RegressorConfig& config, const FeatureMatrix& data);

Eigen::VectorXd predict(const TrainedRegressor& model, const FeatureMatrix& rows);

/// Grid search over (cost, gamma) pairs scored by mean RMSE across k folds.
/// Ties break toward the smaller cost, then the smaller gamma.
SvrConfig tune_svr(const FeatureMatrix& data, const std::vector<double>& costs,
                   const std::vector<double>& gammas, int folds, std::uint64_t seed,
                   const SvrConfig& base = SvrConfig{});

/// Fit every candidate width list with the same seed; smallest MAPE on the
/// evaluation split wins, ties break toward fewer total weights.
MlpConfig search_mlp_architecture(const FeatureMatrix& train, const FeatureMatrix& eval,
                                  const std::vector<std::vector<int>>& candidates,
                                  const MlpConfig& base);

// internals shared by the per-kind translation units
namespace detail {
RfModel fit_rf(const RfConfig& config, const FeatureMatrix& data);
SvrModel fit_svr(const SvrConfig& config, const FeatureMatrix& data);
KnnModel fit_knn(const KnnConfig& config, const FeatureMatrix& data);
MlpModel fit_mlp(const MlpConfig& config, const FeatureMatrix& data);

Eigen::VectorXd predict_rf(const RfModel& model, const Eigen::MatrixXd& X);
Eigen::VectorXd predict_svr(const SvrModel& model, const Eigen::MatrixXd& X);
Eigen::VectorXd predict_knn(const KnnModel& model, const Eigen::MatrixXd& X);
Eigen::VectorXd predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X);

/// Loss and gradient of the current weights on (scaled) data; used by training
/// and by the finite-difference checks.
double mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y, std::vector<Eigen::MatrixXd>& grad_w,
                             std::vector<Eigen::VectorXd>& grad_b);
} // namespace detail

} // namespace lagcast
