#include "lagcast/error.hpp"
#include "lagcast/regressors.hpp"
#include "lagcast/rng.hpp"

#include <cmath>

namespace lagcast::detail {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return 1.0 / (1.0 + (-z.array()).exp());
}

} // namespace

// Squared-error loss 0.5 * sum((pred - y)^2) over the scaled batch and its
// gradient by backpropagation. Hidden layers are logistic, the output is linear.
double mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y, std::vector<Eigen::MatrixXd>& grad_w,
                             std::vector<Eigen::VectorXd>& grad_b) {
    const std::size_t n_layers = model.weights.size();
    std::vector<Eigen::MatrixXd> activations(n_layers + 1);
    activations[0] = X;
    for (std::size_t l = 0; l < n_layers; ++l) {
        Eigen::MatrixXd z =
            (activations[l] * model.weights[l]).rowwise() + model.biases[l].transpose();
        activations[l + 1] = l + 1 < n_layers ? sigmoid(z) : z;
    }

    Eigen::VectorXd diff = activations[n_layers].col(0) - y;
    double loss = 0.5 * diff.squaredNorm();

    grad_w.resize(n_layers);
    grad_b.resize(n_layers);
    Eigen::MatrixXd delta = diff;  // linear output layer
    for (std::size_t l = n_layers; l-- > 0;) {
        grad_w[l] = activations[l].transpose() * delta;
        grad_b[l] = delta.colwise().sum();
        if (l > 0) {
            Eigen::MatrixXd upstream = delta * model.weights[l].transpose();
            const Eigen::MatrixXd& act = activations[l];
            delta = upstream.array() * act.array() * (1.0 - act.array());
        }
    }
    return loss;
}

MlpModel fit_mlp(const MlpConfig& config, const FeatureMatrix& data) {
    if (config.hidden_layers.empty() || config.learning_rate <= 0.0 ||
        config.stop_gradient_threshold <= 0.0 || config.max_iterations < 1) {
        throw Error(ErrorCode::InvalidConfig, "bad MLP configuration");
    }
    for (int width : config.hidden_layers) {
        if (width < 1) throw Error(ErrorCode::InvalidConfig, "hidden layer width must be >= 1");
    }
    validate_features(data, true);

    MlpModel model;
    model.config = config;

    // min-max scale inputs and target to [0, 1] on training statistics
    model.input_min = data.X.colwise().minCoeff();
    Eigen::VectorXd input_max = data.X.colwise().maxCoeff();
    model.input_range = input_max - model.input_min;
    for (Eigen::Index j = 0; j < model.input_range.size(); ++j) {
        if (model.input_range(j) <= 0.0) model.input_range(j) = 1.0;
    }
    model.target_min = data.y.minCoeff();
    model.target_range = data.y.maxCoeff() - model.target_min;
    if (model.target_range <= 0.0) model.target_range = 1.0;

    Eigen::MatrixXd Xs = (data.X.rowwise() - model.input_min.transpose()).array().rowwise() /
                         model.input_range.transpose().array();
    Eigen::VectorXd ys = (data.y.array() - model.target_min) / model.target_range;

    std::vector<int> widths;
    widths.push_back(static_cast<int>(data.cols()));
    widths.insert(widths.end(), config.hidden_layers.begin(), config.hidden_layers.end());
    widths.push_back(1);

    Rng rng(config.seed);
    model.weights.resize(widths.size() - 1);
    model.biases.resize(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        model.weights[l].resize(widths[l], widths[l + 1]);
        model.biases[l].resize(widths[l + 1]);
        for (Eigen::Index i = 0; i < model.weights[l].rows(); ++i) {
            for (Eigen::Index j = 0; j < model.weights[l].cols(); ++j) {
                model.weights[l](i, j) = rng.uniform(-0.5, 0.5);
            }
        }
        for (Eigen::Index j = 0; j < model.biases[l].size(); ++j) {
            model.biases[l](j) = rng.uniform(-0.5, 0.5);
        }
    }

    std::vector<Eigen::MatrixXd> grad_w;
    std::vector<Eigen::VectorXd> grad_b;
    long iter = 0;
    double loss = 0.0;
    for (; iter < config.max_iterations; ++iter) {
        loss = mlp_loss_and_gradient(model, Xs, ys, grad_w, grad_b);
        if (!std::isfinite(loss)) {
            throw Error(ErrorCode::MlpDiverged,
                        "non-finite loss at iteration " + std::to_string(iter));
        }
        double max_grad = 0.0;
        for (std::size_t l = 0; l < grad_w.size(); ++l) {
            max_grad = std::max(max_grad, grad_w[l].array().abs().maxCoeff());
            max_grad = std::max(max_grad, grad_b[l].array().abs().maxCoeff());
        }
        if (max_grad < config.stop_gradient_threshold) break;
        for (std::size_t l = 0; l < grad_w.size(); ++l) {
            model.weights[l] -= config.learning_rate * grad_w[l];
            model.biases[l] -= config.learning_rate * grad_b[l];
        }
    }
    model.iterations = iter;
    model.final_loss = loss;
    return model;
}

Eigen::VectorXd predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd a = (X.rowwise() - model.input_min.transpose()).array().rowwise() /
                        model.input_range.transpose().array();
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Eigen::MatrixXd z = (a * model.weights[l]).rowwise() + model.biases[l].transpose();
        a = l + 1 < model.weights.size() ? sigmoid(z) : z;
    }
    return model.target_min + model.target_range * a.col(0).array();
}

} // namespace lagcast::detail
