#include "lagcast/error.hpp"
#include "lagcast/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lagcast::detail {

namespace {

// Dual of epsilon-SVR over 2n box variables: entries s < n carry alpha_s with
// sign +1 and linear term eps - y_s, entries s >= n carry alpha*_{s-n} with
// sign -1 and linear term eps + y_{s-n}. Pairs are optimized jointly under the
// sum(z * lambda) = 0 constraint, maximal violating pair first.
class SmoSolver {
public:
    SmoSolver(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const SvrConfig& config)
        : K_(K), n_(K.rows()), config_(config) {
        lambda_ = Eigen::VectorXd::Zero(2 * n_);
        gradient_.resize(2 * n_);
        linear_.resize(2 * n_);
        for (Eigen::Index s = 0; s < n_; ++s) {
            linear_(s) = config.epsilon - y(s);
            linear_(n_ + s) = config.epsilon + y(s);
        }
        gradient_ = linear_;  // gradient of 0.5 l'Ql + p'l at l = 0
    }

    int run(std::vector<double>* trace) {
        int iter = 0;
        if (trace) trace->push_back(-objective());
        while (iter < config_.max_passes) {
            auto [i, j, violation] = select_pair();
            if (i < 0 || violation < config_.tolerance) break;
            update_pair(i, j);
            ++iter;
            if (trace) trace->push_back(-objective());
        }
        return iter;
    }

    /// beta_i = alpha_i - alpha_i^*.
    Eigen::VectorXd beta() const {
        return lambda_.head(n_) - lambda_.tail(n_);
    }

    double bias() const {
        double sum = 0.0;
        int free_count = 0;
        for (Eigen::Index s = 0; s < 2 * n_; ++s) {
            if (lambda_(s) > 0.0 && lambda_(s) < config_.cost) {
                sum += -sign(s) * gradient_(s);
                ++free_count;
            }
        }
        if (free_count > 0) return sum / free_count;

        double up = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (Eigen::Index s = 0; s < 2 * n_; ++s) {
            double value = -sign(s) * gradient_(s);
            if (in_up(s)) up = std::max(up, value);
            if (in_low(s)) low = std::min(low, value);
        }
        return 0.5 * (up + low);
    }

private:
    static double sign_at(Eigen::Index s, Eigen::Index n) { return s < n ? 1.0 : -1.0; }
    double sign(Eigen::Index s) const { return sign_at(s, n_); }
    double kernel(Eigen::Index s, Eigen::Index t) const {
        return K_(s % n_, t % n_);
    }
    double q(Eigen::Index s, Eigen::Index t) const {
        return sign(s) * sign(t) * kernel(s, t);
    }
    bool in_up(Eigen::Index s) const {
        return sign(s) > 0 ? lambda_(s) < config_.cost : lambda_(s) > 0.0;
    }
    bool in_low(Eigen::Index s) const {
        return sign(s) > 0 ? lambda_(s) > 0.0 : lambda_(s) < config_.cost;
    }

    std::tuple<Eigen::Index, Eigen::Index, double> select_pair() const {
        Eigen::Index best_i = -1, best_j = -1;
        double up = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (Eigen::Index s = 0; s < 2 * n_; ++s) {
            double value = -sign(s) * gradient_(s);
            if (in_up(s) && value > up) {
                up = value;
                best_i = s;
            }
            if (in_low(s) && value < low) {
                low = value;
                best_j = s;
            }
        }
        if (best_i < 0 || best_j < 0) return {-1, -1, 0.0};
        return {best_i, best_j, up - low};
    }

    void update_pair(Eigen::Index i, Eigen::Index j) {
        const double C = config_.cost;
        double old_i = lambda_(i);
        double old_j = lambda_(j);

        // denominator of the one-dimensional minimizer along the feasible
        // direction; identical for both sign patterns
        double quad = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
        quad = std::max(quad, 1e-12);

        if (sign(i) != sign(j)) {
            double delta = (-gradient_(i) - gradient_(j)) / quad;
            double diff = lambda_(i) - lambda_(j);
            lambda_(i) += delta;
            lambda_(j) += delta;
            if (diff > 0.0) {
                if (lambda_(j) < 0.0) { lambda_(j) = 0.0; lambda_(i) = diff; }
            } else {
                if (lambda_(i) < 0.0) { lambda_(i) = 0.0; lambda_(j) = -diff; }
            }
            if (diff > 0.0) {
                if (lambda_(i) > C) { lambda_(i) = C; lambda_(j) = C - diff; }
            } else {
                if (lambda_(j) > C) { lambda_(j) = C; lambda_(i) = C + diff; }
            }
        } else {
            double delta = (gradient_(i) - gradient_(j)) / quad;
            double total = lambda_(i) + lambda_(j);
            lambda_(i) -= delta;
            lambda_(j) += delta;
            if (total > C) {
                if (lambda_(i) > C) { lambda_(i) = C; lambda_(j) = total - C; }
            } else {
                if (lambda_(j) < 0.0) { lambda_(j) = 0.0; lambda_(i) = total; }
            }
            if (total > C) {
                if (lambda_(j) > C) { lambda_(j) = C; lambda_(i) = total - C; }
            } else {
                if (lambda_(i) < 0.0) { lambda_(i) = 0.0; lambda_(j) = total; }
            }
        }

        double delta_i = lambda_(i) - old_i;
        double delta_j = lambda_(j) - old_j;
        if (delta_i == 0.0 && delta_j == 0.0) return;
        for (Eigen::Index s = 0; s < 2 * n_; ++s) {
            gradient_(s) += q(s, i) * delta_i + q(s, j) * delta_j;
        }
    }

    double objective() const {
        // 0.5 l'Ql + p'l, using Ql = G - p
        return 0.5 * lambda_.dot(gradient_ + linear_);
    }

    const Eigen::MatrixXd& K_;
    Eigen::Index n_;
    SvrConfig config_;
    Eigen::VectorXd lambda_;
    Eigen::VectorXd gradient_;
    Eigen::VectorXd linear_;
};

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma) {
    Eigen::VectorXd a_sq = A.rowwise().squaredNorm();
    Eigen::VectorXd b_sq = B.rowwise().squaredNorm();
    Eigen::MatrixXd d = a_sq.replicate(1, B.rows()) + b_sq.transpose().replicate(A.rows(), 1) -
                        2.0 * A * B.transpose();
    return (-gamma * d.array().max(0.0)).exp();
}

} // namespace

SvrModel fit_svr(const SvrConfig& config, const FeatureMatrix& data) {
    if (!(config.cost > 0.0) || !(config.rbf_gamma > 0.0) || config.epsilon < 0.0 ||
        !(config.tolerance > 0.0) || config.max_passes < 1) {
        throw Error(ErrorCode::InvalidConfig, "bad SVR configuration");
    }
    validate_features(data, true);

    SvrModel model;
    model.config = config;
    model.feature_mean = data.X.colwise().mean();
    Eigen::MatrixXd centered = data.X.rowwise() - model.feature_mean.transpose();
    model.feature_scale =
        (centered.array().square().colwise().sum() / double(data.X.rows())).sqrt();
    for (Eigen::Index j = 0; j < model.feature_scale.size(); ++j) {
        if (model.feature_scale(j) <= 0.0) model.feature_scale(j) = 1.0;
    }
    Eigen::MatrixXd Xs = centered.array().rowwise() / model.feature_scale.transpose().array();

    Eigen::MatrixXd K = rbf_kernel(Xs, Xs, config.rbf_gamma);
    SmoSolver solver(K, data.y, config);
    model.iterations = solver.run(config.record_objective ? &model.objective_trace : nullptr);
    Eigen::VectorXd beta = solver.beta();
    model.bias = solver.bias();

    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        if (beta(i) != 0.0) sv.push_back(i);
    }
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), Xs.cols());
    model.dual_coefs.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t i = 0; i < sv.size(); ++i) {
        model.support_vectors.row(static_cast<Eigen::Index>(i)) = Xs.row(sv[i]);
        model.dual_coefs(static_cast<Eigen::Index>(i)) = beta(sv[i]);
    }
    return model;
}

Eigen::VectorXd predict_svr(const SvrModel& model, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd Xs = (X.rowwise() - model.feature_mean.transpose()).array().rowwise() /
                         model.feature_scale.transpose().array();
    if (model.dual_coefs.size() == 0) {
        return Eigen::VectorXd::Constant(X.rows(), model.bias);
    }
    Eigen::MatrixXd K = rbf_kernel(Xs, model.support_vectors, model.config.rbf_gamma);
    return (K * model.dual_coefs).array() + model.bias;
}

} // namespace lagcast::detail
