#include "lagcast/error.hpp"
#include "lagcast/regressors.hpp"
#include "lagcast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace lagcast::detail {

namespace {

struct NodeStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    double sse() const { return count == 0 ? 0.0 : sum_sq - sum * sum / double(count); }
    double mean() const { return count == 0 ? 0.0 : sum / double(count); }
};

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& data, const RfConfig& config, Rng rng)
        : data_(data), config_(config), rng_(rng) {}

    std::vector<TreeNode> build() {
        const auto n = static_cast<std::size_t>(data_.rows());
        auto n_sample = static_cast<std::size_t>(
            std::floor(config_.sample_fraction * static_cast<double>(n)));
        n_sample = std::max<std::size_t>(n_sample, 1);
        std::vector<std::size_t> rows = rng_.sample_without_replacement(n, n_sample);
        std::sort(rows.begin(), rows.end());  // stable traversal order

        nodes_.clear();
        grow(rows, 0);
        return std::move(nodes_);
    }

private:
    int grow(std::vector<std::size_t>& rows, int depth) {
        NodeStats stats;
        for (std::size_t r : rows) stats.add(data_.y(static_cast<Eigen::Index>(r)));

        int id = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{});
        nodes_[id].value = stats.mean();

        const bool depth_capped = config_.max_depth >= 0 && depth >= config_.max_depth;
        if (depth_capped || rows.size() < 2 * static_cast<std::size_t>(config_.min_node_size) ||
            stats.sse() <= 1e-12) {
            return id;
        }

        SplitChoice split = choose_split(rows, stats);
        if (!split.found) return id;

        std::vector<std::size_t> left, right;
        left.reserve(rows.size());
        right.reserve(rows.size());
        for (std::size_t r : rows) {
            if (data_.X(static_cast<Eigen::Index>(r), split.feature) <= split.threshold) {
                left.push_back(r);
            } else {
                right.push_back(r);
            }
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes_[id].feature = split.feature;
        nodes_[id].threshold = split.threshold;
        int left_id = grow(left, depth + 1);
        nodes_[id].left = left_id;
        int right_id = grow(right, depth + 1);
        nodes_[id].right = right_id;
        return id;
    }

    SplitChoice choose_split(const std::vector<std::size_t>& rows, const NodeStats& total) {
        const auto p = static_cast<std::size_t>(data_.cols());
        std::size_t mtry = config_.mtry > 0
                               ? std::min<std::size_t>(static_cast<std::size_t>(config_.mtry), p)
                               : std::max<std::size_t>(1, p / 3);
        std::vector<std::size_t> features = rng_.sample_without_replacement(p, mtry);
        const auto min_child = static_cast<std::size_t>(config_.min_node_size);

        SplitChoice best;
        std::vector<std::pair<double, double>> points(rows.size());  // (feature value, target)
        for (std::size_t f : features) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                auto r = static_cast<Eigen::Index>(rows[i]);
                points[i] = {data_.X(r, static_cast<Eigen::Index>(f)), data_.y(r)};
            }
            std::sort(points.begin(), points.end());

            NodeStats left;
            for (std::size_t i = 0; i + 1 < points.size(); ++i) {
                left.add(points[i].second);
                if (points[i].first == points[i + 1].first) continue;
                std::size_t n_right = points.size() - left.count;
                if (left.count < min_child || n_right < min_child) continue;

                double right_sum = total.sum - left.sum;
                double right_sq = total.sum_sq - left.sum_sq;
                double sse_right = right_sq - right_sum * right_sum / double(n_right);
                double gain = total.sse() - left.sse() - sse_right;
                if (gain <= 0.0) continue;
                double threshold = 0.5 * (points[i].first + points[i + 1].first);

                bool better = !best.found || gain > best.gain + 1e-12;
                bool tied = best.found && std::fabs(gain - best.gain) <= 1e-12 &&
                            (static_cast<int>(f) < best.feature ||
                             (static_cast<int>(f) == best.feature && threshold < best.threshold));
                if (better || tied) {
                    best.found = true;
                    best.feature = static_cast<int>(f);
                    best.threshold = threshold;
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    const FeatureMatrix& data_;
    const RfConfig& config_;
    Rng rng_;
    std::vector<TreeNode> nodes_;
};

double predict_tree(const std::vector<TreeNode>& tree, const Eigen::MatrixXd& X, Eigen::Index row) {
    int id = 0;
    while (tree[static_cast<std::size_t>(id)].feature >= 0) {
        const TreeNode& node = tree[static_cast<std::size_t>(id)];
        id = X(row, node.feature) <= node.threshold ? node.left : node.right;
    }
    return tree[static_cast<std::size_t>(id)].value;
}

} // namespace

RfModel fit_rf(const RfConfig& config, const FeatureMatrix& data) {
    if (config.n_trees < 1 || config.sample_fraction <= 0.0 || config.sample_fraction > 1.0 ||
        config.min_node_size < 1) {
        throw Error(ErrorCode::InvalidConfig, "bad random forest configuration");
    }
    if (config.mtry > data.cols()) {
        throw Error(ErrorCode::InvalidConfig, "mtry exceeds the feature count");
    }
    validate_features(data, true);

    RfModel model;
    model.config = config;
    model.trees.resize(static_cast<std::size_t>(config.n_trees));

    // Per-tree seeds depend only on (master seed, tree index), so the forest is
    // identical no matter how trees are scheduled across threads.
    auto build_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            TreeBuilder builder(data, config, Rng(derive_seed(config.seed, t)));
            model.trees[t] = builder.build();
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t n_workers = std::min<std::size_t>(hw == 0 ? 1 : hw, model.trees.size());
    if (n_workers <= 1) {
        build_range(0, model.trees.size());
    } else {
        std::vector<std::future<void>> futures;
        std::size_t chunk = (model.trees.size() + n_workers - 1) / n_workers;
        for (std::size_t w = 0; w < n_workers; ++w) {
            std::size_t begin = w * chunk;
            std::size_t end = std::min(begin + chunk, model.trees.size());
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, build_range, begin, end));
        }
        for (auto& f : futures) f.get();
    }
    return model;
}

Eigen::VectorXd predict_rf(const RfModel& model, const Eigen::MatrixXd& X) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
    for (const auto& tree : model.trees) {
        for (Eigen::Index r = 0; r < X.rows(); ++r) {
            out(r) += predict_tree(tree, X, r);
        }
    }
    return out / double(model.trees.size());
}

} // namespace lagcast::detail
