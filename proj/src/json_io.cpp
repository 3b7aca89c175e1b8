#include "lagcast/json_io.hpp"

#include "lagcast/error.hpp"

#include <charconv>
#include <cmath>

namespace lagcast {

using nlohmann::json;

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols_hint = -1) {
    if (j.empty()) {
        return Eigen::MatrixXd(0, cols_hint < 0 ? 0 : cols_hint);
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()),
                      static_cast<Eigen::Index>(j.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

json spec_to_json(const LagSpec& spec) {
    json exog = json::array();
    for (const auto& [role, p] : spec.exog) {
        exog.push_back({{"role", role.name()}, {"p", p}});
    }
    return {{"q", spec.q},
            {"exog", exog},
            {"removed", std::vector<std::string>(spec.removed.begin(), spec.removed.end())},
            {"intercept", spec.include_intercept}};
}

LagSpec spec_from_json(const json& j) {
    LagSpec spec;
    spec.q = j.at("q").get<int>();
    for (const auto& e : j.at("exog")) {
        spec.exog.emplace_back(Role::from_name(e.at("role").get<std::string>()),
                               e.at("p").get<int>());
    }
    for (const auto& r : j.at("removed")) spec.removed.insert(r.get<std::string>());
    spec.include_intercept = j.at("intercept").get<bool>();
    return spec;
}

json metrics_to_json(const MetricsReport& report) {
    json out{{"me", report.me},  {"rmse", report.rmse},        {"mae", report.mae},
             {"n", report.n},    {"zero_dropped", report.zero_dropped}};
    out["mpe"] = report.mpe ? json(*report.mpe) : json(nullptr);
    out["mape"] = report.mape ? json(*report.mape) : json(nullptr);
    out["band"] = report.band ? json(band_name(*report.band)) : json(nullptr);
    return out;
}

} // namespace

json ardl_fit_to_json(const ArdlFit& fit) {
    json terms = json::array();
    for (const auto& term : fit.terms) {
        terms.push_back({{"label", term.label},
                         {"estimate", term.coefficient},
                         {"std_error", term.std_error},
                         {"t_value", term.t_value},
                         {"p_value", term.p_value}});
    }
    return {{"response", fit.response.name()},
            {"spec", spec_to_json(fit.spec)},
            {"terms", terms},
            {"residual_std_error", fit.residual_std_error},
            {"r_squared", fit.r_squared},
            {"adj_r_squared", fit.adj_r_squared},
            {"f_statistic",
             {{"value", fit.f_statistic.value},
              {"df1", fit.f_statistic.df1},
              {"df2", fit.f_statistic.df2},
              {"p_value", fit.f_statistic.p_value}}},
            {"n_obs", fit.n_obs}};
}

ArdlFit ardl_fit_from_json(const json& j) {
    ArdlFit fit;
    fit.response = Role::from_name(j.at("response").get<std::string>());
    fit.spec = spec_from_json(j.at("spec"));
    for (const auto& t : j.at("terms")) {
        OlsTerm term;
        term.label = t.at("label").get<std::string>();
        term.coefficient = t.at("estimate").get<double>();
        term.std_error = t.at("std_error").get<double>();
        term.t_value = t.at("t_value").get<double>();
        term.p_value = t.at("p_value").get<double>();
        fit.terms.push_back(std::move(term));
    }
    fit.residual_std_error = j.at("residual_std_error").get<double>();
    fit.r_squared = j.at("r_squared").get<double>();
    fit.adj_r_squared = j.at("adj_r_squared").get<double>();
    fit.f_statistic.value = j.at("f_statistic").at("value").is_null()
                                ? std::numeric_limits<double>::quiet_NaN()
                                : j.at("f_statistic").at("value").get<double>();
    fit.f_statistic.df1 = j.at("f_statistic").at("df1").get<double>();
    fit.f_statistic.df2 = j.at("f_statistic").at("df2").get<double>();
    fit.f_statistic.p_value = j.at("f_statistic").at("p_value").is_null()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : j.at("f_statistic").at("p_value").get<double>();
    fit.n_obs = j.at("n_obs").get<std::size_t>();
    // residuals are not part of the report document
    return fit;
}

json comparison_to_json(const ComparisonTable& table) {
    auto rows_to_json = [](const std::vector<ComparisonRow>& rows) {
        json out = json::array();
        for (const auto& row : rows) {
            json r{{"model", regressor_kind_name(row.kind)}, {"split", row.split}};
            if (row.failed) {
                r["failed"] = true;
                r["error"] = row.error;
                r["metrics"] = nullptr;
            } else {
                r["failed"] = false;
                r["metrics"] = metrics_to_json(row.report);
            }
            out.push_back(std::move(r));
        }
        return out;
    };
    return {{"series", table.series_name},
            {"seed", table.seed},
            {"rows", rows_to_json(table.rows)},
            {"cross_validation", rows_to_json(table.cv_rows)}};
}

std::string comparison_to_csv(const ComparisonTable& table) {
    std::string out = "model,split,ME,RMSE,MAE,MPE,MAPE\n";
    for (const auto& row : table.rows) {
        out += regressor_kind_name(row.kind);
        out += ',';
        out += row.split;
        if (row.failed) {
            out += ",nan,nan,nan,nan,nan\n";
            continue;
        }
        out += ',' + format_double(row.report.me);
        out += ',' + format_double(row.report.rmse);
        out += ',' + format_double(row.report.mae);
        out += ',' + (row.report.mpe ? format_double(*row.report.mpe) : "nan");
        out += ',' + (row.report.mape ? format_double(*row.report.mape) : "nan");
        out += '\n';
    }
    return out;
}

json regressor_to_json(const TrainedRegressor& model) {
    json out{{"format_version", 1},
             {"kind", regressor_kind_name(model.kind)},
             {"feature_labels", model.feature_labels},
             {"seed", model.seed}};
    if (const auto* rf = std::get_if<RfModel>(&model.model)) {
        out["config"] = {{"n_trees", rf->config.n_trees},
                         {"mtry", rf->config.mtry},
                         {"sample_fraction", rf->config.sample_fraction},
                         {"min_node_size", rf->config.min_node_size},
                         {"max_depth", rf->config.max_depth},
                         {"seed", rf->config.seed}};
        json trees = json::array();
        for (const auto& tree : rf->trees) {
            json nodes = json::array();
            for (const auto& node : tree) {
                nodes.push_back({node.feature, node.threshold, node.left, node.right, node.value});
            }
            trees.push_back(std::move(nodes));
        }
        out["trees"] = std::move(trees);
    } else if (const auto* svr = std::get_if<SvrModel>(&model.model)) {
        out["config"] = {{"cost", svr->config.cost},
                         {"rbf_gamma", svr->config.rbf_gamma},
                         {"epsilon", svr->config.epsilon},
                         {"tolerance", svr->config.tolerance},
                         {"max_passes", svr->config.max_passes}};
        out["support_vectors"] = matrix_to_json(svr->support_vectors);
        out["dual_coefs"] = vector_to_json(svr->dual_coefs);
        out["bias"] = svr->bias;
        out["feature_mean"] = vector_to_json(svr->feature_mean);
        out["feature_scale"] = vector_to_json(svr->feature_scale);
        out["iterations"] = svr->iterations;
    } else if (const auto* knn = std::get_if<KnnModel>(&model.model)) {
        out["config"] = {{"k", knn->config.k}};
        out["k"] = knn->k;
        out["train_X"] = matrix_to_json(knn->train_X);
        out["train_y"] = vector_to_json(knn->train_y);
        out["feature_mean"] = vector_to_json(knn->feature_mean);
        out["feature_scale"] = vector_to_json(knn->feature_scale);
    } else {
        const auto& mlp = std::get<MlpModel>(model.model);
        out["config"] = {{"hidden_layers", mlp.config.hidden_layers},
                         {"learning_rate", mlp.config.learning_rate},
                         {"stop_gradient_threshold", mlp.config.stop_gradient_threshold},
                         {"max_iterations", mlp.config.max_iterations},
                         {"seed", mlp.config.seed}};
        json weights = json::array();
        json biases = json::array();
        for (const auto& w : mlp.weights) weights.push_back(matrix_to_json(w));
        for (const auto& b : mlp.biases) biases.push_back(vector_to_json(b));
        out["weights"] = std::move(weights);
        out["biases"] = std::move(biases);
        out["input_min"] = vector_to_json(mlp.input_min);
        out["input_range"] = vector_to_json(mlp.input_range);
        out["target_min"] = mlp.target_min;
        out["target_range"] = mlp.target_range;
        out["iterations"] = mlp.iterations;
    }
    return out;
}

TrainedRegressor regressor_from_json(const json& j) {
    if (j.at("format_version").get<int>() != 1) {
        throw Error(ErrorCode::InvalidConfig, "unsupported model document version");
    }
    TrainedRegressor model;
    model.kind = regressor_kind_from_name(j.at("kind").get<std::string>());
    model.feature_labels = j.at("feature_labels").get<std::vector<std::string>>();
    model.seed = j.at("seed").get<std::uint64_t>();
    const json& config = j.at("config");

    if (model.kind == RegressorKind::RF) {
        RfModel rf;
        rf.config.n_trees = config.at("n_trees").get<int>();
        rf.config.mtry = config.at("mtry").get<int>();
        rf.config.sample_fraction = config.at("sample_fraction").get<double>();
        rf.config.min_node_size = config.at("min_node_size").get<int>();
        rf.config.max_depth = config.at("max_depth").get<int>();
        rf.config.seed = config.at("seed").get<std::uint64_t>();
        for (const auto& tree : j.at("trees")) {
            std::vector<TreeNode> nodes;
            nodes.reserve(tree.size());
            for (const auto& n : tree) {
                nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(), n[2].get<int>(),
                                         n[3].get<int>(), n[4].get<double>()});
            }
            rf.trees.push_back(std::move(nodes));
        }
        model.model = std::move(rf);
    } else if (model.kind == RegressorKind::SVR) {
        SvrModel svr;
        svr.config.cost = config.at("cost").get<double>();
        svr.config.rbf_gamma = config.at("rbf_gamma").get<double>();
        svr.config.epsilon = config.at("epsilon").get<double>();
        svr.config.tolerance = config.at("tolerance").get<double>();
        svr.config.max_passes = config.at("max_passes").get<int>();
        svr.feature_mean = vector_from_json(j.at("feature_mean"));
        svr.support_vectors =
            matrix_from_json(j.at("support_vectors"), svr.feature_mean.size());
        svr.dual_coefs = vector_from_json(j.at("dual_coefs"));
        svr.bias = j.at("bias").get<double>();
        svr.feature_scale = vector_from_json(j.at("feature_scale"));
        svr.iterations = j.at("iterations").get<int>();
        model.model = std::move(svr);
    } else if (model.kind == RegressorKind::KNN) {
        KnnModel knn;
        knn.config.k = config.at("k").get<int>();
        knn.k = j.at("k").get<int>();
        knn.train_X = matrix_from_json(j.at("train_X"));
        knn.train_y = vector_from_json(j.at("train_y"));
        knn.feature_mean = vector_from_json(j.at("feature_mean"));
        knn.feature_scale = vector_from_json(j.at("feature_scale"));
        model.model = std::move(knn);
    } else {
        MlpModel mlp;
        mlp.config.hidden_layers = config.at("hidden_layers").get<std::vector<int>>();
        mlp.config.learning_rate = config.at("learning_rate").get<double>();
        mlp.config.stop_gradient_threshold = config.at("stop_gradient_threshold").get<double>();
        mlp.config.max_iterations = config.at("max_iterations").get<long>();
        mlp.config.seed = config.at("seed").get<std::uint64_t>();
        for (const auto& w : j.at("weights")) mlp.weights.push_back(matrix_from_json(w));
        for (const auto& b : j.at("biases")) mlp.biases.push_back(vector_from_json(b));
        mlp.input_min = vector_from_json(j.at("input_min"));
        mlp.input_range = vector_from_json(j.at("input_range"));
        mlp.target_min = j.at("target_min").get<double>();
        mlp.target_range = j.at("target_range").get<double>();
        mlp.iterations = j.at("iterations").get<long>();
        model.model = std::move(mlp);
    }
    return model;
}

json forecast_to_json(const ForecastResult& result) {
    json roles = json::array();
    for (const auto& [role, points] : result.forecasts) {
        json list = json::array();
        for (const auto& p : points) {
            list.push_back({{"date", p.date.to_iso()}, {"forecast", p.value}});
        }
        roles.push_back({{"role", role.name()}, {"points", std::move(list)}});
    }
    return {{"horizon", result.horizon}, {"backend", result.backend}, {"forecasts", roles}};
}

std::string forecast_to_csv(const ForecastResult& result) {
    std::string out = "date,role,forecast\n";
    if (result.forecasts.empty()) return out;
    std::size_t steps = result.forecasts.front().second.size();
    for (std::size_t i = 0; i < steps; ++i) {
        for (const auto& [role, points] : result.forecasts) {
            out += points[i].date.to_iso();
            out += ',' + role.name();
            out += ',' + format_double(points[i].value);
            out += '\n';
        }
    }
    return out;
}

} // namespace lagcast
