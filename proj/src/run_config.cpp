#include "lagcast/run_config.hpp"

#include "lagcast/error.hpp"

#include <cstdlib>
#include <fstream>

namespace lagcast {

using nlohmann::json;

SnapshotManifest RunConfig::manifest() const {
    SnapshotManifest m;
    auto add = [&](const Role& role, const std::string& source, bool remote) {
        if (source.empty()) {
            throw Error(ErrorCode::InvalidConfig, "no source configured for " + role.name());
        }
        m.sources[role] = remote ? SnapshotSource::remote(source) : SnapshotSource::local(source);
    };
    add(Role::deaths(), deaths_source, deaths_remote);
    add(Role::recovered(), recovered_source, recovered_remote);
    add(Role::confirmed(), confirmed_source, confirmed_remote);
    if (window_start && window_end) {
        m.date_window = {{*window_start, *window_end}};
    } else if (window_start || window_end) {
        throw Error(ErrorCode::InvalidConfig, "window_start and window_end must come together");
    }
    m.cache_dir = cache_dir;
    if (const char* env = std::getenv("LAGCAST_CACHE_DIR"); env && *env) {
        m.cache_dir = env;
    }
    m.offline = offline;
    return m;
}

MlpConfig RunConfig::mlp_for(const Role& role) const {
    MlpConfig c = mlp_base;
    switch (role.kind()) {
        case RoleKind::Deaths: c.hidden_layers = mlp_hidden_deaths; break;
        case RoleKind::Recovered: c.hidden_layers = mlp_hidden_recovered; break;
        case RoleKind::Confirmed: c.hidden_layers = mlp_hidden_confirmed; break;
        case RoleKind::Other: break;
    }
    return c;
}

namespace {

enum class KeyType { String, Number, Integer, Boolean, IntArray };

struct KeyInfo {
    const char* name;
    KeyType type;
    const char* doc;
};

const KeyInfo kSchema[] = {
    {"deaths_path", KeyType::String, "local CSV for the deaths role"},
    {"recovered_path", KeyType::String, "local CSV for the recovered role"},
    {"confirmed_path", KeyType::String, "local CSV for the confirmed role"},
    {"deaths_url", KeyType::String, "remote CSV for the deaths role"},
    {"recovered_url", KeyType::String, "remote CSV for the recovered role"},
    {"confirmed_url", KeyType::String, "remote CSV for the confirmed role"},
    {"window_start", KeyType::String, "first date of the analysis window, YYYY-MM-DD"},
    {"window_end", KeyType::String, "last date of the analysis window, YYYY-MM-DD"},
    {"split_ratio", KeyType::Number, "training fraction of a chronological split"},
    {"split_date", KeyType::String, "last training date, YYYY-MM-DD; wins over split_ratio"},
    {"alpha", KeyType::Number, "significance level for backward elimination"},
    {"seed", KeyType::Integer, "master seed; all randomness derives from it"},
    {"horizon", KeyType::Integer, "forecast steps"},
    {"out_dir", KeyType::String, "output directory"},
    {"format", KeyType::String, "csv | json | both"},
    {"offline", KeyType::Boolean, "forbid network access"},
    {"cache_dir", KeyType::String, "fetch cache directory (env LAGCAST_CACHE_DIR overrides)"},
    {"clamp_negative_daily", KeyType::Boolean, "clamp negative daily increments to zero"},
    {"zero_actual_policy", KeyType::String, "error | drop: zero actuals in percentage metrics"},
    {"cv_folds", KeyType::Integer, "cross-validation folds"},
    {"cv_scheme", KeyType::String, "shuffled | blocks"},
    {"forecast_backend", KeyType::String, "ardl | rf | svr | knn | mlp"},
    {"lag_search", KeyType::Boolean, "search lag orders instead of using the explicit ones"},
    {"max_q", KeyType::Integer, "lag search bound for response lags"},
    {"max_p", KeyType::Integer, "lag search bound for exogenous lags"},
    {"deaths_q", KeyType::Integer, "deaths model: response lag order"},
    {"deaths_p_confirmed", KeyType::Integer, "deaths model: confirmed lag order"},
    {"deaths_p_recovered", KeyType::Integer, "deaths model: recovered lag order"},
    {"confirmed_q", KeyType::Integer, "confirmed model: response lag order"},
    {"confirmed_p_recovered", KeyType::Integer, "confirmed model: recovered lag order"},
    {"recovered_q", KeyType::Integer, "recovered model: response lag order"},
    {"recovered_p_confirmed", KeyType::Integer, "recovered model: confirmed lag order"},
    {"rf_trees", KeyType::Integer, "random forest: number of trees"},
    {"rf_mtry", KeyType::Integer, "random forest: features per split, 0 = p/3"},
    {"rf_sample_fraction", KeyType::Number, "random forest: subsample fraction"},
    {"rf_min_node_size", KeyType::Integer, "random forest: minimum terminal node size"},
    {"rf_max_depth", KeyType::Integer, "random forest: depth cap, -1 = unlimited"},
    {"svr_cost", KeyType::Number, "SVR: cost C"},
    {"svr_gamma", KeyType::Number, "SVR: RBF kernel width"},
    {"svr_epsilon", KeyType::Number, "SVR: insensitivity tube"},
    {"svr_tolerance", KeyType::Number, "SVR: solver KKT tolerance"},
    {"svr_max_passes", KeyType::Integer, "SVR: optimization pass cap"},
    {"knn_k", KeyType::Integer, "KNN: neighbor count, 0 = round(sqrt(n))"},
    {"mlp_hidden_deaths", KeyType::IntArray, "MLP widths for the deaths model"},
    {"mlp_hidden_recovered", KeyType::IntArray, "MLP widths for the recovered model"},
    {"mlp_hidden_confirmed", KeyType::IntArray, "MLP widths for the confirmed model"},
    {"mlp_learning_rate", KeyType::Number, "MLP: gradient descent step"},
    {"mlp_threshold", KeyType::Number, "MLP: stop when max |gradient| falls below"},
    {"mlp_max_iterations", KeyType::Integer, "MLP: iteration cap"},
};

const char* type_name(KeyType t) {
    switch (t) {
        case KeyType::String: return "string";
        case KeyType::Number: return "number";
        case KeyType::Integer: return "integer";
        case KeyType::Boolean: return "boolean";
        case KeyType::IntArray: return "array of integers";
    }
    return "?";
}

void check_type(const std::string& key, KeyType type, const json& value) {
    bool ok = false;
    switch (type) {
        case KeyType::String: ok = value.is_string(); break;
        case KeyType::Number: ok = value.is_number(); break;
        case KeyType::Integer: ok = value.is_number_integer(); break;
        case KeyType::Boolean: ok = value.is_boolean(); break;
        case KeyType::IntArray:
            ok = value.is_array();
            if (ok) {
                for (const auto& v : value) ok = ok && v.is_number_integer();
            }
            break;
    }
    if (!ok) {
        throw Error(ErrorCode::InvalidConfig,
                    "key '" + key + "' must be a " + std::string(type_name(type)));
    }
}

} // namespace

void apply_config_json(RunConfig& config, const json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::InvalidConfig, "config document must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        const KeyInfo* info = nullptr;
        for (const auto& k : kSchema) {
            if (key == k.name) {
                info = &k;
                break;
            }
        }
        if (!info) {
            throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
        }
        check_type(key, info->type, value);
    }

    RunConfig next = config;
    auto get_enum = [&](const char* key, std::initializer_list<const char*> allowed) {
        std::string v = doc.at(key).get<std::string>();
        for (const char* a : allowed) {
            if (v == a) return v;
        }
        throw Error(ErrorCode::InvalidConfig, "bad value '" + v + "' for '" + key + "'");
    };

    if (doc.contains("deaths_path")) { next.deaths_source = doc["deaths_path"]; next.deaths_remote = false; }
    if (doc.contains("recovered_path")) { next.recovered_source = doc["recovered_path"]; next.recovered_remote = false; }
    if (doc.contains("confirmed_path")) { next.confirmed_source = doc["confirmed_path"]; next.confirmed_remote = false; }
    if (doc.contains("deaths_url")) { next.deaths_source = doc["deaths_url"]; next.deaths_remote = true; }
    if (doc.contains("recovered_url")) { next.recovered_source = doc["recovered_url"]; next.recovered_remote = true; }
    if (doc.contains("confirmed_url")) { next.confirmed_source = doc["confirmed_url"]; next.confirmed_remote = true; }
    if (doc.contains("window_start")) next.window_start = Date::parse_iso(doc["window_start"]);
    if (doc.contains("window_end")) next.window_end = Date::parse_iso(doc["window_end"]);
    if (doc.contains("split_ratio")) next.split = SplitSpec::ratio(doc["split_ratio"].get<double>());
    if (doc.contains("split_date")) {
        next.split = SplitSpec::date_boundary(Date::parse_iso(doc["split_date"]));
    }
    if (doc.contains("alpha")) next.alpha = doc["alpha"].get<double>();
    if (doc.contains("seed")) next.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("horizon")) next.horizon = doc["horizon"].get<int>();
    if (doc.contains("out_dir")) next.out_dir = doc["out_dir"];
    if (doc.contains("format")) {
        std::string f = get_enum("format", {"csv", "json", "both"});
        next.format = f == "csv" ? OutputFormat::Csv
                                 : (f == "json" ? OutputFormat::Json : OutputFormat::Both);
    }
    if (doc.contains("offline")) next.offline = doc["offline"].get<bool>();
    if (doc.contains("cache_dir")) next.cache_dir = doc["cache_dir"];
    if (doc.contains("clamp_negative_daily"))
        next.clamp_negative_daily = doc["clamp_negative_daily"].get<bool>();
    if (doc.contains("zero_actual_policy")) {
        std::string p = get_enum("zero_actual_policy", {"error", "drop"});
        next.zero_policy =
            p == "error" ? ZeroActualPolicy::Error : ZeroActualPolicy::DropForPercent;
    }
    if (doc.contains("cv_folds")) next.cv_folds = doc["cv_folds"].get<int>();
    if (doc.contains("cv_scheme")) {
        std::string s = get_enum("cv_scheme", {"shuffled", "blocks"});
        next.cv_scheme = s == "shuffled" ? FoldScheme::Shuffled : FoldScheme::ContiguousBlocks;
    }
    if (doc.contains("forecast_backend")) {
        next.forecast_backend =
            get_enum("forecast_backend", {"ardl", "rf", "svr", "knn", "mlp"});
    }
    if (doc.contains("lag_search")) next.lag_search = doc["lag_search"].get<bool>();
    if (doc.contains("max_q")) next.max_q = doc["max_q"].get<int>();
    if (doc.contains("max_p")) next.max_p = doc["max_p"].get<int>();
    if (doc.contains("deaths_q")) next.lags.deaths_q = doc["deaths_q"].get<int>();
    if (doc.contains("deaths_p_confirmed"))
        next.lags.deaths_p_confirmed = doc["deaths_p_confirmed"].get<int>();
    if (doc.contains("deaths_p_recovered"))
        next.lags.deaths_p_recovered = doc["deaths_p_recovered"].get<int>();
    if (doc.contains("confirmed_q")) next.lags.confirmed_q = doc["confirmed_q"].get<int>();
    if (doc.contains("confirmed_p_recovered"))
        next.lags.confirmed_p_recovered = doc["confirmed_p_recovered"].get<int>();
    if (doc.contains("recovered_q")) next.lags.recovered_q = doc["recovered_q"].get<int>();
    if (doc.contains("recovered_p_confirmed"))
        next.lags.recovered_p_confirmed = doc["recovered_p_confirmed"].get<int>();
    if (doc.contains("rf_trees")) next.rf.n_trees = doc["rf_trees"].get<int>();
    if (doc.contains("rf_mtry")) next.rf.mtry = doc["rf_mtry"].get<int>();
    if (doc.contains("rf_sample_fraction"))
        next.rf.sample_fraction = doc["rf_sample_fraction"].get<double>();
    if (doc.contains("rf_min_node_size"))
        next.rf.min_node_size = doc["rf_min_node_size"].get<int>();
    if (doc.contains("rf_max_depth")) next.rf.max_depth = doc["rf_max_depth"].get<int>();
    if (doc.contains("svr_cost")) next.svr.cost = doc["svr_cost"].get<double>();
    if (doc.contains("svr_gamma")) next.svr.rbf_gamma = doc["svr_gamma"].get<double>();
    if (doc.contains("svr_epsilon")) next.svr.epsilon = doc["svr_epsilon"].get<double>();
    if (doc.contains("svr_tolerance")) next.svr.tolerance = doc["svr_tolerance"].get<double>();
    if (doc.contains("svr_max_passes")) next.svr.max_passes = doc["svr_max_passes"].get<int>();
    if (doc.contains("knn_k")) next.knn.k = doc["knn_k"].get<int>();
    if (doc.contains("mlp_hidden_deaths"))
        next.mlp_hidden_deaths = doc["mlp_hidden_deaths"].get<std::vector<int>>();
    if (doc.contains("mlp_hidden_recovered"))
        next.mlp_hidden_recovered = doc["mlp_hidden_recovered"].get<std::vector<int>>();
    if (doc.contains("mlp_hidden_confirmed"))
        next.mlp_hidden_confirmed = doc["mlp_hidden_confirmed"].get<std::vector<int>>();
    if (doc.contains("mlp_learning_rate"))
        next.mlp_base.learning_rate = doc["mlp_learning_rate"].get<double>();
    if (doc.contains("mlp_threshold"))
        next.mlp_base.stop_gradient_threshold = doc["mlp_threshold"].get<double>();
    if (doc.contains("mlp_max_iterations"))
        next.mlp_base.max_iterations = doc["mlp_max_iterations"].get<long>();

    if (next.horizon < 1) {
        throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    }
    if (!(next.alpha > 0.0 && next.alpha < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
    }
    config = next;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidConfig, "cannot open config file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "config parse failure: " + std::string(e.what()));
    }
    RunConfig config;
    apply_config_json(config, doc);
    return config;
}

json config_schema() {
    json keys = json::object();
    for (const auto& k : kSchema) {
        keys[k.name] = {{"type", type_name(k.type)}, {"description", k.doc}};
    }
    return {{"title", "lagcast run configuration"}, {"type", "object"}, {"properties", keys}};
}

} // namespace lagcast
