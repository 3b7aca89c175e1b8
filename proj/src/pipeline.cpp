#include "lagcast/pipeline.hpp"

#include "lagcast/error.hpp"
#include "lagcast/json_io.hpp"
#include "lagcast/rng.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lagcast {

using nlohmann::json;

const TimeSeries& PreparedData::by_role(const Role& role) const {
    switch (role.kind()) {
        case RoleKind::Deaths: return deaths;
        case RoleKind::Confirmed: return confirmed;
        case RoleKind::Recovered: return recovered;
        case RoleKind::Other: break;
    }
    throw Error(ErrorCode::UnknownRole, "no prepared series for '" + role.name() + "'");
}

std::vector<Role> parse_role_filter(const std::string& name) {
    if (name == "all") {
        return {Role::deaths(), Role::recovered(), Role::confirmed()};
    }
    Role role = Role::from_name(name);
    if (role.kind() == RoleKind::Other) {
        throw Error(ErrorCode::InvalidConfig,
                    "role must be deaths, recovered, confirmed or all, not '" + name + "'");
    }
    return {role};
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    }
    out << text;
}

void write_json(const std::string& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

// deaths consumes both other series; confirmed and recovered consume only each
// other (deaths never feeds them)
std::vector<TimeSeries> exog_for(const PreparedData& data, const Role& response) {
    switch (response.kind()) {
        case RoleKind::Deaths: return {data.confirmed, data.recovered};
        case RoleKind::Confirmed: return {data.recovered};
        case RoleKind::Recovered: return {data.confirmed};
        case RoleKind::Other: break;
    }
    throw Error(ErrorCode::UnknownRole, "no coupling defined for '" + response.name() + "'");
}

PruneResult fit_role(const RunConfig& config, const PreparedData& data, const Role& role,
                     bool train_only) {
    TimeSeries y = data.by_role(role);
    std::vector<TimeSeries> exog = exog_for(data, role);
    if (train_only) {
        SplitSpec boundary = SplitSpec::date_boundary(data.train_end);
        y = split(y, boundary).first;
        for (TimeSeries& s : exog) s = split(s, boundary).first;
    }

    LagSpec spec;
    if (config.lag_search) {
        spec = select_lags(y, exog, config.max_q, std::vector<int>(exog.size(), config.max_p));
    } else {
        spec = initial_spec_for(config, role);
        // keep the exogenous order consistent with the series we pass
        std::vector<std::pair<Role, int>> ordered;
        for (const TimeSeries& s : exog) {
            for (const auto& [r, p] : spec.exog) {
                if (r == s.role) ordered.emplace_back(r, p);
            }
        }
        spec.exog = ordered;
    }
    return prune_insignificant(y, exog, spec, config.alpha);
}

RegressorConfigs configs_for(const RunConfig& config, const Role& role) {
    RegressorConfigs c;
    c.rf = config.rf;
    c.svr = config.svr;
    c.knn = config.knn;
    c.mlp = config.mlp_for(role);
    return c;
}

/// Design over the full aligned window split into train/test rows at the
/// boundary; test rows keep real observed lag values.
std::pair<FeatureMatrix, FeatureMatrix> role_features(const PreparedData& data, const Role& role,
                                                      const LagSpec& spec) {
    const TimeSeries& y = data.by_role(role);
    Design design = build_design(y, exog_for(data, role), spec);
    FeatureMatrix full = feature_matrix_from_design(design);

    int n_train_rows = (data.train_end - y.start_date) + 1 - design.max_lag;
    if (n_train_rows < 1 || n_train_rows >= full.rows()) {
        throw Error(ErrorCode::DegenerateSplit, "split boundary leaves an empty part");
    }
    FeatureMatrix train = slice_rows(full, 0, n_train_rows);
    FeatureMatrix test = slice_rows(full, n_train_rows, full.rows());
    return {std::move(train), std::move(test)};
}

std::string role_file(const std::string& dir, const std::string& stem, const Role& role,
                      const char* ext) {
    return dir + "/" + stem + "_" + role.name() + ext;
}

std::uint64_t role_salt(const Role& role) {
    switch (role.kind()) {
        case RoleKind::Deaths: return 0;
        case RoleKind::Recovered: return 1;
        case RoleKind::Confirmed: return 2;
        case RoleKind::Other: break;
    }
    return 3;
}

} // namespace

LagSpec initial_spec_for(const RunConfig& config, const Role& role) {
    LagSpec spec;
    spec.include_intercept = true;
    switch (role.kind()) {
        case RoleKind::Deaths:
            spec.q = config.lags.deaths_q;
            spec.exog = {{Role::confirmed(), config.lags.deaths_p_confirmed},
                         {Role::recovered(), config.lags.deaths_p_recovered}};
            break;
        case RoleKind::Confirmed:
            spec.q = config.lags.confirmed_q;
            spec.exog = {{Role::recovered(), config.lags.confirmed_p_recovered}};
            break;
        case RoleKind::Recovered:
            spec.q = config.lags.recovered_q;
            spec.exog = {{Role::confirmed(), config.lags.recovered_p_confirmed}};
            break;
        case RoleKind::Other:
            throw Error(ErrorCode::UnknownRole, "no lag orders for '" + role.name() + "'");
    }
    return spec;
}

PreparedData prepare_data(const RunConfig& config) {
    std::map<Role, TimeSeries> cumulative = fetch(config.manifest());

    std::vector<TimeSeries> daily;
    for (auto& [role, series] : cumulative) {
        TimeSeries d = cumulative_to_daily(series);
        if (config.clamp_negative_daily) d = clamp_negative(d);
        daily.push_back(std::move(d));
    }
    daily = align(daily);

    PreparedData data{{}, {}, {}, {}};
    for (TimeSeries& s : daily) {
        switch (s.role.kind()) {
            case RoleKind::Deaths: data.deaths = std::move(s); break;
            case RoleKind::Confirmed: data.confirmed = std::move(s); break;
            case RoleKind::Recovered: data.recovered = std::move(s); break;
            case RoleKind::Other:
                throw Error(ErrorCode::UnknownRole, "unexpected role in prepared data");
        }
    }

    auto [train, test] = split(data.deaths, config.split);
    data.train_end = train.end_date();
    return data;
}

std::string run_fetch(const RunConfig& config) {
    std::map<Role, TimeSeries> cumulative = fetch(config.manifest());
    std::ostringstream out;
    for (const auto& [role, series] : cumulative) {
        out << role.name() << ": " << series.size() << " days, " << series.start_date.to_iso()
            << " .. " << series.end_date().to_iso() << "\n";
    }
    return out.str();
}

std::map<std::string, PruneResult> run_fit(const RunConfig& config,
                                           const std::vector<Role>& roles) {
    PreparedData data = prepare_data(config);
    std::map<std::string, PruneResult> results;
    for (const Role& role : roles) {
        PruneResult result = fit_role(config, data, role, true);
        json doc = ardl_fit_to_json(result.fit);
        doc["seed"] = config.seed;
        doc["train_end"] = data.train_end.to_iso();
        write_json(role_file(config.out_dir, "ardl", role, ".json"), doc);
        results.emplace(role.name(), std::move(result));
    }
    return results;
}

std::map<std::string, ComparisonTable> run_compare(const RunConfig& config,
                                                   const std::vector<Role>& roles) {
    PreparedData data = prepare_data(config);
    EvalOptions options{config.cv_folds, config.cv_scheme, config.zero_policy};

    std::map<std::string, ComparisonTable> tables;
    for (const Role& role : roles) {
        PruneResult pruned = fit_role(config, data, role, true);
        auto [train, test] = role_features(data, role, pruned.spec);
        ComparisonTable table = compare_models(train, test, configs_for(config, role), options,
                                               derive_seed(config.seed, role_salt(role)));
        table.series_name = role.name();
        if (config.format != OutputFormat::Json) {
            write_text(role_file(config.out_dir, "compare", role, ".csv"),
                       comparison_to_csv(table));
        }
        if (config.format != OutputFormat::Csv) {
            write_json(role_file(config.out_dir, "compare", role, ".json"),
                       comparison_to_json(table));
        }
        tables.emplace(role.name(), std::move(table));
    }
    return tables;
}

ForecastResult run_forecast(const RunConfig& config, const std::vector<Role>& roles) {
    PreparedData data = prepare_data(config);

    // the forecast system consumes the full history: prune on the training
    // part as usual, then refit the chosen terms on everything
    auto backend_for = [&](const Role& role) -> ForecastBackend {
        PruneResult pruned = fit_role(config, data, role, true);
        if (config.forecast_backend == "ardl") {
            return fit_ardl(data.by_role(role), exog_for(data, role), pruned.spec);
        }
        Design design = build_design(data.by_role(role), exog_for(data, role), pruned.spec);
        FeatureMatrix features = feature_matrix_from_design(design);
        RegressorKind kind = regressor_kind_from_name(config.forecast_backend);
        RegressorConfigs configs = configs_for(config, role);
        std::uint64_t model_seed = derive_seed(config.seed, 0x10 + role_salt(role));
        switch (kind) {
            case RegressorKind::RF: {
                RfConfig c = configs.rf;
                c.seed = model_seed;
                return fit_regressor(c, features);
            }
            case RegressorKind::SVR: return fit_regressor(configs.svr, features);
            case RegressorKind::KNN: return fit_regressor(configs.knn, features);
            case RegressorKind::MLP: {
                MlpConfig c = configs.mlp;
                c.seed = model_seed;
                return fit_regressor(c, features);
            }
        }
        throw Error(ErrorCode::InvalidConfig, "unknown forecast backend");
    };

    SystemModel system{{Role::deaths(), backend_for(Role::deaths())},
                       {Role::confirmed(), backend_for(Role::confirmed())},
                       {Role::recovered(), backend_for(Role::recovered())}};

    ForecastOptions options;
    options.clamp_non_negative = config.clamp_negative_daily;
    ForecastResult result = recursive_forecast(system, data.all(), config.horizon, options);

    if (roles.size() < 3) {
        ForecastResult filtered = result;
        filtered.forecasts.clear();
        for (const auto& entry : result.forecasts) {
            for (const Role& role : roles) {
                if (entry.first == role) filtered.forecasts.push_back(entry);
            }
        }
        result = std::move(filtered);
    }

    if (config.format != OutputFormat::Json) {
        write_text(config.out_dir + "/forecast.csv", forecast_to_csv(result));
    }
    if (config.format != OutputFormat::Csv) {
        json doc = forecast_to_json(result);
        doc["seed"] = config.seed;
        write_json(config.out_dir + "/forecast.json", doc);
    }
    return result;
}

void run_pipeline(const RunConfig& config, const std::vector<Role>& roles) {
    run_fetch(config);
    run_fit(config, roles);
    run_compare(config, roles);
    run_forecast(config, roles);
}

} // namespace lagcast
