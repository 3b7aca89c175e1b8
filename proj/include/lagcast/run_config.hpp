#pragma once

#include "lagcast/date.hpp"
#include "lagcast/evaluation.hpp"
#include "lagcast/ingest.hpp"
#include "lagcast/series.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lagcast {

enum class OutputFormat { Csv, Json, Both };

/// Per-role lag orders used when lag search is off. Defaults follow the lag
/// choices the comparison study settled on.
struct RoleLagOrders {
    int deaths_q = 1, deaths_p_confirmed = 3, deaths_p_recovered = 1;
    int confirmed_q = 4, confirmed_p_recovered = 3;
    int recovered_q = 3, recovered_p_confirmed = 3;
};

/// Flat, schema-validated run configuration. Precedence is CLI flags over
/// config file keys over defaults; every key maps to exactly one field here.
struct RunConfig {
    std::string deaths_source, recovered_source, confirmed_source;  // path or URL per role
    bool deaths_remote = false, recovered_remote = false, confirmed_remote = false;

    std::optional<Date> window_start, window_end;
    SplitSpec split = SplitSpec::ratio(0.8);
    double alpha = 0.10;
    std::uint64_t seed = 42;
    int horizon = 15;
    std::string out_dir = "out";
    OutputFormat format = OutputFormat::Both;
    bool offline = false;
    std::string cache_dir = ".lagcast-cache";
    bool clamp_negative_daily = false;
    ZeroActualPolicy zero_policy = ZeroActualPolicy::Error;

    int cv_folds = 10;
    FoldScheme cv_scheme = FoldScheme::Shuffled;

    std::string forecast_backend = "ardl";  // ardl | rf | svr | knn | mlp

    bool lag_search = false;
    int max_q = 4;
    int max_p = 4;
    RoleLagOrders lags;

    RfConfig rf;
    SvrConfig svr;
    KnnConfig knn;
    MlpConfig mlp_base;  // learning rate, threshold, iteration cap
    std::vector<int> mlp_hidden_deaths = {8, 8, 8, 8};
    std::vector<int> mlp_hidden_recovered = {4, 4};
    std::vector<int> mlp_hidden_confirmed = {4, 4};

    SnapshotManifest manifest() const;
    MlpConfig mlp_for(const Role& role) const;
};

/// Apply a flat JSON document onto `config`. Unknown keys and wrong types are
/// configuration errors; nothing is applied until the whole document passes.
void apply_config_json(RunConfig& config, const nlohmann::json& doc);

RunConfig load_config_file(const std::string& path);

/// The published key/type table (docs/config_schema.json mirrors it).
nlohmann::json config_schema();

} // namespace lagcast
