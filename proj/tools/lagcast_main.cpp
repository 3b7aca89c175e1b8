#include "lagcast/error.hpp"
#include "lagcast/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct CommonFlags {
    std::string config_path;
    std::string role = "all";
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon;
    std::optional<double> alpha;
    std::optional<double> split_ratio;
    std::optional<std::string> split_date;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    bool offline = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "run configuration file (JSON)");
    cmd->add_option("--role", flags.role, "deaths|recovered|confirmed|all")->default_str("all");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--horizon", flags.horizon, "forecast steps");
    cmd->add_option("--alpha", flags.alpha, "backward elimination significance level");
    cmd->add_option("--split-ratio", flags.split_ratio, "training fraction");
    cmd->add_option("--split-date", flags.split_date, "last training date YYYY-MM-DD");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.format, "csv|json|both");
    cmd->add_flag("--offline", flags.offline, "forbid network access");
}

// flags > config file > defaults
lagcast::RunConfig resolve_config(const CommonFlags& flags) {
    lagcast::RunConfig config;
    if (!flags.config_path.empty()) {
        config = lagcast::load_config_file(flags.config_path);
    }
    nlohmann::json overrides = nlohmann::json::object();
    if (flags.seed) overrides["seed"] = *flags.seed;
    if (flags.horizon) overrides["horizon"] = *flags.horizon;
    if (flags.alpha) overrides["alpha"] = *flags.alpha;
    if (flags.split_ratio) overrides["split_ratio"] = *flags.split_ratio;
    if (flags.split_date) overrides["split_date"] = *flags.split_date;
    if (flags.out_dir) overrides["out_dir"] = *flags.out_dir;
    if (flags.format) overrides["format"] = *flags.format;
    if (flags.offline) overrides["offline"] = true;
    lagcast::apply_config_json(config, overrides);
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lagcast: distributed-lag fitting, model comparison and recursive "
                 "forecasting for epidemic count series"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* cmd_fetch = app.add_subcommand("fetch", "load and summarize the raw series");
    CLI::App* cmd_fit = app.add_subcommand("fit", "fit distributed-lag models with pruning");
    CLI::App* cmd_compare = app.add_subcommand("compare", "score RF/SVR/KNN/MLP on lag features");
    CLI::App* cmd_forecast = app.add_subcommand("forecast", "recursive multi-step forecast");
    CLI::App* cmd_pipeline = app.add_subcommand("pipeline", "fetch, fit, compare and forecast");
    for (CLI::App* cmd : {cmd_fetch, cmd_fit, cmd_compare, cmd_forecast, cmd_pipeline}) {
        add_common_flags(cmd, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        lagcast::RunConfig config = resolve_config(flags);
        std::vector<lagcast::Role> roles = lagcast::parse_role_filter(flags.role);

        if (cmd_fetch->parsed()) {
            std::cout << lagcast::run_fetch(config);
        } else if (cmd_fit->parsed()) {
            auto fits = lagcast::run_fit(config, roles);
            for (const auto& [role, result] : fits) {
                std::cout << role << ": " << result.fit.terms.size() << " terms, adj R^2 "
                          << result.fit.adj_r_squared << "\n";
            }
        } else if (cmd_compare->parsed()) {
            auto tables = lagcast::run_compare(config, roles);
            for (const auto& [role, table] : tables) {
                for (const auto& row : table.rows) {
                    if (row.failed) {
                        std::cerr << "warning: " << role << " "
                                  << lagcast::regressor_kind_name(row.kind) << " " << row.split
                                  << " failed: " << row.error << "\n";
                    }
                }
                std::cout << role << ": wrote comparison table (" << table.rows.size()
                          << " rows)\n";
            }
        } else if (cmd_forecast->parsed()) {
            auto result = lagcast::run_forecast(config, roles);
            std::cout << "forecast: " << result.horizon << " steps per role, backend "
                      << result.backend << "\n";
        } else if (cmd_pipeline->parsed()) {
            lagcast::run_pipeline(config, roles);
            std::cout << "pipeline complete; outputs in " << config.out_dir << "\n";
        }
    } catch (const lagcast::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
