#pragma once

#include "lagcast/ardl.hpp"
#include "lagcast/forecasting.hpp"
#include "lagcast/run_config.hpp"

#include <map>
#include <string>
#include <vector>

namespace lagcast {

/// Daily series for the three roles, aligned, plus the chronological boundary
/// between the training and testing parts.
struct PreparedData {
    TimeSeries deaths;
    TimeSeries confirmed;
    TimeSeries recovered;
    Date train_end;  // last training date

    std::vector<TimeSeries> all() const { return {deaths, confirmed, recovered}; }
    const TimeSeries& by_role(const Role& role) const;
};

PreparedData prepare_data(const RunConfig& config);

/// Sources -> per-role row/column summary, cache written for remote sources.
std::string run_fetch(const RunConfig& config);

/// Lag choice (explicit orders or search), backward elimination on the
/// training part, one report document per requested role.
std::map<std::string, PruneResult> run_fit(const RunConfig& config,
                                           const std::vector<Role>& roles);

/// Four-model comparison tables per requested role.
std::map<std::string, ComparisonTable> run_compare(const RunConfig& config,
                                                   const std::vector<Role>& roles);

/// Recursive forecast of the coupled system; `roles` filters the emitted rows.
ForecastResult run_forecast(const RunConfig& config, const std::vector<Role>& roles);

/// fetch -> fit -> compare -> forecast.
void run_pipeline(const RunConfig& config, const std::vector<Role>& roles);

/// The starting lag specification for one role's model under this config.
LagSpec initial_spec_for(const RunConfig& config, const Role& role);

std::vector<Role> parse_role_filter(const std::string& name);

} // namespace lagcast
