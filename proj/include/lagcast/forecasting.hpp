#pragma once

#include "lagcast/ardl.hpp"
#include "lagcast/regressors.hpp"
#include "lagcast/series.hpp"

#include <string>
#include <variant>
#include <vector>

namespace lagcast {

using ForecastBackend = std::variant<ArdlFit, TrainedRegressor>;

/// Three coupled per-role models. Confirmed and recovered may consume each
/// other at lag 0 (resolved per step by an exact solve for linear backends or
/// fixed-point iteration otherwise); deaths may consume both but must not feed
/// either of them.
struct SystemModel {
    struct Entry {
        Role role;
        ForecastBackend model;
        std::vector<std::string> feature_labels() const;
    };
    Entry deaths;
    Entry confirmed;
    Entry recovered;

    /// Throws if deaths appears as an input of confirmed or recovered.
    void validate() const;
};

struct ForecastPoint {
    Date date;
    double value = 0.0;
};

struct ForecastResult {
    std::vector<std::pair<Role, std::vector<ForecastPoint>>> forecasts;
    int horizon = 0;
    std::string backend;
    std::vector<TimeSeries> history_window;  // the trailing window the recursion started from

    const std::vector<ForecastPoint>* find(const Role& role) const;
};

struct ForecastOptions {
    double fixed_point_tol = 1e-6;
    int fixed_point_max_iter = 100;
    bool clamp_non_negative = false;  // counts cannot go negative, but clamping alters dynamics
};

/// Recursive h-step-ahead forecast of the three-series system: each step
/// resolves the confirmed/recovered lag-0 coupling, computes deaths from the
/// just-computed values, then appends all three so later steps consume the
/// forecasts as lags.
ForecastResult recursive_forecast(const SystemModel& system,
                                  const std::vector<TimeSeries>& history, int horizon,
                                  const ForecastOptions& options = {});

/// Degenerate single-series case: the model may only reference its own lags.
std::vector<ForecastPoint> univariate_forecast(const ForecastBackend& model, const Role& role,
                                               const TimeSeries& history, int horizon,
                                               const ForecastOptions& options = {});

} // namespace lagcast
