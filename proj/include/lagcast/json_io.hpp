#pragma once

#include "lagcast/ardl.hpp"
#include "lagcast/evaluation.hpp"
#include "lagcast/forecasting.hpp"
#include "lagcast/regressors.hpp"

#include <json.hpp>

#include <string>

namespace lagcast {

/// Coefficient table in the published report layout: one row per term with
/// estimate, standard error, t and p, plus the footer statistics.
nlohmann::json ardl_fit_to_json(const ArdlFit& fit);
ArdlFit ardl_fit_from_json(const nlohmann::json& j);

nlohmann::json comparison_to_json(const ComparisonTable& table);
/// CSV layout: model,split,ME,RMSE,MAE,MPE,MAPE — train and test rows only.
std::string comparison_to_csv(const ComparisonTable& table);

/// Versioned document carrying everything needed to reload the model and
/// reproduce its predictions bit-exactly.
nlohmann::json regressor_to_json(const TrainedRegressor& model);
TrainedRegressor regressor_from_json(const nlohmann::json& j);

nlohmann::json forecast_to_json(const ForecastResult& result);
/// CSV layout: date,role,forecast — one row per (date, role).
std::string forecast_to_csv(const ForecastResult& result);

/// Shortest round-trip decimal form; the same value always prints the same bytes.
std::string format_double(double value);

} // namespace lagcast
