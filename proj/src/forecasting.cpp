#include "lagcast/forecasting.hpp"

#include "lagcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lagcast {

std::vector<std::string> SystemModel::Entry::feature_labels() const {
    if (const auto* fit = std::get_if<ArdlFit>(&model)) {
        std::vector<std::string> labels;
        for (const auto& term : fit->terms) {
            if (term.label != "(Intercept)") labels.push_back(term.label);
        }
        return labels;
    }
    return std::get<TrainedRegressor>(model).feature_labels;
}

namespace {

std::vector<TermRef> entry_inputs(const SystemModel::Entry& entry,
                                  const std::vector<Role>& candidates) {
    std::vector<TermRef> inputs;
    for (const auto& label : entry.feature_labels()) {
        inputs.push_back(parse_term_label(label, candidates));
    }
    return inputs;
}

bool consumes(const std::vector<TermRef>& inputs, const Role& role, int lag) {
    return std::any_of(inputs.begin(), inputs.end(), [&](const TermRef& ref) {
        return ref.role == role && ref.lag == lag;
    });
}

bool consumes_role(const std::vector<TermRef>& inputs, const Role& role) {
    return std::any_of(inputs.begin(), inputs.end(),
                       [&](const TermRef& ref) { return ref.role == role; });
}

using History = std::map<Role, std::vector<double>>;

/// One-step prediction of an entry. `current` supplies lag-0 values of other
/// roles; histories end at time t-1.
double predict_entry(const SystemModel::Entry& entry, const History& histories,
                     const std::map<Role, double>& current,
                     const std::vector<Role>& candidates) {
    if (const auto* fit = std::get_if<ArdlFit>(&entry.model)) {
        // every lag-0 input must come through `current`
        for (const auto& term : fit->terms) {
            if (term.label == "(Intercept)") continue;
            TermRef ref = parse_term_label(term.label, candidates);
            if (ref.lag == 0 && !current.count(ref.role)) {
                throw Error(ErrorCode::MissingLag,
                            "no current value for '" + term.label + "'");
            }
        }
        LagWindow window;
        for (const auto& [role, values] : histories) {
            if (role == entry.role) {
                window.series.emplace_back(role, values);
            } else {
                // non-response windows end at time t; pad with the current value
                // (never read unless a lag-0 term exists, checked above)
                std::vector<double> extended = values;
                auto it = current.find(role);
                extended.push_back(it != current.end() ? it->second : 0.0);
                window.series.emplace_back(role, std::move(extended));
            }
        }
        return ardl_predict(*fit, window);
    }

    const auto& model = std::get<TrainedRegressor>(entry.model);
    FeatureMatrix row;
    row.labels = model.feature_labels;
    row.allow_constant_columns = true;
    row.X.resize(1, static_cast<Eigen::Index>(model.feature_labels.size()));
    for (std::size_t j = 0; j < model.feature_labels.size(); ++j) {
        TermRef ref = parse_term_label(model.feature_labels[j], candidates);
        double value;
        if (ref.lag == 0) {
            auto it = current.find(ref.role);
            if (it == current.end()) {
                throw Error(ErrorCode::MissingLag,
                            "no current value for '" + model.feature_labels[j] + "'");
            }
            value = it->second;
        } else {
            auto it = histories.find(ref.role);
            if (it == histories.end() ||
                it->second.size() < static_cast<std::size_t>(ref.lag)) {
                throw Error(ErrorCode::MissingLag,
                            "history too short for '" + model.feature_labels[j] + "'");
            }
            value = it->second[it->second.size() - static_cast<std::size_t>(ref.lag)];
        }
        row.X(0, static_cast<Eigen::Index>(j)) = value;
    }
    return predict(model, row)(0);
}

int required_history(const std::vector<TermRef>& inputs, const Role& role) {
    int need = 0;
    for (const TermRef& ref : inputs) {
        if (ref.role == role) need = std::max(need, ref.lag);
    }
    return need;
}

double lag0_coefficient(const SystemModel::Entry& entry, const Role& other) {
    const auto& fit = std::get<ArdlFit>(entry.model);
    const OlsTerm* term = fit.find_term(term_label(other, 0));
    return term ? term->coefficient : 0.0;
}

} // namespace

void SystemModel::validate() const {
    std::vector<Role> candidates{deaths.role, confirmed.role, recovered.role};
    for (const Entry* entry : {&confirmed, &recovered}) {
        if (consumes_role(entry_inputs(*entry, candidates), deaths.role)) {
            throw Error(ErrorCode::InvalidConfig,
                        "'" + entry->role.name() + "' model must not consume deaths");
        }
    }
}

const std::vector<ForecastPoint>* ForecastResult::find(const Role& role) const {
    for (const auto& [r, points] : forecasts) {
        if (r == role) return &points;
    }
    return nullptr;
}

ForecastResult recursive_forecast(const SystemModel& system,
                                  const std::vector<TimeSeries>& history, int horizon,
                                  const ForecastOptions& options) {
    if (horizon < 1) {
        throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    }
    system.validate();

    const std::vector<Role> candidates{system.deaths.role, system.confirmed.role,
                                       system.recovered.role};
    const std::vector<const SystemModel::Entry*> entries{&system.deaths, &system.confirmed,
                                                         &system.recovered};

    History histories;
    Date end_date;
    bool first = true;
    for (const auto& s : history) {
        if (s.values.empty()) throw Error(ErrorCode::HistoryTooShort, "empty history series");
        if (first) {
            end_date = s.end_date();
            first = false;
        } else if (!(s.end_date() == end_date)) {
            throw Error(ErrorCode::LengthMismatch, "history series end on different dates");
        }
        histories[s.role] = s.values;
    }

    std::map<Role, std::vector<TermRef>> inputs;
    int window_len = 1;
    for (const SystemModel::Entry* entry : entries) {
        inputs[entry->role] = entry_inputs(*entry, candidates);
        for (const Role& role : candidates) {
            int need = required_history(inputs[entry->role], role);
            auto it = histories.find(role);
            if (need > 0 && (it == histories.end() || it->second.size() < std::size_t(need))) {
                throw Error(ErrorCode::HistoryTooShort,
                            "'" + entry->role.name() + "' needs " + std::to_string(need) +
                                " past values of '" + role.name() + "'");
            }
            window_len = std::max(window_len, need);
        }
    }

    const auto& conf = system.confirmed;
    const auto& rec = system.recovered;
    const bool conf_uses_rec0 = consumes(inputs[conf.role], rec.role, 0);
    const bool rec_uses_conf0 = consumes(inputs[rec.role], conf.role, 0);
    const bool mutual = conf_uses_rec0 && rec_uses_conf0;
    const bool both_linear = std::holds_alternative<ArdlFit>(conf.model) &&
                             std::holds_alternative<ArdlFit>(rec.model);

    ForecastResult result;
    result.horizon = horizon;
    {
        std::string backend;
        for (const SystemModel::Entry* entry : entries) {
            std::string name = std::holds_alternative<ArdlFit>(entry->model)
                                   ? "ardl"
                                   : regressor_kind_name(
                                         std::get<TrainedRegressor>(entry->model).kind);
            if (backend.empty()) backend = name;
            else if (backend != name) backend = "mixed";
        }
        result.backend = backend;
    }
    for (const SystemModel::Entry* entry : entries) {
        const auto& values = histories[entry->role];
        std::size_t take = std::min(values.size(), static_cast<std::size_t>(window_len));
        TimeSeries tail{entry->role, end_date - static_cast<int>(take) + 1,
                        {values.end() - static_cast<long>(take), values.end()}};
        result.history_window.push_back(std::move(tail));
    }

    std::vector<std::vector<ForecastPoint>> points(3);
    for (int step = 1; step <= horizon; ++step) {
        Date date = end_date + step;
        double conf_value = 0.0, rec_value = 0.0;

        if (mutual && both_linear) {
            // exact simultaneous solve of the two lag-0 coupled linear equations
            double gamma = lag0_coefficient(conf, rec.role);
            double delta = lag0_coefficient(rec, conf.role);
            double base_conf = predict_entry(conf, histories, {{rec.role, 0.0}}, candidates);
            double base_rec = predict_entry(rec, histories, {{conf.role, 0.0}}, candidates);
            double det = 1.0 - gamma * delta;
            if (std::fabs(det) < 1e-12) {
                throw Error(ErrorCode::FixedPointDiverged,
                            "singular lag-0 coupling at step " + std::to_string(step));
            }
            conf_value = (base_conf + gamma * base_rec) / det;
            rec_value = base_rec + delta * conf_value;
        } else if (!mutual) {
            // at most one lag-0 edge: evaluate in dependency order
            if (conf_uses_rec0) {
                rec_value = predict_entry(rec, histories, {}, candidates);
                conf_value = predict_entry(conf, histories, {{rec.role, rec_value}}, candidates);
            } else {
                conf_value = predict_entry(conf, histories, {}, candidates);
                rec_value = predict_entry(rec, histories, {{conf.role, conf_value}}, candidates);
            }
        } else {
            // alternate both equations from the previous values until the
            // iterates settle
            conf_value = histories[conf.role].back();
            rec_value = histories[rec.role].back();
            bool converged = false;
            for (int it = 0; it < options.fixed_point_max_iter; ++it) {
                double next_conf =
                    predict_entry(conf, histories, {{rec.role, rec_value}}, candidates);
                double next_rec =
                    predict_entry(rec, histories, {{conf.role, next_conf}}, candidates);
                if (!std::isfinite(next_conf) || !std::isfinite(next_rec)) {
                    throw Error(ErrorCode::FixedPointDiverged,
                                "non-finite iterate at step " + std::to_string(step));
                }
                double change = std::max(
                    std::fabs(next_conf - conf_value) / std::max(1.0, std::fabs(next_conf)),
                    std::fabs(next_rec - rec_value) / std::max(1.0, std::fabs(next_rec)));
                conf_value = next_conf;
                rec_value = next_rec;
                if (change < options.fixed_point_tol) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                throw Error(ErrorCode::FixedPointDiverged,
                            "no fixed point within " +
                                std::to_string(options.fixed_point_max_iter) +
                                " iterations at step " + std::to_string(step));
            }
        }

        double deaths_value = predict_entry(
            system.deaths, histories, {{conf.role, conf_value}, {rec.role, rec_value}},
            candidates);
        if (!std::isfinite(conf_value) || !std::isfinite(rec_value) ||
            !std::isfinite(deaths_value)) {
            throw Error(ErrorCode::FixedPointDiverged,
                        "non-finite forecast at step " + std::to_string(step));
        }
        if (options.clamp_non_negative) {
            conf_value = std::max(conf_value, 0.0);
            rec_value = std::max(rec_value, 0.0);
            deaths_value = std::max(deaths_value, 0.0);
        }

        points[0].push_back({date, deaths_value});
        points[1].push_back({date, conf_value});
        points[2].push_back({date, rec_value});
        histories[system.deaths.role].push_back(deaths_value);
        histories[conf.role].push_back(conf_value);
        histories[rec.role].push_back(rec_value);
    }

    result.forecasts.emplace_back(system.deaths.role, std::move(points[0]));
    result.forecasts.emplace_back(conf.role, std::move(points[1]));
    result.forecasts.emplace_back(rec.role, std::move(points[2]));
    return result;
}

std::vector<ForecastPoint> univariate_forecast(const ForecastBackend& model, const Role& role,
                                               const TimeSeries& history, int horizon,
                                               const ForecastOptions& options) {
    if (horizon < 1) {
        throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    }
    SystemModel::Entry entry{role, model};
    std::vector<Role> candidates{role};
    std::vector<TermRef> inputs = entry_inputs(entry, candidates);  // throws on foreign roles
    int need = required_history(inputs, role);
    if (history.values.size() < static_cast<std::size_t>(std::max(need, 1))) {
        throw Error(ErrorCode::HistoryTooShort, "need " + std::to_string(need) + " past values");
    }

    History histories;
    histories[role] = history.values;
    Date end_date = history.end_date();

    std::vector<ForecastPoint> points;
    for (int step = 1; step <= horizon; ++step) {
        double value = predict_entry(entry, histories, {}, candidates);
        if (!std::isfinite(value)) {
            throw Error(ErrorCode::FixedPointDiverged,
                        "non-finite forecast at step " + std::to_string(step));
        }
        if (options.clamp_non_negative) value = std::max(value, 0.0);
        points.push_back({end_date + step, value});
        histories[role].push_back(value);
    }
    return points;
}

} // namespace lagcast
