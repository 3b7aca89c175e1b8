#pragma once

#include "lagcast/series.hpp"

#include <Eigen/Dense>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lagcast {

/// Lag orders of a distributed-lag regression: autoregressive lags 1..q of the
/// response plus lags 0..p_j of each exogenous series, minus an explicit set of
/// removed term labels. Removal drops columns only; it never shrinks the lag
/// window used to trim rows.
struct LagSpec {
    int q = 0;
    std::vector<std::pair<Role, int>> exog;  // (series role, max lag p), lags 0..p included
    std::set<std::string> removed;
    bool include_intercept = true;

    int max_lag() const;
    /// All term labels implied by (q, exog), in design order, ignoring `removed`.
    std::vector<std::string> implied_terms(const Role& response) const;
    /// Design order with `removed` applied. Throws RemovedUnknownTerm / InvalidConfig.
    std::vector<std::string> active_terms(const Role& response) const;
};

/// Label of a single regressor: lag 0 prints as "Ct.t", lag k >= 1 as "Ct.k".
std::string term_label(const Role& role, int lag);

struct TermRef {
    Role role;
    int lag = 0;
};

/// Inverse of term_label over the given candidate roles.
TermRef parse_term_label(const std::string& label, const std::vector<Role>& candidates);

struct OlsTerm {
    std::string label;
    double coefficient = 0.0;
    double std_error = 0.0;
    double t_value = 0.0;
    double p_value = 0.0;
};

struct FStatistic {
    double value = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    double p_value = 0.0;
};

struct ArdlFit {
    LagSpec spec;
    Role response;
    std::vector<OlsTerm> terms;
    Eigen::VectorXd residuals;
    double residual_std_error = 0.0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    FStatistic f_statistic;
    std::size_t n_obs = 0;

    bool has_intercept() const;
    const OlsTerm* find_term(const std::string& label) const;
};

struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd target;
    std::vector<std::string> labels;  // includes "(Intercept)" when enabled
    int max_lag = 0;                  // rows map to series index max_lag + row
};

/// Lagged design matrix per the spec ordering: intercept, response lags 1..q,
/// then each exogenous series lags 0..p_j in spec order, minus removed labels.
Design build_design(const TimeSeries& y, const std::vector<TimeSeries>& exog,
                    const LagSpec& spec);

/// Least squares through a column-pivoted QR decomposition with the full
/// inference set: standard errors, t and two-sided p values, R^2 and adjusted
/// R^2, joint F test of the non-intercept terms, residuals.
ArdlFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& target,
                const std::vector<std::string>& labels);

/// build_design + ols_fit with the spec and response role attached.
ArdlFit fit_ardl(const TimeSeries& y, const std::vector<TimeSeries>& exog, const LagSpec& spec);

enum class SelectionCriterion { AdjRSquared };

/// Exhaustive grid over q in 0..max_q and p_j in 0..max_p[j]. Maximal adjusted
/// R^2 wins; ties within 1e-9 break toward fewer parameters, then the
/// lexicographically smaller (q, p_1, p_2, ...). Candidates that fail to fit
/// are skipped.
LagSpec select_lags(const TimeSeries& y, const std::vector<TimeSeries>& exog, int max_q,
                    const std::vector<int>& max_p,
                    SelectionCriterion criterion = SelectionCriterion::AdjRSquared);

struct PruneResult {
    LagSpec spec;
    ArdlFit fit;
};

/// Backward elimination: repeatedly remove the non-intercept term with the
/// largest p-value while it exceeds alpha, refitting after each removal.
/// The intercept is never removed.
PruneResult prune_insignificant(const TimeSeries& y, const std::vector<TimeSeries>& exog,
                                const LagSpec& spec, double alpha);

/// Recent values per role used to evaluate one prediction. Vectors are ordered
/// oldest to newest. The response vector ends at time t-1 (its last element is
/// lag 1); every other vector ends at time t (its last element is lag 0).
struct LagWindow {
    std::vector<std::pair<Role, std::vector<double>>> series;

    const std::vector<double>* find(const Role& role) const;
};

/// Intercept plus the sum of coefficient * lagged value over the fit's terms.
double ardl_predict(const ArdlFit& fit, const LagWindow& window);

} // namespace lagcast
