#include "lagcast/ardl.hpp"

#include "lagcast/error.hpp"
#include "lagcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lagcast {

std::string term_label(const Role& role, int lag) {
    if (lag == 0) return role.label_prefix() + ".t";
    return role.label_prefix() + "." + std::to_string(lag);
}

TermRef parse_term_label(const std::string& label, const std::vector<Role>& candidates) {
    auto dot = label.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= label.size()) {
        throw Error(ErrorCode::UnknownRole, "cannot parse term label '" + label + "'");
    }
    std::string prefix = label.substr(0, dot);
    std::string suffix = label.substr(dot + 1);
    for (const Role& role : candidates) {
        if (role.label_prefix() == prefix) {
            if (suffix == "t") return {role, 0};
            try {
                std::size_t used = 0;
                int lag = std::stoi(suffix, &used);
                if (used == suffix.size() && lag >= 1) return {role, lag};
            } catch (const std::exception&) {
            }
            throw Error(ErrorCode::UnknownRole, "bad lag suffix in term label '" + label + "'");
        }
    }
    throw Error(ErrorCode::UnknownRole, "no series matches term label '" + label + "'");
}

int LagSpec::max_lag() const {
    int m = q;
    for (const auto& [role, p] : exog) m = std::max(m, p);
    return m;
}

std::vector<std::string> LagSpec::implied_terms(const Role& response) const {
    std::vector<std::string> labels;
    for (int i = 1; i <= q; ++i) labels.push_back(term_label(response, i));
    for (const auto& [role, p] : exog) {
        for (int k = 0; k <= p; ++k) labels.push_back(term_label(role, k));
    }
    return labels;
}

std::vector<std::string> LagSpec::active_terms(const Role& response) const {
    if (q < 0) throw Error(ErrorCode::InvalidConfig, "q must be non-negative");
    for (const auto& [role, p] : exog) {
        if (p < 0) throw Error(ErrorCode::InvalidConfig, "lag order for " + role.name() + " is negative");
    }
    std::vector<std::string> implied = implied_terms(response);
    for (const auto& label : removed) {
        if (std::find(implied.begin(), implied.end(), label) == implied.end()) {
            throw Error(ErrorCode::RemovedUnknownTerm,
                        "'" + label + "' does not name a term of this specification");
        }
    }
    std::vector<std::string> active;
    for (auto& label : implied) {
        if (!removed.count(label)) active.push_back(std::move(label));
    }
    if (active.empty() && !include_intercept) {
        throw Error(ErrorCode::InvalidConfig, "specification has no terms left");
    }
    return active;
}

bool ArdlFit::has_intercept() const {
    return !terms.empty() && terms.front().label == "(Intercept)";
}

const OlsTerm* ArdlFit::find_term(const std::string& label) const {
    for (const auto& term : terms) {
        if (term.label == label) return &term;
    }
    return nullptr;
}

namespace {

const TimeSeries& series_for(const std::vector<TimeSeries>& exog, const Role& role) {
    for (const auto& s : exog) {
        if (s.role == role) return s;
    }
    throw Error(ErrorCode::UnknownRole, "no series provided for role '" + role.name() + "'");
}

} // namespace

Design build_design(const TimeSeries& y, const std::vector<TimeSeries>& exog,
                    const LagSpec& spec) {
    const auto L = y.values.size();
    for (const auto& s : exog) {
        if (s.values.size() != L || !(s.start_date == y.start_date)) {
            throw Error(ErrorCode::LengthMismatch,
                        "series '" + s.role.name() + "' is not aligned with the response");
        }
    }

    std::vector<std::string> active = spec.active_terms(y.role);
    const int max_lag = spec.max_lag();
    if (L <= static_cast<std::size_t>(max_lag)) {
        throw Error(ErrorCode::TooShort, "series length " + std::to_string(L) +
                                             " does not cover max lag " + std::to_string(max_lag));
    }
    const std::size_t rows = L - static_cast<std::size_t>(max_lag);

    std::vector<std::string> labels;
    if (spec.include_intercept) labels.push_back("(Intercept)");
    labels.insert(labels.end(), active.begin(), active.end());

    Design design;
    design.labels = labels;
    design.max_lag = max_lag;
    design.X.resize(rows, static_cast<Eigen::Index>(labels.size()));
    design.target.resize(rows);

    Eigen::Index col = 0;
    if (spec.include_intercept) {
        design.X.col(col++).setOnes();
    }
    auto fill_column = [&](const std::vector<double>& values, int lag) {
        for (std::size_t t = 0; t < rows; ++t) {
            design.X(static_cast<Eigen::Index>(t), col) = values[t + max_lag - lag];
        }
        ++col;
    };
    for (int i = 1; i <= spec.q; ++i) {
        if (!spec.removed.count(term_label(y.role, i))) fill_column(y.values, i);
    }
    for (const auto& [role, p] : spec.exog) {
        const TimeSeries& s = series_for(exog, role);
        for (int k = 0; k <= p; ++k) {
            if (!spec.removed.count(term_label(role, k))) fill_column(s.values, k);
        }
    }
    for (std::size_t t = 0; t < rows; ++t) {
        design.target(static_cast<Eigen::Index>(t)) = y.values[t + max_lag];
    }
    return design;
}

ArdlFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& target,
                const std::vector<std::string>& labels) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (static_cast<std::size_t>(k) != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "label count does not match column count");
    }
    if (target.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "target length does not match row count");
    }
    if (n <= k) {
        throw Error(ErrorCode::NotEnoughRows, std::to_string(n) + " rows for " +
                                                  std::to_string(k) + " coefficients");
    }
    if (!X.allFinite() || !target.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "design or target contains non-finite values");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < k) {
        throw Error(ErrorCode::RankDeficient,
                    "design rank " + std::to_string(qr.rank()) + " < " + std::to_string(k));
    }
    Eigen::VectorXd beta = qr.solve(target);
    Eigen::VectorXd residuals = target - X * beta;

    const double rss = residuals.squaredNorm();
    const double df = static_cast<double>(n - k);
    const double sigma2 = rss / df;

    // (X'X)^-1 from the factorization: X P = Q R  =>  (X'X)^-1 = P R^-1 R^-T P'.
    Eigen::MatrixXd rinv = qr.matrixR()
                               .topLeftCorner(k, k)
                               .triangularView<Eigen::Upper>()
                               .solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd xtx_inv = rinv * rinv.transpose();
    xtx_inv = qr.colsPermutation() * xtx_inv * qr.colsPermutation().transpose();

    const bool intercept =
        std::find(labels.begin(), labels.end(), "(Intercept)") != labels.end();

    ArdlFit fit;
    fit.terms.reserve(labels.size());
    for (Eigen::Index i = 0; i < k; ++i) {
        OlsTerm term;
        term.label = labels[static_cast<std::size_t>(i)];
        term.coefficient = beta(i);
        term.std_error = std::sqrt(sigma2 * xtx_inv(i, i));
        term.t_value = term.coefficient / term.std_error;
        term.p_value = 2.0 * stats::student_t_sf(std::fabs(term.t_value), df);
        fit.terms.push_back(std::move(term));
    }

    double tss;
    if (intercept) {
        tss = (target.array() - target.mean()).matrix().squaredNorm();
    } else {
        tss = target.squaredNorm();
    }
    fit.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
    fit.adj_r_squared =
        1.0 - (1.0 - fit.r_squared) * (static_cast<double>(n) - 1.0) / df;
    fit.residuals = std::move(residuals);
    fit.residual_std_error = std::sqrt(sigma2);
    fit.n_obs = static_cast<std::size_t>(n);

    const Eigen::Index n_slopes = k - (intercept ? 1 : 0);
    if (n_slopes > 0 && tss > 0.0) {
        fit.f_statistic.df1 = static_cast<double>(n_slopes);
        fit.f_statistic.df2 = df;
        fit.f_statistic.value = ((tss - rss) / fit.f_statistic.df1) / sigma2;
        fit.f_statistic.p_value =
            stats::f_sf(fit.f_statistic.value, fit.f_statistic.df1, fit.f_statistic.df2);
    } else {
        fit.f_statistic.value = std::numeric_limits<double>::quiet_NaN();
        fit.f_statistic.p_value = std::numeric_limits<double>::quiet_NaN();
        fit.f_statistic.df1 = 0.0;
        fit.f_statistic.df2 = df;
    }
    return fit;
}

ArdlFit fit_ardl(const TimeSeries& y, const std::vector<TimeSeries>& exog, const LagSpec& spec) {
    Design design = build_design(y, exog, spec);
    ArdlFit fit = ols_fit(design.X, design.target, design.labels);
    fit.spec = spec;
    fit.response = y.role;
    return fit;
}

LagSpec select_lags(const TimeSeries& y, const std::vector<TimeSeries>& exog, int max_q,
                    const std::vector<int>& max_p, SelectionCriterion criterion) {
    (void)criterion;  // adjusted R^2 is the only criterion provided
    if (max_q < 0) throw Error(ErrorCode::InvalidConfig, "max_q must be non-negative");
    if (max_p.size() != exog.size()) {
        throw Error(ErrorCode::InvalidConfig, "one max_p bound per exogenous series required");
    }

    constexpr double tie_tol = 1e-9;
    std::optional<LagSpec> best;
    double best_adj = -std::numeric_limits<double>::infinity();
    int best_params = 0;

    std::vector<int> orders(exog.size(), 0);
    auto candidate_params = [&](const LagSpec& spec) {
        int total = spec.q + (spec.include_intercept ? 1 : 0);
        for (const auto& [role, p] : spec.exog) total += p + 1;
        return total;
    };

    auto advance = [&]() -> bool {
        for (std::size_t pos = orders.size(); pos-- > 0;) {
            if (orders[pos] < max_p[pos]) {
                ++orders[pos];
                std::fill(orders.begin() + pos + 1, orders.end(), 0);
                return true;
            }
        }
        return false;
    };

    // Lexicographic enumeration over (q, p_1, ..., p_J); ties with equal
    // parameter counts therefore resolve to the first candidate visited.
    for (int q = 0; q <= max_q; ++q) {
        std::fill(orders.begin(), orders.end(), 0);
        do {
            LagSpec spec;
            spec.q = q;
            for (std::size_t j = 0; j < exog.size(); ++j) {
                spec.exog.emplace_back(exog[j].role, orders[j]);
            }
            try {
                ArdlFit fit = fit_ardl(y, exog, spec);
                int params = candidate_params(spec);
                bool better = fit.adj_r_squared > best_adj + tie_tol;
                bool tied = !better && std::fabs(fit.adj_r_squared - best_adj) <= tie_tol &&
                            params < best_params;
                if (!best || better || tied) {
                    best = spec;
                    best_adj = fit.adj_r_squared;
                    best_params = params;
                }
            } catch (const Error&) {
                // infeasible candidate (too few rows, rank deficiency): skipped
            }
        } while (advance());
    }

    if (!best) {
        throw Error(ErrorCode::NoFeasibleCandidate, "every lag candidate failed to fit");
    }
    return *best;
}

PruneResult prune_insignificant(const TimeSeries& y, const std::vector<TimeSeries>& exog,
                                const LagSpec& spec, double alpha) {
    LagSpec current = spec;
    for (;;) {
        ArdlFit fit = fit_ardl(y, exog, current);
        const OlsTerm* worst = nullptr;
        for (const auto& term : fit.terms) {
            if (term.label == "(Intercept)") continue;
            if (!worst || term.p_value > worst->p_value) worst = &term;
        }
        if (!worst || worst->p_value <= alpha) {
            return {current, std::move(fit)};
        }
        current.removed.insert(worst->label);
        std::size_t active = current.active_terms(y.role).size();
        if (active == 0) {
            // only the intercept remains
            return {current, fit_ardl(y, exog, current)};
        }
    }
}

const std::vector<double>* LagWindow::find(const Role& role) const {
    for (const auto& [r, values] : series) {
        if (r == role) return &values;
    }
    return nullptr;
}

double ardl_predict(const ArdlFit& fit, const LagWindow& window) {
    std::vector<Role> candidates{fit.response};
    for (const auto& [role, p] : fit.spec.exog) candidates.push_back(role);
    for (const auto& [role, values] : window.series) {
        if (std::find(candidates.begin(), candidates.end(), role) == candidates.end()) {
            candidates.push_back(role);
        }
    }

    double total = 0.0;
    for (const auto& term : fit.terms) {
        if (term.label == "(Intercept)") {
            total += term.coefficient;
            continue;
        }
        TermRef ref = parse_term_label(term.label, candidates);
        const std::vector<double>* values = window.find(ref.role);
        if (!values) {
            throw Error(ErrorCode::MissingLag, "window has no values for '" + ref.role.name() + "'");
        }
        // response vectors end at t-1, all others at t
        const bool is_response = ref.role == fit.response;
        const int back = is_response ? ref.lag - 1 : ref.lag;
        if (back < 0 || static_cast<std::size_t>(back) >= values->size()) {
            throw Error(ErrorCode::MissingLag,
                        "window too short for term '" + term.label + "'");
        }
        total += term.coefficient * (*values)[values->size() - 1 - static_cast<std::size_t>(back)];
    }
    return total;
}

} // namespace lagcast
