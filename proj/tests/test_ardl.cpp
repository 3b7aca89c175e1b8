#include "lagcast/ardl.hpp"
#include "lagcast/error.hpp"
#include "lagcast/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace lagcast;

namespace {

TimeSeries series(Role role, std::vector<double> v) {
    return TimeSeries{role, Date(2020, 1, 22), std::move(v)};
}

// Test oracle: explicit normal equations. The library path goes through a QR
// factorization; this one must stay independent of it.
Eigen::VectorXd normal_equation_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return (X.transpose() * X).inverse() * X.transpose() * y;
}

std::vector<std::string> plain_labels(int k, bool intercept) {
    std::vector<std::string> labels;
    if (intercept) labels.push_back("(Intercept)");
    for (int i = int(labels.size()); i < k; ++i) labels.push_back("x" + std::to_string(i));
    return labels;
}

} // namespace

TEST_CASE("design matrix: response lags and intercept") {
    TimeSeries y = series(Role::deaths(), {1, 2, 3, 4});
    LagSpec spec;
    spec.q = 1;
    Design d = build_design(y, {}, spec);

    REQUIRE(d.labels == std::vector<std::string>{"(Intercept)", "Yt.1"});
    REQUIRE(d.X.rows() == 3);
    CHECK(d.target(0) == 2);
    CHECK(d.target(2) == 4);
    CHECK(d.X(0, 0) == 1.0);
    CHECK(d.X(0, 1) == 1.0);
    CHECK(d.X(2, 1) == 3.0);
}

TEST_CASE("design matrix: exogenous lag blocks and removal") {
    TimeSeries y = series(Role::deaths(), {1, 2, 3, 4, 5, 6});
    TimeSeries c = series(Role::confirmed(), {10, 20, 30, 40, 50, 60});
    TimeSeries r = series(Role::recovered(), {5, 6, 7, 8, 9, 10});

    LagSpec spec;
    spec.q = 1;
    spec.exog = {{Role::confirmed(), 2}, {Role::recovered(), 0}};
    Design d = build_design(y, {c, r}, spec);
    CHECK(d.labels ==
          std::vector<std::string>{"(Intercept)", "Yt.1", "Ct.t", "Ct.1", "Ct.2", "Rt.t"});
    CHECK(d.max_lag == 2);
    CHECK(d.X.rows() == 4);
    // row 0 targets y[2]; confirmed lag 2 reads c[0]
    CHECK(d.target(0) == 3);
    CHECK(d.X(0, 4) == 10);
    CHECK(d.X(0, 5) == 7);

    spec.removed = {"Ct.1"};
    Design pruned = build_design(y, {c, r}, spec);
    CHECK(pruned.labels ==
          std::vector<std::string>{"(Intercept)", "Yt.1", "Ct.t", "Ct.2", "Rt.t"});

    spec.removed = {"Ct.9"};
    CHECK_THROWS_AS(build_design(y, {c, r}, spec), Error);
}

TEST_CASE("design matrix error paths") {
    TimeSeries y = series(Role::deaths(), {1, 2});
    LagSpec spec;
    spec.q = 3;
    CHECK_THROWS_AS(build_design(y, {}, spec), Error);  // TooShort

    spec.q = 1;
    spec.exog = {{Role::confirmed(), 1}};
    CHECK_THROWS_AS(build_design(series(Role::deaths(), {1, 2, 3}), {}, spec), Error);
}

TEST_CASE("intercept-only fit is the mean") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 1);
    Eigen::VectorXd y(2);
    y << 3, 5;
    ArdlFit fit = ols_fit(X, y, {"(Intercept)"});
    CHECK(fit.terms[0].coefficient == doctest::Approx(4.0));
    CHECK(fit.residual_std_error == doctest::Approx(std::sqrt(2.0)));
    CHECK(fit.n_obs == 2);
}

TEST_CASE("noiseless line recovers exactly") {
    Eigen::MatrixXd X(5, 2);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = i + 1;
        y(i) = 1.0 + 2.0 * (i + 1);
    }
    ArdlFit fit = ols_fit(X, y, plain_labels(2, true));
    CHECK(fit.terms[0].coefficient == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.terms[1].coefficient == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    for (Eigen::Index i = 0; i < fit.residuals.size(); ++i) {
        CHECK(std::fabs(fit.residuals(i)) < 1e-10);
    }
}

TEST_CASE("coefficients match the normal-equation oracle on random systems") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 7 + int(rng.next_below(6));   // up to 12
        int k = 2 + int(rng.next_below(5));   // up to 6
        if (k >= n) k = n - 1;
        Eigen::MatrixXd X(n, k);
        Eigen::VectorXd y(n);
        X.col(0).setOnes();
        for (int i = 0; i < n; ++i) {
            for (int j = 1; j < k; ++j) X(i, j) = rng.uniform(-5.0, 5.0);
            y(i) = rng.uniform(-10.0, 10.0);
        }
        ArdlFit fit = ols_fit(X, y, plain_labels(k, true));
        Eigen::VectorXd oracle = normal_equation_solve(X, y);
        for (int j = 0; j < k; ++j) {
            CHECK(std::fabs(fit.terms[j].coefficient - oracle(j)) <=
                  1e-8 * std::max(1.0, std::fabs(oracle(j))));
        }
        // residual orthogonality: X' e = 0
        Eigen::VectorXd xe = X.transpose() * fit.residuals;
        CHECK(xe.cwiseAbs().maxCoeff() < 1e-6);
        // with an intercept the residuals sum to zero
        CHECK(std::fabs(fit.residuals.sum()) < 1e-6);
    }
}

TEST_CASE("inference columns: t, p, adjusted R^2 relations") {
    Rng rng(7);
    Eigen::MatrixXd X(40, 3);
    Eigen::VectorXd y(40);
    X.col(0).setOnes();
    for (int i = 0; i < 40; ++i) {
        X(i, 1) = rng.uniform(0.0, 10.0);
        X(i, 2) = rng.uniform(-3.0, 3.0);
        y(i) = 2.0 + 0.5 * X(i, 1) - 1.5 * X(i, 2) + rng.uniform(-1.0, 1.0);
    }
    ArdlFit fit = ols_fit(X, y, plain_labels(3, true));
    for (const auto& term : fit.terms) {
        CHECK(term.t_value == doctest::Approx(term.coefficient / term.std_error).epsilon(1e-12));
        CHECK(term.p_value >= 0.0);
        CHECK(term.p_value <= 1.0);
    }
    double n = 40, k = 3;
    CHECK(fit.adj_r_squared ==
          doctest::Approx(1.0 - (1.0 - fit.r_squared) * (n - 1) / (n - k)).epsilon(1e-12));
    CHECK(fit.adj_r_squared <= fit.r_squared);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
    CHECK(fit.f_statistic.df1 == 2.0);
    CHECK(fit.f_statistic.df2 == 37.0);
}

TEST_CASE("rank deficiency and too few rows are reported") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 2, 2, 4, 3, 6, 4, 8;  // second column is a multiple of the first
    Eigen::VectorXd y(4);
    y << 1, 2, 3, 4;
    CHECK_THROWS_AS(ols_fit(X, y, plain_labels(2, false)), Error);

    Eigen::MatrixXd small = Eigen::MatrixXd::Ones(2, 2);
    CHECK_THROWS_AS(ols_fit(small, y.head(2), plain_labels(2, false)), Error);
}

TEST_CASE("select_lags recovers an exact AR(2)") {
    // noiseless AR(2): adjusted R^2 is 1 for q >= 2 and parsimony picks 2
    std::vector<double> values{1.0, 2.0};
    for (int i = 2; i < 40; ++i) {
        values.push_back(0.6 * values[i - 1] + 0.3 * values[i - 2] + 1.0);
    }
    TimeSeries y = series(Role::deaths(), values);
    LagSpec best = select_lags(y, {}, 4, {});
    CHECK(best.q == 2);
}

TEST_CASE("select_lags equals brute-force enumeration") {
    Rng rng(91);
    std::vector<double> yv(30), xv(30);
    for (int i = 0; i < 30; ++i) {
        xv[i] = rng.uniform(0.0, 10.0);
        yv[i] = (i > 0 ? 0.4 * yv[i - 1] : 0.0) + 0.8 * xv[i] + rng.uniform(-0.5, 0.5);
    }
    TimeSeries y = series(Role::deaths(), yv);
    TimeSeries x = series(Role::confirmed(), xv);

    LagSpec chosen = select_lags(y, {x}, 3, {3});

    double best_adj = -1e300;
    int best_params = 1 << 20;
    int best_q = -1, best_p = -1;
    for (int q = 0; q <= 3; ++q) {
        for (int p = 0; p <= 3; ++p) {
            LagSpec spec;
            spec.q = q;
            spec.exog = {{Role::confirmed(), p}};
            ArdlFit fit = fit_ardl(y, {x}, spec);
            int params = 1 + q + p + 1;
            bool better = fit.adj_r_squared > best_adj + 1e-9;
            bool tied = !better && std::fabs(fit.adj_r_squared - best_adj) <= 1e-9 &&
                        params < best_params;
            if (best_q < 0 || better || tied) {
                best_adj = fit.adj_r_squared;
                best_params = params;
                best_q = q;
                best_p = p;
            }
        }
    }
    CHECK(chosen.q == best_q);
    CHECK(chosen.exog[0].second == best_p);
}

TEST_CASE("select_lags with a single candidate returns it") {
    std::vector<double> yv;
    for (int i = 0; i < 12; ++i) yv.push_back(std::sin(0.3 * i) + 2.0);
    TimeSeries y = series(Role::deaths(), yv);
    LagSpec spec = select_lags(y, {}, 0, {});
    CHECK(spec.q == 0);
    CHECK(spec.exog.empty());
}

TEST_CASE("prune removes an appended noise column and is idempotent") {
    Rng rng(123);
    // y depends on x at lag 0 only; lag 1 of x and lag 1 of y are noise terms
    std::vector<double> xv(60), yv(60);
    for (int i = 0; i < 60; ++i) {
        xv[i] = rng.uniform(0.0, 10.0);
        yv[i] = 3.0 + 2.0 * xv[i] + rng.uniform(-0.05, 0.05);
    }
    TimeSeries y = series(Role::deaths(), yv);
    TimeSeries x = series(Role::confirmed(), xv);

    LagSpec start;
    start.q = 1;
    start.exog = {{Role::confirmed(), 1}};
    PruneResult pruned = prune_insignificant(y, {x}, start, 0.10);

    // the true relation survives
    CHECK(pruned.fit.find_term("Ct.t") != nullptr);
    CHECK(pruned.fit.find_term("Ct.t")->p_value <= 0.10);
    for (const auto& term : pruned.fit.terms) {
        if (term.label == "(Intercept)") continue;
        CHECK(term.p_value <= 0.10);
    }
    // oracle: fitting without the removed columns gives the same coefficients
    ArdlFit direct = fit_ardl(y, {x}, pruned.spec);
    for (std::size_t i = 0; i < direct.terms.size(); ++i) {
        CHECK(direct.terms[i].coefficient ==
              doctest::Approx(pruned.fit.terms[i].coefficient).epsilon(1e-12));
    }

    PruneResult again = prune_insignificant(y, {x}, pruned.spec, 0.10);
    CHECK(again.spec.removed == pruned.spec.removed);
}

TEST_CASE("prune keeps an already-significant model unchanged") {
    Rng rng(3);
    std::vector<double> xv(50), yv(50);
    for (int i = 0; i < 50; ++i) {
        xv[i] = rng.uniform(0.0, 5.0);
        yv[i] = 1.0 + 4.0 * xv[i] + rng.uniform(-0.01, 0.01);
    }
    LagSpec spec;
    spec.exog = {{Role::confirmed(), 0}};
    PruneResult p = prune_insignificant(series(Role::deaths(), yv),
                                        {series(Role::confirmed(), xv)}, spec, 0.10);
    CHECK(p.spec.removed.empty());
}

TEST_CASE("ardl_predict matches hand arithmetic and the fitted-value identity") {
    // hand-built fit with the published deaths-model coefficients
    ArdlFit fit;
    fit.response = Role::deaths();
    fit.spec.q = 1;
    fit.spec.exog = {{Role::confirmed(), 2}, {Role::recovered(), 0}};
    fit.terms = {{"(Intercept)", 481.82, 0, 0, 0}, {"Yt.1", 0.811, 0, 0, 0},
                 {"Ct.t", 0.017, 0, 0, 0},         {"Ct.1", -0.011, 0, 0, 0},
                 {"Ct.2", -0.006, 0, 0, 0},        {"Rt.t", 0.003, 0, 0, 0}};

    LagWindow window;
    window.series = {{Role::deaths(), {10000.0}},
                     {Role::confirmed(), {600000.0, 600000.0, 600000.0}},
                     {Role::recovered(), {300000.0}}};
    CHECK(ardl_predict(fit, window) == doctest::Approx(9491.82).epsilon(1e-12));

    LagWindow zeros;
    zeros.series = {{Role::deaths(), {0.0}},
                    {Role::confirmed(), {0.0, 0.0, 0.0}},
                    {Role::recovered(), {0.0}}};
    CHECK(ardl_predict(fit, zeros) == doctest::Approx(481.82));

    LagWindow short_window;
    short_window.series = {{Role::deaths(), {10000.0}},
                           {Role::confirmed(), {600000.0}},
                           {Role::recovered(), {300000.0}}};
    CHECK_THROWS_AS(ardl_predict(fit, short_window), Error);

    // fitted values over the training rows reproduce target - residuals
    Rng rng(17);
    std::vector<double> yv(30), cv(30);
    for (int i = 0; i < 30; ++i) {
        cv[i] = rng.uniform(0.0, 100.0);
        yv[i] = (i > 0 ? 0.5 * yv[i - 1] : 0.0) + 0.2 * cv[i] + rng.uniform(-1.0, 1.0);
    }
    TimeSeries y = series(Role::deaths(), yv);
    TimeSeries c = series(Role::confirmed(), cv);
    LagSpec spec;
    spec.q = 1;
    spec.exog = {{Role::confirmed(), 1}};
    ArdlFit real_fit = fit_ardl(y, {c}, spec);
    Design design = build_design(y, {c}, spec);
    for (int row = 0; row < design.X.rows(); ++row) {
        // window ending at target index max_lag + row
        std::size_t t = static_cast<std::size_t>(design.max_lag + row);
        LagWindow w;
        w.series = {{Role::deaths(), {yv.begin(), yv.begin() + t}},
                    {Role::confirmed(), {cv.begin(), cv.begin() + t + 1}}};
        double fitted = design.target(row) - real_fit.residuals(row);
        CHECK(ardl_predict(real_fit, w) == doctest::Approx(fitted).epsilon(1e-9));
    }
}

TEST_CASE("term label round trip") {
    CHECK(term_label(Role::confirmed(), 0) == "Ct.t");
    CHECK(term_label(Role::deaths(), 3) == "Yt.3");
    std::vector<Role> roles{Role::deaths(), Role::confirmed(), Role::recovered()};
    TermRef ref = parse_term_label("Rt.2", roles);
    CHECK(ref.role == Role::recovered());
    CHECK(ref.lag == 2);
    CHECK(parse_term_label("Ct.t", roles).lag == 0);
    CHECK_THROWS_AS(parse_term_label("Zt.1", roles), Error);
    CHECK_THROWS_AS(parse_term_label("Ct.x", roles), Error);
}
