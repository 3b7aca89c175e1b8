#include "lagcast/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <limits>

using lagcast::stats::f_sf;
using lagcast::stats::incomplete_beta;
using lagcast::stats::student_t_sf;

namespace {

double t_density(double x, double df) {
    double ln = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                0.5 * std::log(df * M_PI) - 0.5 * (df + 1.0) * std::log1p(x * x / df);
    return std::exp(ln);
}

// Adaptive Simpson quadrature; the independent oracle for the tail
// probabilities computed through the incomplete beta function.
double simpson(double (*f)(double, double), double df, double a, double b) {
    double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a, df) + 4.0 * f(c, df) + f(b, df));
}

double adaptive(double (*f)(double, double), double df, double a, double b, double whole,
                double tol, int depth) {
    double c = 0.5 * (a + b);
    double left = simpson(f, df, a, c);
    double right = simpson(f, df, c, b);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, df, a, c, left, tol / 2.0, depth - 1) +
           adaptive(f, df, c, b, right, tol / 2.0, depth - 1);
}

// density after the substitution x = 1/u, which maps the infinite tail onto a
// finite interval and keeps heavy tails exact
double t_density_inv(double u, double df) {
    if (u <= 0.0) return df > 1.0 ? 0.0 : 1.0 / M_PI;  // analytic limits
    return t_density(1.0 / u, df) / (u * u);
}

double integrate(double (*f)(double, double), double df, double a, double b) {
    double whole = simpson(f, df, a, b);
    return adaptive(f, df, a, b, whole, 1e-13, 44);
}

double t_sf_quadrature(double t, double df) {
    if (t < 1.0) {
        return integrate(t_density, df, t, 1.0) + integrate(t_density_inv, df, 0.0, 1.0);
    }
    return integrate(t_density_inv, df, 0.0, 1.0 / t);
}

} // namespace

TEST_CASE("t upper tail against the quadrature oracle") {
    CHECK(std::fabs(student_t_sf(2.0, 10.0) - 0.03669) < 1e-4);
    CHECK(student_t_sf(2.0, 10.0) == doctest::Approx(t_sf_quadrature(2.0, 10.0)).epsilon(1e-8));

    for (double df : {1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 250.0}) {
        for (double t : {0.1, 0.5, 1.0, 2.0, 3.5, 6.0}) {
            CAPTURE(df);
            CAPTURE(t);
            CHECK(student_t_sf(t, df) ==
                  doctest::Approx(t_sf_quadrature(t, df)).epsilon(1e-8));
        }
    }
}

TEST_CASE("t tail symmetry and limits") {
    for (double df : {1.0, 3.0, 17.0}) {
        CHECK(student_t_sf(0.0, df) == doctest::Approx(0.5));
        CHECK(student_t_sf(-2.0, df) == doctest::Approx(1.0 - student_t_sf(2.0, df)));
    }
    CHECK(student_t_sf(1e8, 5.0) < 1e-12);
    CHECK(student_t_sf(std::numeric_limits<double>::infinity(), 5.0) == 0.0);
}

TEST_CASE("two-sided p is monotone decreasing in |t|") {
    for (double df : {4.0, 12.0, 250.0}) {
        double previous = 1.1;
        for (double t = 0.0; t < 8.0; t += 0.05) {
            double p = 2.0 * student_t_sf(t, df);
            CHECK(p <= previous + 1e-15);
            previous = p;
        }
    }
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.1, 0.37, 0.5, 0.92}) {
        CHECK(incomplete_beta(2.5, 4.0, x) ==
              doctest::Approx(1.0 - incomplete_beta(4.0, 2.5, 1.0 - x)).epsilon(1e-12));
    }
    // I_x(1,1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("F upper tail: special cases") {
    // F(1, df2) = T^2: P(F > f) = 2 P(T > sqrt(f))
    for (double df2 : {5.0, 20.0}) {
        for (double f : {0.5, 1.0, 4.0}) {
            CHECK(f_sf(f, 1.0, df2) ==
                  doctest::Approx(2.0 * student_t_sf(std::sqrt(f), df2)).epsilon(1e-10));
        }
    }
    CHECK(f_sf(0.0, 3.0, 7.0) == 1.0);
    CHECK(f_sf(1e12, 3.0, 7.0) < 1e-10);
}
