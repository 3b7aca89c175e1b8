#pragma once

namespace lagcast::stats {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
double incomplete_beta(double a, double b, double x);

/// Upper-tail probability P(T > t) for Student's t with df degrees of freedom.
/// Two-sided p-value of a t statistic is 2 * student_t_sf(|t|, df).
double student_t_sf(double t, double df);

/// Upper-tail probability P(F > f) for the F distribution with (df1, df2).
double f_sf(double f, double df1, double df2);

} // namespace lagcast::stats
