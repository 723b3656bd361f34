#pragma once

// Special functions and distribution tails used for asymptotic p-values.
// All tail probabilities are evaluated in the upper-tail parameterization
// directly (series or continued fraction), never as 1 - CDF, so genome-wide
// thresholds around 5e-8 keep full relative accuracy.

namespace jls::prob {

// Natural log of the gamma function, x > 0.
// Stirling series after shifting the argument above 16; relative error
// below 1e-13 on [1e-3, 1e6].
double ln_gamma(double x);

// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
// Series for x < s + 1, Lentz continued fraction otherwise.
double reg_gamma_upper(double s, double x);

// Regularized incomplete beta I_x(a, b).
double reg_beta(double a, double b, double x);

// Survival functions. chi2_sf(x, 4) == exp(-x/2) * (1 + x/2).
double chi2_sf(double x, double df);

// One-sided upper tail P(T > t); callers form two-sided p as 2 * sf(|t|).
double student_t_sf(double t, double df);

double f_sf(double x, double d1, double d2);

// Standard normal quantile, p in (0, 1). Wichura's PPND16 rational
// approximations; absolute error well below 1e-9.
double normal_quantile(double p);

}  // namespace jls::prob
