// Small statistics toolbox used by the tests and the quality harness:
// log-gamma helpers, chi-squared and Kolmogorov-Smirnov tail probabilities,
// adaptive quadrature.

#pragma once

#include <functional>
#include <vector>

namespace qwishart {

// log of the multivariate gamma function Gamma_d(a).
double log_multigamma(int d, double a);

double log_binomial(int n, int k);
double log_pochhammer(double a, int k);

// Regularized incomplete gamma functions.
double gamma_p(double a, double x);  // lower
double gamma_q(double a, double x);  // upper

// Survival function of chi-squared with k degrees of freedom.
double chi2_sf(double x, int k);

// Pearson chi-squared p-value of observed counts against expected counts;
// dof = bins - 1 - extra_constraints.
double chi2_test_p(const std::vector<double>& observed,
                   const std::vector<double>& expected, int extra_constraints = 0);

// One-sample KS test of sorted data against a CDF; returns p via the
// asymptotic Kolmogorov distribution.
double ks_test_p(std::vector<double> data, const std::function<double(double)>& cdf);

// Adaptive Simpson quadrature with relative tolerance.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-8);

// Lag-1 autocorrelation of a series.
double lag1_autocorrelation(const std::vector<double>& x);

}  // namespace qwishart
