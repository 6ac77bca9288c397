// Closed-form evaluation of the non-zero-mean quantum Wishart density in
// log scale, for rank-1 mean matrices.
//
// The density splits into det(rho)^q / tr(Sigma^-1 rho)^p prefactors and a
// confluent-series factor S(u) = sum_k u^k Gamma(a+k) / (k! Gamma(b+k))
// evaluated at the non-centrality scalar u = xi^2. When a - b is a positive
// integer m, the Kummer transform reduces S to
//   Gamma(a)/Gamma(b) e^u sum_{k<=m} C(m,k) u^k / (b)_k,
// a finite polynomial with positive coefficients; otherwise the series is
// summed directly in log scale.

#pragma once

#include <vector>

#include "qwishart/types.hpp"
#include "qwishart/wishart.hpp"

namespace qwishart {

// Non-centrality scalar.
// Real: tr(S^-1 M M^T S^-1 rho) / (2 tr(S^-1 rho));
// complex: tr(S^-1 M M^dag S^-1 rho) / tr(S^-1 rho).
double xi_squared(const WishartParams& p, const DensityMatrix& rho);

// log S(u) for S as above; a > 0, b > 0, u >= 0. Throws NonConvergence if
// the series tail bound is not met within 1e5 terms.
double series_factor(double a, double b, double u);

// Logarithmic derivative S'(u)/S(u); used by the peak solvers. Follows from
// S'_{a,b} = S_{a+1,b+1}.
double series_log_derivative(double a, double b, double u);

struct LogDensity {
  double log_value = 0.0;
  // The flat-measure normalization over state space is never included.
  bool exact_constant_dropped = true;
};

// Unnormalized log density of the trace-normalized Wishart state rho under
// ensemble p, including the C_R / C_C constants. Throws SingularState when
// det(rho) <= 0 while the determinant exponent is negative.
LogDensity log_density(const WishartParams& p, const DensityMatrix& rho);
double log_density_value(const WishartParams& p, const DensityMatrix& rho);

// Integral of exp(log_density) over the Bloch disc (real) or ball (complex)
// in flat Bloch coordinates; adaptive quadrature, relative error <= 1e-6.
// Requires d = 2.
double normalization_constant_qubit(const WishartParams& p);

// log of the same integral, shift-stabilized; safe for large N where the
// unlogged value overflows.
double log_normalization_constant_qubit(const WishartParams& p);

// Precomputed qubit evaluator for the sampling hot path. Valid for Sigma = I
// and rank-1 mean; then xi^2 = xi_coef * (1 + e . b) with e the unit Bloch
// direction of the mean's column space and the density depends on (r, e.b)
// only.
class QubitAxialDensity {
 public:
  explicit QubitAxialDensity(const WishartParams& p);

  // Unnormalized log density at Bloch point b.
  double logpdf(const BlochVector& b) const;

  double xi_coef() const { return xi_coef_; }
  double det_exponent() const { return det_exponent_; }
  Eigen::Vector3d axis() const { return axis_; }
  Field field() const { return field_; }

 private:
  Field field_;
  double det_exponent_;   // exponent of det(rho)
  double xi_coef_;        // xi^2 = xi_coef * (1 + e.b)
  Eigen::Vector3d axis_;  // unit mean direction e (arbitrary if central)
  double a_, b_;
  int m_ = -1;                       // a - b when a positive integer, else -1
  std::vector<double> log_coef_;    // log of Kummer polynomial coefficients
  double log_front_ = 0.0;          // lgamma(a) - lgamma(b) + constants
};

}  // namespace qwishart
