// Bounded-likelihood-region size and credibility curves: the sample-quality
// certificate.

#pragma once

#include <vector>

#include "qwishart/estimation.hpp"

namespace qwishart {

struct BlrCurve {
  std::vector<double> lambdas;
  std::vector<double> size;
  std::vector<double> credibility_empirical;
  std::vector<double> credibility_theoretical;
};

// true iff log L(D|rho) >= log(lambda) + log L(D|rho_ML). The peak value is
// passed in so a curve evaluation solves the MLE once.
bool region_indicator(const Pom& pom, const ClickRecord& clicks, double lambda,
                      const BlochVector& b, double log_like_at_mle);

// s = uniform-sample fraction inside the region, c_emp = posterior-sample
// fraction, c_theory = (lambda s + int_lambda^1 s) / int_0^1 s by trapezoid
// rule on the grid. Throws EmptySample.
BlrCurve blr_curves(const Pom& pom, const ClickRecord& clicks,
                    const std::vector<BlochVector>& uniform_sample,
                    const std::vector<BlochVector>& posterior_sample,
                    const std::vector<double>& lambda_grid, int workers = 0);

// 101 uniform points on [0, 1].
std::vector<double> default_lambda_grid();

}  // namespace qwishart
