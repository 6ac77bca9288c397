#include "qwishart/blr.hpp"

#include <algorithm>
#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qwishart {

bool region_indicator(const Pom& pom, const ClickRecord& clicks, double lambda,
                      const BlochVector& b, double log_like_at_mle) {
  if (lambda < 0.0 || lambda > 1.0)
    throw ConfigError("region_indicator: lambda in [0, 1] required");
  if (lambda == 0.0) return true;
  double ll = log_posterior(pom, clicks, b);
  return ll >= std::log(lambda) + log_like_at_mle - 1e-12;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = i / 100.0;
  return grid;
}

namespace {

// Log-likelihoods for a whole sample; element-independent, so the parallel
// loop is deterministic for any worker count.
std::vector<double> sample_loglikes(const AffinePom& ap, const ClickRecord& clicks,
                                    const std::vector<BlochVector>& sample,
                                    int workers) {
  std::vector<double> ll(sample.size());
  const long n = static_cast<long>(sample.size());
#if defined(_OPENMP)
  if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < n; ++i)
    ll[static_cast<std::size_t>(i)] = ap.log_posterior(clicks, sample[static_cast<std::size_t>(i)]);
  (void)workers;
  return ll;
}

double fraction_at_least(const std::vector<double>& sorted_ll, double threshold) {
  auto it = std::lower_bound(sorted_ll.begin(), sorted_ll.end(), threshold);
  return static_cast<double>(sorted_ll.end() - it) / static_cast<double>(sorted_ll.size());
}

}  // namespace

BlrCurve blr_curves(const Pom& pom, const ClickRecord& clicks,
                    const std::vector<BlochVector>& uniform_sample,
                    const std::vector<BlochVector>& posterior_sample,
                    const std::vector<double>& lambda_grid, int workers) {
  pom.validate();
  clicks.validate(pom);
  if (uniform_sample.empty()) throw EmptySample("blr_curves: uniform sample is empty");
  if (posterior_sample.empty()) throw EmptySample("blr_curves: posterior sample is empty");
  if (lambda_grid.size() < 2) throw ConfigError("blr_curves: need at least 2 lambdas");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (lambda_grid[i] < 0.0 || lambda_grid[i] > 1.0)
      throw ConfigError("blr_curves: lambda in [0, 1] required");
    if (i > 0 && lambda_grid[i] <= lambda_grid[i - 1])
      throw ConfigError("blr_curves: lambda grid must be strictly increasing");
  }

  AffinePom ap(pom);
  MlePeak peak = mle(pom, clicks);
  const double ll_peak = peak.log_likelihood_at_peak;

  std::vector<double> ll_uni = sample_loglikes(ap, clicks, uniform_sample, workers);
  std::vector<double> ll_post = sample_loglikes(ap, clicks, posterior_sample, workers);
  std::sort(ll_uni.begin(), ll_uni.end());
  std::sort(ll_post.begin(), ll_post.end());

  BlrCurve curve;
  curve.lambdas = lambda_grid;
  const std::size_t m = lambda_grid.size();
  curve.size.resize(m);
  curve.credibility_empirical.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double lam = lambda_grid[i];
    if (lam == 0.0) {
      curve.size[i] = 1.0;
      curve.credibility_empirical[i] = 1.0;
    } else {
      double thr = std::log(lam) + ll_peak - 1e-12;
      curve.size[i] = fraction_at_least(ll_uni, thr);
      curve.credibility_empirical[i] = fraction_at_least(ll_post, thr);
    }
  }

  // c_theory(lambda) = (lambda s(lambda) + int_lambda^1 s) / int_0^1 s.
  // With x_j = L_j / L_max over the uniform sample, the integrals of the
  // empirical size curve are exact sums: int_0^1 s = mean(x) and
  // int_lambda^1 s = mean(max(0, x - lambda)); no quadrature grid is
  // involved, so the steep drop of s near lambda = 0 costs no accuracy.
  const std::size_t nu = ll_uni.size();
  std::vector<double> x(nu);
  for (std::size_t j = 0; j < nu; ++j)
    x[j] = std::min(1.0, std::exp(ll_uni[j] - ll_peak));  // ascending with ll_uni
  std::vector<double> suffix(nu + 1, 0.0);
  for (std::size_t j = nu; j-- > 0;) suffix[j] = suffix[j + 1] + x[j];
  double total = suffix[0] / static_cast<double>(nu);
  if (total <= 0.0) throw EmptySample("blr_curves: degenerate size curve");

  curve.credibility_theoretical.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double lam = lambda_grid[i];
    auto it = std::lower_bound(x.begin(), x.end(), lam);
    std::size_t idx = static_cast<std::size_t>(it - x.begin());
    double above = static_cast<double>(nu - idx);
    double tail = (suffix[idx] - lam * above) / static_cast<double>(nu);
    curve.credibility_theoretical[i] = std::min(1.0, (lam * curve.size[i] + tail) / total);
  }
  return curve;
}

}  // namespace qwishart
