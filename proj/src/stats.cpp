#include "qwishart/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwishart {

double log_multigamma(int d, double a) {
  double s = 0.25 * d * (d - 1) * std::log(M_PI);
  for (int i = 1; i <= d; ++i) s += std::lgamma(a - 0.5 * (i - 1));
  return s;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_pochhammer(double a, int k) {
  return std::lgamma(a + k) - std::lgamma(a);
}

// Regularized lower incomplete gamma by series (x < a+1) or continued
// fraction (otherwise). Standard Lentz/series forms.
double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15)
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // continued fraction for Q
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

double chi2_sf(double x, int k) {
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * k, 0.5 * x);
}

double chi2_test_p(const std::vector<double>& observed,
                   const std::vector<double>& expected, int extra_constraints) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi2_test_p: size mismatch");
  double stat = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
    ++used;
  }
  int dof = used - 1 - extra_constraints;
  if (dof < 1) dof = 1;
  return chi2_sf(stat, dof);
}

namespace {
// Asymptotic Kolmogorov tail Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_q(double t) {
  if (t < 1e-8) return 1.0;
  if (t < 1.18) {
    // theta-function form of K(t); the alternating series converges too
    // slowly for small arguments
    double x = M_PI * M_PI / (8.0 * t * t);
    double k = std::sqrt(2.0 * M_PI) / t *
               (std::exp(-x) + std::exp(-9.0 * x) + std::exp(-25.0 * x));
    return std::clamp(1.0 - k, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}
}  // namespace

double ks_test_p(std::vector<double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw std::invalid_argument("ks_test_p: empty data");
  std::sort(data.begin(), data.end());
  double n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double f = cdf(data[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  return kolmogorov_q(t);
}

namespace {
double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol) {
  if (lo == hi) return 0.0;
  double m = 0.5 * (lo + hi);
  double fa = f(lo), fm = f(m), fb = f(hi);
  double whole = simpson(lo, hi, fa, fm, fb);
  double scale = std::max(std::fabs(whole), 1e-300);
  return adapt(f, lo, hi, fa, fm, fb, whole, rel_tol * scale, 40);
}

double lag1_autocorrelation(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double c = x[i] - mean;
    den += c * c;
    if (i + 1 < x.size()) num += c * (x[i + 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace qwishart
