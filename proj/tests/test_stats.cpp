#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qwishart/stats.hpp"

using namespace qwishart;

TEST_CASE("log_multigamma against the product formula") {
  // Gamma_2(2) = pi^{1/2} Gamma(2) Gamma(3/2) = pi/2
  CHECK(log_multigamma(2, 2.0) == doctest::Approx(std::log(M_PI / 2.0)).epsilon(1e-14));
  // Gamma_1 reduces to Gamma
  CHECK(log_multigamma(1, 3.7) == doctest::Approx(std::lgamma(3.7)).epsilon(1e-14));
}

TEST_CASE("log_binomial and log_pochhammer") {
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0).epsilon(1e-12));
  CHECK(std::exp(log_pochhammer(2.0, 3)) == doctest::Approx(24.0).epsilon(1e-12));  // 2*3*4
  CHECK(log_pochhammer(5.0, 0) == doctest::Approx(0.0));
}

TEST_CASE("regularized incomplete gamma reference values") {
  // frozen scipy.special.gammainc oracles
  CHECK(gamma_p(0.5, 0.25) == doctest::Approx(0.5204998778130466).epsilon(1e-12));
  CHECK(gamma_p(3.0, 2.0) == doctest::Approx(0.32332358381693654).epsilon(1e-12));
  CHECK(gamma_p(10.0, 15.0) == doctest::Approx(0.9301463393005901).epsilon(1e-12));
  CHECK(gamma_p(2.0, 0.0) == 0.0);
  CHECK(gamma_q(3.0, 2.0) == doctest::Approx(1.0 - 0.32332358381693654).epsilon(1e-12));
}

TEST_CASE("chi-square survival function reference values") {
  // frozen scipy.stats.chi2.sf oracles
  CHECK(chi2_sf(3.84, 1) == doctest::Approx(0.05004352124870519).epsilon(1e-10));
  CHECK(chi2_sf(10.0, 5) == doctest::Approx(0.07523524614651217).epsilon(1e-10));
  CHECK(chi2_sf(25.0, 10) == doctest::Approx(0.005345505487134069).epsilon(1e-10));
  CHECK(chi2_sf(-1.0, 4) == 1.0);
}

TEST_CASE("chi2_test_p is 1 for a perfect fit and small for a terrible one") {
  std::vector<double> e = {100, 200, 300, 400};
  CHECK(chi2_test_p(e, e) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> o = {400, 300, 200, 100};
  CHECK(chi2_test_p(o, e) < 1e-10);
}

TEST_CASE("KS p-value tail matches the Kolmogorov asymptotic") {
  // With d chosen so the scaled statistic t is ~1.0, p ~ 0.27 (kstwobign oracle).
  // Here we test the tail function indirectly through a constructed sample.
  std::vector<double> u;
  for (int i = 0; i < 1000; ++i) u.push_back((i + 0.5) / 1000.0);
  double p = ks_test_p(u, [](double x) { return x; });
  CHECK(p > 0.999);  // perfect grid sample
}

TEST_CASE("adaptive Simpson integrates polynomials and peaked functions") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0, 1e-10) ==
        doctest::Approx(9.0).epsilon(1e-9));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-9));
  // sharp Gaussian
  double v = integrate([](double x) { return std::exp(-100.0 * x * x); }, -1.0, 1.0, 1e-9);
  CHECK(v == doctest::Approx(std::sqrt(M_PI / 100.0)).epsilon(1e-7));
}

TEST_CASE("lag-1 autocorrelation of simple sequences") {
  std::vector<double> alt;
  for (int i = 0; i < 1000; ++i) alt.push_back(i % 2 == 0 ? 1.0 : -1.0);
  CHECK(lag1_autocorrelation(alt) == doctest::Approx(-1.0).epsilon(0.01));
  std::vector<double> ramp;
  for (int i = 0; i < 1000; ++i) ramp.push_back(i);
  CHECK(lag1_autocorrelation(ramp) > 0.99);
}
