#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qwishart/rng.hpp"
#include "qwishart/stats.hpp"

using namespace qwishart;

TEST_CASE("identical (seed, stream) reproduces the identical sequence") {
  RandomStream a(123, 5), b(123, 5);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u32() == b.next_u32());
}

TEST_CASE("distinct stream ids give distinct sequences") {
  RandomStream a(123, 0), b(123, 1), c(124, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint32_t va = a.next_u32();
    if (va == b.next_u32()) ++same_ab;
    if (va == c.next_u32()) ++same_ac;
  }
  CHECK(same_ab < 5);
  CHECK(same_ac < 5);
}

TEST_CASE("uniform doubles live in [0,1) and pass a KS test") {
  RandomStream s(7, 0);
  std::vector<double> u(20000);
  for (double& v : u) {
    v = s.next_double();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  double p = ks_test_p(u, [](double x) { return x; });
  CHECK(p > 0.01);
}

TEST_CASE("normal moments") {
  RandomStream s(11, 3);
  const int n = 200000;
  double m = 0.0, m2 = 0.0, m3 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = s.next_normal();
    m += x;
    m2 += x * x;
    m3 += x * x * x;
  }
  m /= n;
  m2 /= n;
  m3 /= n;
  CHECK(std::fabs(m) < 0.01);
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::fabs(m3) < 0.03);
}

TEST_CASE("complex normal has E|z|^2 = 1 and uncorrelated quadratures") {
  RandomStream s(17, 0);
  const int n = 200000;
  double e2 = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    auto z = s.next_cnormal();
    e2 += std::norm(z);
    cross += z.real() * z.imag();
  }
  CHECK(e2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::fabs(cross / n) < 0.01);
}

TEST_CASE("normal draws pass a KS test against Phi") {
  RandomStream s(23, 9);
  std::vector<double> x(20000);
  for (double& v : x) v = s.next_normal();
  double p = ks_test_p(x, [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); });
  CHECK(p > 0.01);
}
