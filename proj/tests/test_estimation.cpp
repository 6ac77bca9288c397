#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qwishart/estimation.hpp"
#include "qwishart/state.hpp"

using namespace qwishart;

TEST_CASE("built-in POMs are valid and have the advertised outcome counts") {
  for (const std::string& name : Pom::builtin_names()) {
    Pom pom = Pom::builtin(name);
    CHECK_NOTHROW(pom.validate());
  }
  CHECK(Pom::builtin("crosshair-real").outcomes() == 4);
  CHECK(Pom::builtin("crosshair-complex").outcomes() == 6);
  CHECK(Pom::builtin("trine").outcomes() == 3);
  CHECK(Pom::builtin("tetrahedron").outcomes() == 4);
  CHECK_THROWS_AS(Pom::builtin("nope"), ConfigError);
}

TEST_CASE("born probabilities sum to one and match closed forms") {
  DensityMatrix rho = bloch_to_rho(BlochVector(0.3, 0.0, -0.4));
  for (const std::string& name : Pom::builtin_names()) {
    auto p = born_probabilities(Pom::builtin(name), rho);
    double s = 0.0;
    for (double v : p) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  // crosshair-real: p = (1/4)(1 +- x), (1/4)(1 +- z)
  auto p = born_probabilities(Pom::builtin("crosshair-real"), rho);
  CHECK(p[0] == doctest::Approx(0.25 * 1.3).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.25 * 0.7).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.25 * 0.6).epsilon(1e-12));
  CHECK(p[3] == doctest::Approx(0.25 * 1.4).epsilon(1e-12));
  // trine: p_k = (1/3)(1 + r cos(phi_xz - 2 pi k / 3))
  auto t = born_probabilities(Pom::builtin("trine"), rho);
  double r = 0.5, phi = std::atan2(-0.4, 0.3);
  for (int k = 0; k < 3; ++k)
    CHECK(t[static_cast<std::size_t>(k)] ==
          doctest::Approx((1.0 + r * std::cos(phi - 2.0 * M_PI * k / 3.0)) / 3.0)
              .epsilon(1e-12));
}

TEST_CASE("crosshair-real log posterior has the (1-x^2)(1-z^2) shape") {
  // with unit-sum effects p1 p2 p3 p4 = (1/256)(1-x^2)(1-z^2); the extra
  // any overall 1/16^10 factor is a click-independent constant
  Pom pom = Pom::builtin("crosshair-real");
  ClickRecord clicks{{10, 10, 10, 10}};
  for (double x : {-0.6, 0.0, 0.3}) {
    for (double z : {-0.2, 0.5}) {
      double want = 10.0 * std::log((1.0 - x * x) * (1.0 - z * z) / 256.0);
      CHECK(log_posterior(pom, clicks, BlochVector(x, z)) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("log posterior at the trine center") {
  Pom pom = Pom::builtin("trine");
  ClickRecord clicks{{7, 10, 13}};
  CHECK(log_posterior(pom, clicks, BlochVector(0, 0, 0)) ==
        doctest::Approx(30.0 * std::log(1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("single-outcome clicks are maximized on the aligned boundary state") {
  Pom pom = Pom::builtin("crosshair-real");
  ClickRecord clicks{{25, 0, 0, 0}};
  MlePeak peak = mle(pom, clicks);
  CHECK(peak.on_boundary);
  CHECK(peak.bloch.x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("uniform clicks peak at the origin") {
  for (const std::string& name : Pom::builtin_names()) {
    Pom pom = Pom::builtin(name);
    ClickRecord clicks;
    clicks.counts.assign(static_cast<std::size_t>(pom.outcomes()), 8);
    MlePeak peak = mle(pom, clicks);
    CHECK(peak.spherical.r <= 1e-5);
  }
}

TEST_CASE("tetrahedron MLE regressions against printed spherical peaks") {
  struct Case {
    std::vector<long> clicks;
    double r, theta, phi;
  };
  // published peak positions, cross-checked by an independent scipy SLSQP oracle
  for (const Case& c : {Case{{12, 7, 21, 10}, 0.72332, 2.18302, 1.92956},
                        Case{{5, 20, 23, 7}, 0.989365, 1.73063, 3.10935},
                        Case{{5, 20, 33, 7}, 1.0, 1.88154, 2.94285},
                        Case{{55, 50, 13, 10}, 1.0, 0.096255, 1.49475}}) {
    MlePeak peak = mle(Pom::builtin("tetrahedron"), ClickRecord{c.clicks});
    CHECK(peak.spherical.r == doctest::Approx(c.r).epsilon(2e-3));
    CHECK(peak.spherical.theta == doctest::Approx(c.theta).epsilon(2e-3));
    CHECK(peak.spherical.phi == doctest::Approx(c.phi).epsilon(2e-3));
  }
}

TEST_CASE("trine MLE radius for {7,10,13} is 0.2 sqrt(3)") {
  MlePeak peak = mle(Pom::builtin("trine"), ClickRecord{{7, 10, 13}});
  CHECK(peak.spherical.r == doctest::Approx(0.2 * std::sqrt(3.0)).epsilon(1e-4));
  CHECK(peak.bloch.y == 0.0);
}

TEST_CASE("informationally complete recovery of an interior state") {
  Pom pom = Pom::builtin("tetrahedron");
  DensityMatrix rho0 = bloch_to_rho(BlochVector(0.2, -0.3, 0.4));
  auto p = born_probabilities(pom, rho0);
  ClickRecord clicks;
  for (double v : p) clicks.counts.push_back(std::lround(v * 1000000));
  MlePeak peak = mle(pom, clicks);
  CHECK(peak.bloch.x == doctest::Approx(0.2).epsilon(2e-4));
  CHECK(peak.bloch.y == doctest::Approx(-0.3).epsilon(2e-4));
  CHECK(peak.bloch.z == doctest::Approx(0.4).epsilon(2e-4));
}

TEST_CASE("joint permutation invariance of the MLE") {
  Pom pom = Pom::builtin("tetrahedron");
  Pom perm = pom;
  std::swap(perm.effects[0], perm.effects[2]);
  MlePeak a = mle(pom, ClickRecord{{12, 7, 21, 10}});
  MlePeak b = mle(perm, ClickRecord{{21, 7, 12, 10}});
  CHECK(a.bloch.x == doctest::Approx(b.bloch.x).epsilon(1e-6));
  CHECK(a.bloch.y == doctest::Approx(b.bloch.y).epsilon(1e-6));
  CHECK(a.bloch.z == doctest::Approx(b.bloch.z).epsilon(1e-6));
}

TEST_CASE("click record validation") {
  Pom pom = Pom::builtin("trine");
  CHECK_THROWS_AS((ClickRecord{{1, 2}}.validate(pom)), ConfigError);
  CHECK_THROWS_AS((ClickRecord{{1, -2, 3}}.validate(pom)), ConfigError);
  CHECK_THROWS_AS((ClickRecord{{0, 0, 0}}.validate(pom)), ConfigError);
}

TEST_CASE("AffinePom matches born_probabilities on all built-ins") {
  BlochVector b(0.25, -0.35, 0.15);
  DensityMatrix rho = bloch_to_rho(b);
  for (const std::string& name : Pom::builtin_names()) {
    Pom pom = Pom::builtin(name);
    AffinePom ap(pom);
    auto p = born_probabilities(pom, rho);
    for (std::size_t k = 0; k < p.size(); ++k)
      CHECK(ap.offset[k] + ap.grad[k].dot(b.vec()) ==
            doctest::Approx(p[k]).epsilon(1e-12));
  }
}
