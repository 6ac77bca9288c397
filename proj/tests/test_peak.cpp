#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qwishart/peak.hpp"
#include "qwishart/state.hpp"

using namespace qwishart;

TEST_CASE("worked example: r=0.5, N=4, real") {
  CHECK(fit_mean_radial(0.5, 4, Field::Real) == doctest::Approx(0.438946).epsilon(2e-5));
}

TEST_CASE("table of trine-matched means per column count") {
  // target radius = trine {7,10,13} MLE radius 0.2*sqrt(3); mu values frozen
  // from an independent mpmath root-solve of the radial stationarity
  const double r = 0.2 * std::sqrt(3.0);
  CHECK(fit_mean_radial(r, 4, Field::Real) == doctest::Approx(0.326883).epsilon(1e-4));
  CHECK(fit_mean_radial(r, 10, Field::Real) == doctest::Approx(0.587082).epsilon(1e-4));
  CHECK(fit_mean_radial(r, 22, Field::Real) == doctest::Approx(0.666112).epsilon(1e-4));
}

TEST_CASE("mu grows with N at fixed radius and vanishes as r -> 0") {
  double m4 = fit_mean_radial(0.4, 4, Field::Real);
  double m10 = fit_mean_radial(0.4, 10, Field::Real);
  double m22 = fit_mean_radial(0.4, 22, Field::Real);
  CHECK(m4 < m10);
  CHECK(m10 < m22);
  CHECK(fit_mean_radial(1e-8, 6, Field::Complex) == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("returned mu is a stationary point of the radial log-density") {
  for (auto [N, field] : std::vector<std::pair<int, Field>>{{4, Field::Real},
                                                            {7, Field::Complex}}) {
    double r = 0.55;
    double mu = fit_mean_radial(r, N, field);
    WishartParams p = WishartParams::axial(field, 2, N, mu);
    auto f = [&](double x) { return log_density_value(p, bloch_to_rho(BlochVector(x, 0.0, 0.0))); };
    double h = 1e-5;
    CHECK(std::fabs((f(r + h) - f(r - h)) / (2.0 * h)) < 1e-3);
  }
}

TEST_CASE("boundary-peaked families have no interior root") {
  CHECK_THROWS_AS(fit_mean_radial(0.5, 2, Field::Complex), NoRoot);  // det exponent 0
  CHECK_THROWS_AS(fit_mean_radial(0.5, 3, Field::Real), NoRoot);
  CHECK_THROWS_AS(fit_mean_radial(1.0, 4, Field::Real), NoRoot);  // boundary target
}

TEST_CASE("build_qubit_proposal places the argmax at the target") {
  struct Case {
    BlochVector target;
    int N;
    Field field;
  };
  for (const Case& c : {Case{BlochVector(0.5 / std::sqrt(2.0), 0.5 / std::sqrt(2.0)), 4,
                             Field::Real},
                        Case{BlochVector(0.0, 0.0, 0.7), 6, Field::Complex}}) {
    QubitProposal qp = build_qubit_proposal(c.target, c.N, c.field);
    QubitAxialDensity f(qp.params);
    Rotation3 inv = qp.rotation.transpose();
    double best = -1e308;
    BlochVector arg;
    const double h = 0.005;
    for (double x = -1.0; x <= 1.0; x += h)
      for (double y = c.field == Field::Real ? 0.0 : -1.0;
           y <= (c.field == Field::Real ? 0.0 : 1.0); y += h)
        for (double z = -1.0; z <= 1.0; z += h) {
          BlochVector b(x, y, z);
          if (b.r() >= 1.0) continue;
          double v = f.logpdf(rotate(inv, b));
          if (v > best) {
            best = v;
            arg = b;
          }
        }
    CHECK(std::fabs(arg.x - c.target.x) <= 0.011);
    CHECK(std::fabs(arg.y - c.target.y) <= 0.011);
    CHECK(std::fabs(arg.z - c.target.z) <= 0.011);
  }
}

TEST_CASE("central target needs no rotation") {
  QubitProposal qp = build_qubit_proposal(BlochVector(0, 0, 0), 5, Field::Complex);
  CHECK(qp.params.M.cwiseAbs().maxCoeff() == 0.0);
  CHECK((qp.rotation - Rotation3::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stationary_params: M2 = 0 reproduces the central closed form") {
  for (int N : {4, 6}) {
    DensityMatrix rho_p = bloch_to_rho(BlochVector(0.3, -0.1, 0.2));
    const int d = 2;
    StationarySolution sol = stationary_params(rho_p, Matrix::Zero(d, N), N, Field::Complex);
    Matrix want = (static_cast<double>(N) * d / (N - d)) *
                  (rho_p.rho.inverse() +
                   (static_cast<double>(d) * d / (N - d)) * Matrix::Identity(d, d))
                      .inverse();
    CHECK((sol.Sigma1 - want).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(sol.M1.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("stationary_params: maximally mixed target gives isotropic Sigma1") {
  DensityMatrix rho_p(Matrix::Identity(2, 2) * Cplx(0.5, 0.0));
  StationarySolution sol = stationary_params(rho_p, Matrix::Zero(2, 5), 5, Field::Complex);
  CHECK(std::fabs(sol.Sigma1(0, 1)) < 1e-14);
  CHECK(sol.Sigma1(0, 0).real() == doctest::Approx(sol.Sigma1(1, 1).real()).epsilon(1e-14));
}

TEST_CASE("stationary_params: random rank-1 means give tiny gradients") {
  RandomStream stream(31, 0);
  for (int N : {4, 6}) {
    for (int trial = 0; trial < 10; ++trial) {
      BlochVector b = sample_uniform_ball(stream);
      b = BlochVector(0.8 * b.x, 0.8 * b.y, 0.8 * b.z);  // keep full rank
      DensityMatrix rho_p = bloch_to_rho(b);
      // random rank-1 M2 = u v^T
      Eigen::Vector2cd u;
      u << Cplx(stream.next_normal(), stream.next_normal()),
          Cplx(stream.next_normal(), stream.next_normal());
      Eigen::VectorXcd v(N);
      for (int j = 0; j < N; ++j) v(j) = Cplx(stream.next_normal(), stream.next_normal());
      Matrix M2 = 0.3 * u * v.transpose();
      StationarySolution sol = stationary_params(rho_p, M2, N, Field::Complex);
      CHECK(sol.residual <= 1e-6);
    }
  }
}

TEST_CASE("verify_stationary flags a perturbed covariance") {
  DensityMatrix rho_p = bloch_to_rho(BlochVector(0.4, 0.1, -0.2));
  Matrix M2 = Matrix::Zero(2, 6);
  StationarySolution sol = stationary_params(rho_p, M2, 6, Field::Complex);
  WishartParams p;
  p.field = Field::Complex;
  p.d = 2;
  p.N = 6;
  p.M = sol.M1;
  p.Sigma = sol.Sigma1;
  p.Sigma(0, 0) *= 1.05;
  CHECK(verify_stationary(p, rho_p) > 1e-3);
}

TEST_CASE("stationary_params rejects rank-deficient targets") {
  DensityMatrix pure = bloch_to_rho(BlochVector(0, 0, 1.0));
  CHECK_THROWS_AS(stationary_params(pure, Matrix::Zero(2, 5), 5, Field::Complex),
                  NotFullRank);
}
