#include "qwishart/peak.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qwishart/state.hpp"

namespace qwishart {

namespace {

struct RadialShape {
  double det_exponent;
  double xi_coef;  // xi^2 = xi_coef * mu^2 * (1 + x)
  double a, b;
};

RadialShape radial_shape(int N, Field field) {
  if (field == Field::Real) {
    if (N < 3) throw Error("fit_mean_radial: real field requires N >= 3");
    return {0.5 * (N - 3), 0.5 * N, static_cast<double>(N), 0.5 * N};
  }
  if (N < 2) throw Error("fit_mean_radial: complex field requires N >= 2");
  return {static_cast<double>(N - 2), 2.0 * N, 2.0 * N, static_cast<double>(N)};
}

}  // namespace

double fit_mean_radial(double r, int N, Field field) {
  if (!(r > 0.0 && r <= 1.0)) throw Error("fit_mean_radial: r in (0, 1] required");
  RadialShape s = radial_shape(N, field);
  if (r >= 1.0 - 1e-14 || s.det_exponent == 0.0) {
    std::ostringstream msg;
    msg << "fit_mean_radial: no interior stationary point for r=" << r << ", N=" << N
        << " (" << field_name(field) << "); the radial derivative "
        << (s.det_exponent == 0.0 ? "never vanishes (boundary-peaked family)"
                                  : "diverges at the boundary");
    if (s.det_exponent == 0.0) throw NoRoot(msg.str());
    if (r >= 1.0 - 1e-14) throw NoRoot(msg.str());
  }
  // d/dx log f at x = r: det term + T1(xi^2) * d(xi^2)/dx.
  auto deriv = [&](double mu) {
    double u = s.xi_coef * mu * mu * (1.0 + r);
    double t1 = series_log_derivative(s.a, s.b, u);
    return -2.0 * s.det_exponent * r / (1.0 - r * r) + t1 * s.xi_coef * mu * mu;
  };
  const double mu_max = 20.0;
  double lo = 0.0, flo = deriv(0.0);
  if (flo >= 0.0) {
    // Degenerate only when r -> 0; mu -> 0 there.
    return 0.0;
  }
  double hi = mu_max;
  if (deriv(hi) <= 0.0) {
    std::ostringstream msg;
    msg << "fit_mean_radial: no sign change in [0, " << mu_max << "] for r=" << r
        << ", N=" << N << "; radial derivative profile:";
    for (double m : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) msg << " d(" << m << ")=" << deriv(m);
    throw NoRoot(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (deriv(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

QubitProposal build_qubit_proposal(const BlochVector& target, int N, Field field) {
  double r = target.r();
  if (r > 1.0 + 1e-10) throw RadiusOutOfRange("build_qubit_proposal: |target| > 1");
  QubitProposal out;
  if (r < 1e-12) {
    out.params = WishartParams::central(field, 2, N);
    out.rotation = Rotation3::Identity();
    return out;
  }
  double mu = fit_mean_radial(std::min(r, 1.0), N, field);
  out.params = WishartParams::axial(field, 2, N, mu);
  out.rotation = align_rotation(BlochVector(1.0, 0.0, 0.0), target);
  return out;
}

namespace {

// Orthonormal traceless Hermitian basis; real field restricts to real
// symmetric generators.
std::vector<Matrix> tangent_basis(int d, Field field) {
  std::vector<Matrix> basis;
  const double inv_sqrt2 = 0.7071067811865475244;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Matrix H = Matrix::Zero(d, d);
      H(i, j) = H(j, i) = Cplx(inv_sqrt2, 0.0);
      basis.push_back(H);
      if (field == Field::Complex) {
        Matrix K = Matrix::Zero(d, d);
        K(i, j) = Cplx(0.0, -inv_sqrt2);
        K(j, i) = Cplx(0.0, inv_sqrt2);
        basis.push_back(K);
      }
    }
  for (int l = 1; l < d; ++l) {
    Matrix H = Matrix::Zero(d, d);
    double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) H(i, i) = Cplx(norm, 0.0);
    H(l, l) = Cplx(-static_cast<double>(l) * norm, 0.0);
    basis.push_back(H);
  }
  return basis;
}

}  // namespace

double verify_stationary(const WishartParams& p, const DensityMatrix& rho_p) {
  const double step = 1e-5;
  double norm2 = 0.0;
  for (const Matrix& H : tangent_basis(p.d, p.field)) {
    DensityMatrix plus(rho_p.rho + step * H);
    DensityMatrix minus(rho_p.rho - step * H);
    double g = (log_density_value(p, plus) - log_density_value(p, minus)) / (2.0 * step);
    norm2 += g * g;
  }
  return std::sqrt(norm2);
}

StationarySolution stationary_params(const DensityMatrix& rho_p, const Matrix& M2,
                                     int N, Field field) {
  const int d = rho_p.dim();
  if (N <= d) throw Error("stationary_params: N > d required");
  if (M2.rows() != d) throw DimensionMismatch("stationary_params: M2 must have d rows");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_p.rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-10)
    throw NotFullRank("stationary_params: rho_p must be full rank");

  double alpha, beta, kappa, a, b;
  if (field == Field::Real) {
    alpha = 0.5 * (N - d - 1);
    beta = 0.5 * d * N;
    kappa = 0.5;
    a = 0.5 * d * N;
    b = 0.5 * N;
  } else {
    alpha = static_cast<double>(N - d);
    beta = static_cast<double>(d) * N;
    kappa = 1.0;
    a = static_cast<double>(d) * N;
    b = static_cast<double>(N);
  }

  Matrix mm2 = M2 * M2.adjoint();
  double tr2 = (mm2 * rho_p.rho).trace().real();
  Matrix rho_inv = rho_p.rho.inverse();
  Matrix eye = Matrix::Identity(d, d);

  double t1p = 0.0;
  Matrix Sigma1, M1;
  Matrix prev = Matrix::Zero(d, d);
  bool converged = false;
  for (int it = 0; it < 500; ++it) {
    double scale = beta + kappa * t1p * tr2;
    Matrix denom = alpha * rho_inv + (beta - alpha * d) * eye + kappa * t1p * mm2;
    Sigma1 = scale * denom.inverse();
    Sigma1 = 0.5 * (Sigma1 + Sigma1.adjoint().eval());  // symmetrize rounding
    M1 = Sigma1 * M2;
    if (it > 0 && (Sigma1 - prev).cwiseAbs().maxCoeff() <= 1e-10) {
      converged = true;
      break;
    }
    prev = Sigma1;
    double xi2 = kappa * tr2;
    t1p = xi2 > 0.0 ? series_log_derivative(a, b, xi2) : series_log_derivative(a, b, 0.0);
    if (tr2 == 0.0) t1p = 0.0;  // central case: T1 multiplies a zero term
  }
  if (!converged)
    throw FixedPointDivergence("stationary_params: fixed point not converged in 500 iterations");

  WishartParams p;
  p.field = field;
  p.d = d;
  p.N = N;
  p.M = M1;
  p.Sigma = Sigma1;
  if (field == Field::Real) {
    p.M = M1.real().cast<Cplx>();
    p.Sigma = Sigma1.real().cast<Cplx>();
  }

  StationarySolution sol;
  sol.Sigma1 = p.Sigma;
  sol.M1 = p.M;
  sol.residual = verify_stationary(p, rho_p);
  return sol;
}

}  // namespace qwishart
