#include "qwishart/wishart.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qwishart {

WishartParams WishartParams::central(Field field, int d, int N) {
  WishartParams p;
  p.field = field;
  p.d = d;
  p.N = N;
  p.M = Matrix::Zero(d, N);
  p.Sigma = Matrix::Identity(d, d);
  return p;
}

WishartParams WishartParams::axial(Field field, int d, int N, double mu) {
  WishartParams p = central(field, d, N);
  Cplx entry = field == Field::Real
                   ? Cplx(mu, 0.0)
                   : std::sqrt(2.0) * std::polar(1.0, M_PI / 4.0) * mu;
  p.M = Matrix::Constant(d, N, entry);
  return p;
}

void WishartParams::validate() const {
  if (d < 1 || M.rows() != d || M.cols() != N || Sigma.rows() != d || Sigma.cols() != d)
    throw DimensionMismatch("WishartParams: inconsistent dimensions");
  if (field == Field::Real && N < 3)
    throw Error("WishartParams: real field requires N >= 3");
  if (field == Field::Complex && N < 2)
    throw Error("WishartParams: complex field requires N >= 2");
  if (N < d) throw Error("WishartParams: N >= d required");
  if ((Sigma - Sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("WishartParams: Sigma must be Hermitian");
  if (field == Field::Real &&
      (M.imag().cwiseAbs().maxCoeff() > 0.0 || Sigma.imag().cwiseAbs().maxCoeff() > 1e-14))
    throw Error("WishartParams: real field requires real M and Sigma");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Sigma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    throw CholeskyFailure("WishartParams: Sigma not positive definite");
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() >= 2 && sv(1) > 1e-10 * sv(0))
    throw Error("WishartParams: mean matrix must have rank <= 1");
}

namespace {
Matrix cholesky_factor(const Matrix& Sigma) {
  Eigen::LLT<Matrix> llt(Sigma);
  if (llt.info() != Eigen::Success)
    throw CholeskyFailure("Cholesky factorization of Sigma failed");
  return llt.matrixL();
}
}  // namespace

Matrix sample_gaussian_matrix(const WishartParams& p, RandomStream& stream) {
  Matrix G(p.d, p.N);
  if (p.field == Field::Real) {
    for (int j = 0; j < p.N; ++j)
      for (int i = 0; i < p.d; ++i) G(i, j) = Cplx(stream.next_normal(), 0.0);
  } else {
    for (int j = 0; j < p.N; ++j)
      for (int i = 0; i < p.d; ++i) G(i, j) = stream.next_cnormal();
  }
  bool identity = (p.Sigma - Matrix::Identity(p.d, p.d)).cwiseAbs().maxCoeff() < 1e-14;
  if (identity) return p.M + G;
  return p.M + cholesky_factor(p.Sigma) * G;
}

DensityMatrix sample_state(const WishartParams& p, RandomStream& stream) {
  Matrix A = sample_gaussian_matrix(p, stream);
  Matrix W = A * A.adjoint();
  if (p.field == Field::Real) W = W.real().cast<Cplx>();  // drop rounding noise
  W /= W.trace().real();
  return DensityMatrix(std::move(W));
}

std::vector<DensityMatrix> sample_states_batch(const WishartParams& p, int n,
                                               std::uint64_t seed, int workers) {
  if (n < 1) throw Error("sample_states_batch: n >= 1 required");
  p.validate();
  std::vector<DensityMatrix> out(static_cast<std::size_t>(n));
#if defined(_OPENMP)
  if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    RandomStream stream(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_state(p, stream);
  }
  (void)workers;
  return out;
}

std::vector<DensityMatrix> sample_states_batch_serial(const WishartParams& p, int n,
                                                      std::uint64_t seed) {
  if (n < 1) throw Error("sample_states_batch: n >= 1 required");
  p.validate();
  std::vector<DensityMatrix> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    RandomStream stream(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_state(p, stream);
  }
  return out;
}

}  // namespace qwishart
