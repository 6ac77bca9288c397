#include "qwishart/state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qwishart {

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_valid_state(const DensityMatrix& s, double herm_tol, double trace_tol,
                    double psd_tol) {
  const Matrix& m = s.rho;
  if (m.rows() != m.cols() || m.rows() < 1) return false;
  if (!is_hermitian(m, herm_tol)) return false;
  if (std::fabs(m.trace().real() - 1.0) > trace_tol || std::fabs(m.trace().imag()) > trace_tol)
    return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -psd_tol;
}

Spherical to_spherical(const BlochVector& b) {
  Spherical s;
  s.r = b.r();
  if (s.r < 1e-300) return s;
  s.theta = std::acos(std::clamp(b.z / s.r, -1.0, 1.0));
  s.phi = std::atan2(b.y, b.x);
  if (s.phi < 0.0) s.phi += 2.0 * M_PI;
  return s;
}

BlochVector from_spherical(const Spherical& s) {
  return {s.r * std::sin(s.theta) * std::cos(s.phi),
          s.r * std::sin(s.theta) * std::sin(s.phi), s.r * std::cos(s.theta)};
}

DensityMatrix bloch_to_rho(const BlochVector& b) {
  if (b.r() > 1.0 + 1e-10)
    throw RadiusOutOfRange("bloch_to_rho: |b| = " + std::to_string(b.r()) + " > 1");
  Matrix rho(2, 2);
  rho(0, 0) = Cplx(0.5 * (1.0 + b.z), 0.0);
  rho(1, 1) = Cplx(0.5 * (1.0 - b.z), 0.0);
  rho(0, 1) = Cplx(0.5 * b.x, -0.5 * b.y);
  rho(1, 0) = Cplx(0.5 * b.x, 0.5 * b.y);
  return DensityMatrix(std::move(rho));
}

BlochVector rho_to_bloch(const DensityMatrix& s) {
  if (s.dim() != 2) throw DimensionMismatch("rho_to_bloch: requires d = 2");
  const Matrix& m = s.rho;
  return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

DensityMatrix sample_uniform_state(int d, RandomStream& stream) {
  Matrix A(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) A(i, j) = stream.next_cnormal();
  Matrix W = A * A.adjoint();
  W /= W.trace().real();
  return DensityMatrix(std::move(W));
}

BlochVector sample_uniform_ball(RandomStream& stream) {
  double r = std::cbrt(stream.next_double());
  double cz = 2.0 * stream.next_double() - 1.0;
  double phi = 2.0 * M_PI * stream.next_double();
  double s = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * cz};
}

BlochVector sample_uniform_disc(RandomStream& stream) {
  double r = std::sqrt(stream.next_double());
  double th = 2.0 * M_PI * stream.next_double();
  return {r * std::cos(th), 0.0, r * std::sin(th)};
}

Rotation3 align_rotation(const BlochVector& from, const BlochVector& to) {
  Eigen::Vector3d f = from.vec(), t = to.vec();
  if (f.norm() < 1e-12 || t.norm() < 1e-12)
    throw ZeroVector("align_rotation: zero-length input");
  f.normalize();
  t.normalize();
  Eigen::Vector3d axis = f.cross(t);
  double s = axis.norm();
  double c = f.dot(t);
  if (s < 1e-14) {
    if (c > 0.0) return Rotation3::Identity();
    // Antiparallel: rotate by pi about any axis orthogonal to f.
    Eigen::Vector3d ortho = std::fabs(f.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                   : Eigen::Vector3d::UnitY();
    axis = f.cross(ortho).normalized();
    return Eigen::AngleAxisd(M_PI, axis).toRotationMatrix();
  }
  axis /= s;
  return Eigen::AngleAxisd(std::atan2(s, c), axis).toRotationMatrix();
}

DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& U) {
  if (U.rows() != rho.dim() || U.cols() != rho.dim())
    throw DimensionMismatch("conjugate: unitary dimension mismatch");
  return DensityMatrix(U * rho.rho * U.adjoint());
}

}  // namespace qwishart
