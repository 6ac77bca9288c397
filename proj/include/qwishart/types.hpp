// Core domain types: density matrices, Bloch vectors, field tags, errors.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qwishart {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Rotation3 = Eigen::Matrix3d;

enum class Field { Real, Complex };

inline const char* field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

// ---- error hierarchy ----------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct RadiusOutOfRange : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct CholeskyFailure : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct SingularState : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };
struct NotFullRank : Error { using Error::Error; };
struct FixedPointDivergence : Error { using Error::Error; };
struct UnboundedRatio : Error { using Error::Error; };
struct RatioExceedsBound : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// ---- Bloch vector -------------------------------------------------------

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;

  BlochVector() = default;
  BlochVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  // Real-plane constructor (x-z plane, y = 0).
  BlochVector(double x_, double z_) : x(x_), y(0.0), z(z_) {}

  double r() const { return std::sqrt(x * x + y * y + z * z); }

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochVector from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
};

inline BlochVector rotate(const Rotation3& R, const BlochVector& b) {
  return BlochVector::from_vec(R * b.vec());
}

// ---- density matrix -----------------------------------------------------

// d x d trace-one positive-semidefinite Hermitian matrix.
struct DensityMatrix {
  Matrix rho;

  DensityMatrix() = default;
  explicit DensityMatrix(Matrix m) : rho(std::move(m)) {}

  int dim() const { return static_cast<int>(rho.rows()); }
};

// Invariant checks; tolerances as documented in the README.
bool is_hermitian(const Matrix& m, double tol = 1e-12);
bool is_valid_state(const DensityMatrix& s, double herm_tol = 1e-12,
                    double trace_tol = 1e-10, double psd_tol = 1e-10);

// Spherical coordinates (r, theta, phi): theta polar from +z, phi azimuth
// from +x in the x-y plane. Fixed project-wide.
struct Spherical {
  double r = 0.0, theta = 0.0, phi = 0.0;
};

Spherical to_spherical(const BlochVector& b);
BlochVector from_spherical(const Spherical& s);

}  // namespace qwishart
