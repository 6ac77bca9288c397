#include "qwishart/density.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "qwishart/state.hpp"
#include "qwishart/stats.hpp"

namespace qwishart {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Complex-field multivariate gamma: pi^{d(d-1)/2} prod Gamma(a+1-i).
double log_multigamma_complex(int d, double a) {
  double s = 0.5 * d * (d - 1) * std::log(M_PI);
  for (int i = 1; i <= d; ++i) s += std::lgamma(a + 1.0 - i);
  return s;
}

bool is_identity(const Matrix& m) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

double xi_squared(const WishartParams& p, const DensityMatrix& rho) {
  if (p.M.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Matrix Sinv = p.Sigma.inverse();
  Matrix K = Sinv * p.M * p.M.adjoint() * Sinv;
  double num = (K * rho.rho).trace().real();
  double den = (Sinv * rho.rho).trace().real();
  double v = num / den;
  if (p.field == Field::Real) v *= 0.5;
  return std::max(v, 0.0);
}

double series_factor(double a, double b, double u) {
  if (a <= 0.0 || b <= 0.0 || u < 0.0)
    throw Error("series_factor: requires a > 0, b > 0, u >= 0");
  double front = std::lgamma(a) - std::lgamma(b);
  double diff = a - b;
  long m = std::lround(diff);
  if (m >= 0 && std::fabs(diff - static_cast<double>(m)) < 1e-9) {
    // Kummer transform: S(u) = Gamma(a)/Gamma(b) e^u sum_{k<=m} C(m,k) u^k/(b)_k.
    if (u == 0.0 || m == 0) return front + u;
    double logu = std::log(u);
    double lse = kNegInf;
    for (long k = 0; k <= m; ++k) {
      double t = log_binomial(static_cast<int>(m), static_cast<int>(k)) +
                 static_cast<double>(k) * logu - log_pochhammer(b, static_cast<int>(k));
      lse = logaddexp(lse, t);
    }
    return front + u + lse;
  }
  // Direct log-scale summation.
  double logsum = front;  // k = 0 term
  if (u == 0.0) return logsum;
  double logu = std::log(u);
  for (long k = 1; k <= 100000; ++k) {
    double t = static_cast<double>(k) * logu - std::lgamma(k + 1.0) +
               std::lgamma(a + k) - std::lgamma(b + k);
    logsum = logaddexp(logsum, t);
    // Terms decay geometrically once k dominates u; remaining tail is then
    // bounded by a small multiple of the last term.
    double ratio = u * (a + k) / ((k + 1.0) * (b + k));
    if (ratio < 0.9 && t - logsum < std::log(1e-16)) return logsum;
  }
  throw NonConvergence("series_factor: series did not meet tail bound in 1e5 terms");
}

double series_log_derivative(double a, double b, double u) {
  return std::exp(series_factor(a + 1.0, b + 1.0, u) - series_factor(a, b, u));
}

namespace {

struct DensityShape {
  double det_exponent;    // exponent of det(rho)
  double trace_exponent;  // exponent of 1/tr(Sigma^-1 rho)
  double a, b;            // series parameters
  double log_front;       // rho-independent log constant
};

DensityShape density_shape(const WishartParams& p) {
  DensityShape s{};
  Matrix Sinv = p.Sigma.inverse();
  double tr_mm = (Sinv * p.M * p.M.adjoint()).trace().real();
  double logdet_sigma = std::log(p.Sigma.determinant().real());
  if (p.field == Field::Real) {
    s.det_exponent = 0.5 * (p.N - p.d - 1);
    s.trace_exponent = 0.5 * p.d * p.N;
    s.a = 0.5 * p.d * p.N;
    s.b = 0.5 * p.N;
    s.log_front = -0.5 * tr_mm - log_multigamma(p.d, 0.5 * p.N) - 0.5 * p.N * logdet_sigma;
  } else {
    s.det_exponent = p.N - p.d;
    s.trace_exponent = static_cast<double>(p.d) * p.N;
    s.a = static_cast<double>(p.d) * p.N;
    s.b = p.N;
    s.log_front = std::lgamma(static_cast<double>(p.N)) - tr_mm -
                  log_multigamma_complex(p.d, p.N) - p.N * logdet_sigma;
  }
  return s;
}

}  // namespace

double log_density_value(const WishartParams& p, const DensityMatrix& rho) {
  DensityShape s = density_shape(p);
  double det = rho.rho.determinant().real();
  double log_det_term = 0.0;
  if (s.det_exponent != 0.0) {
    if (det <= 0.0) {
      if (s.det_exponent < 0.0)
        throw SingularState("log_density: det(rho) <= 0 with negative exponent");
      return kNegInf;  // boundary state, density exactly 0
    }
    log_det_term = s.det_exponent * std::log(det);
  }
  double tr = (p.Sigma.inverse() * rho.rho).trace().real();
  double u = xi_squared(p, rho);
  return s.log_front - s.trace_exponent * std::log(tr) + log_det_term +
         series_factor(s.a, s.b, u);
}

LogDensity log_density(const WishartParams& p, const DensityMatrix& rho) {
  return LogDensity{log_density_value(p, rho), true};
}

// ---- qubit fast path ----------------------------------------------------

QubitAxialDensity::QubitAxialDensity(const WishartParams& p) {
  if (p.d != 2) throw DimensionMismatch("QubitAxialDensity: d = 2 required");
  if (!is_identity(p.Sigma))
    throw Error("QubitAxialDensity: Sigma = I required");
  field_ = p.field;
  DensityShape s = density_shape(p);
  a_ = s.a;
  b_ = s.b;
  det_exponent_ = s.det_exponent;
  log_front_ = s.log_front;

  Matrix mm = p.M * p.M.adjoint();
  double strength = mm.trace().real();
  if (strength <= 0.0) {
    xi_coef_ = 0.0;
    axis_ = Eigen::Vector3d::UnitX();
  } else {
    BlochVector e = rho_to_bloch(DensityMatrix(mm / strength));
    axis_ = e.vec();
    double n = axis_.norm();
    axis_ = n > 0.0 ? Eigen::Vector3d(axis_ / n) : Eigen::Vector3d::UnitX();
    xi_coef_ = field_ == Field::Real ? 0.25 * strength : 0.5 * strength;
  }

  double diff = a_ - b_;
  long m = std::lround(diff);
  if (m >= 0 && std::fabs(diff - static_cast<double>(m)) < 1e-9) {
    m_ = static_cast<int>(m);
    log_coef_.resize(static_cast<std::size_t>(m_) + 1);
    for (int k = 0; k <= m_; ++k)
      log_coef_[static_cast<std::size_t>(k)] = log_binomial(m_, k) - log_pochhammer(b_, k);
  }
}

double QubitAxialDensity::logpdf(const BlochVector& b) const {
  double r2 = b.x * b.x + b.y * b.y + b.z * b.z;
  double det = 0.25 * (1.0 - r2);
  double log_det_term = 0.0;
  if (det_exponent_ != 0.0) {
    if (det <= 0.0) {
      if (det_exponent_ < 0.0)
        throw SingularState("QubitAxialDensity: boundary state with negative exponent");
      return kNegInf;
    }
    log_det_term = det_exponent_ * std::log(det);
  }
  // Sigma = I and tr(rho) = 1, so the trace factor is 1.
  double u = xi_coef_ * (1.0 + axis_.x() * b.x + axis_.y() * b.y + axis_.z() * b.z);
  if (u < 0.0) u = 0.0;
  double series;
  if (m_ >= 0) {
    double lg = std::lgamma(a_) - std::lgamma(b_);
    if (u == 0.0 || m_ == 0) {
      series = lg + u;
    } else {
      double logu = std::log(u);
      double mx = kNegInf;
      for (int k = 0; k <= m_; ++k)
        mx = std::max(mx, log_coef_[static_cast<std::size_t>(k)] + k * logu);
      double sum = 0.0;
      for (int k = 0; k <= m_; ++k)
        sum += std::exp(log_coef_[static_cast<std::size_t>(k)] + k * logu - mx);
      series = lg + u + mx + std::log(sum);
    }
  } else {
    series = series_factor(a_, b_, u);
  }
  return log_front_ + log_det_term + series;
}

// ---- qubit normalization ------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -t;
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

// log integral over the disc/ball of exp(logpdf), shift-stabilized. The
// density is axial about f.axis(), so two dimensions suffice. Fixed
// Gauss-Legendre tensor quadrature: deterministic cost and immune to the
// rounding-level noise of the boundary det factor that stalls adaptive rules.
double log_norm_axial(const QubitAxialDensity& f, Field field) {
  Eigen::Vector3d e = f.axis();
  std::vector<double> xr, wr, xa, wa;
  gauss_legendre(160, xr, wr);  // radius
  gauss_legendre(256, xa, wa);  // angle (real) / cos-angle to the axis (complex)
  double shift = kNegInf;
  std::vector<double> vals;
  vals.reserve(xr.size() * xa.size());
  if (field == Field::Real) {
    // In-plane axis perpendicular; for real-field params e is in the x-z plane.
    Eigen::Vector3d p2(-e.z(), 0.0, e.x());
    for (std::size_t i = 0; i < xr.size(); ++i) {
      double r = 0.5 * (xr[i] + 1.0);
      for (std::size_t j = 0; j < xa.size(); ++j) {
        double th = M_PI * (xa[j] + 1.0);
        Eigen::Vector3d v = r * (std::cos(th) * e + std::sin(th) * p2);
        double lp = f.logpdf(BlochVector::from_vec(v));
        vals.push_back(lp);
        shift = std::max(shift, lp);
      }
    }
    double val = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < xr.size(); ++i) {
      double r = 0.5 * (xr[i] + 1.0);
      for (std::size_t j = 0; j < xa.size(); ++j, ++idx) {
        double d = vals[idx] - shift;
        if (d < -700.0) continue;
        val += 0.5 * wr[i] * M_PI * wa[j] * r * std::exp(d);
      }
    }
    if (!(val > 0.0) || !std::isfinite(val))
      throw QuadratureFailure("normalization_constant_qubit: non-finite integral");
    return shift + std::log(val);
  }
  Eigen::Vector3d perp = std::fabs(e.z()) < 0.9
                             ? e.cross(Eigen::Vector3d::UnitZ()).normalized()
                             : e.cross(Eigen::Vector3d::UnitX()).normalized();
  for (std::size_t i = 0; i < xr.size(); ++i) {
    double r = 0.5 * (xr[i] + 1.0);
    for (std::size_t j = 0; j < xa.size(); ++j) {
      double eta = xa[j];
      Eigen::Vector3d v =
          r * (eta * e + std::sqrt(std::max(0.0, 1.0 - eta * eta)) * perp);
      double lp = f.logpdf(BlochVector::from_vec(v));
      vals.push_back(lp);
      shift = std::max(shift, lp);
    }
  }
  double val = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    double r = 0.5 * (xr[i] + 1.0);
    for (std::size_t j = 0; j < xa.size(); ++j, ++idx) {
      double d = vals[idx] - shift;
      if (d < -700.0) continue;
      val += 0.5 * wr[i] * 2.0 * M_PI * wa[j] * r * r * std::exp(d);
    }
  }
  if (!(val > 0.0) || !std::isfinite(val))
    throw QuadratureFailure("normalization_constant_qubit: non-finite integral");
  return shift + std::log(val);
}

double log_norm_general(const WishartParams& p) {
  // Fixed Gauss-Legendre tensor quadrature over the disc/ball; used only for
  // non-identity Sigma. The integrand is smooth in the interior and vanishes
  // polynomially at the boundary, so fixed high-order nodes converge fast.
  auto lp = [&](const BlochVector& b) {
    double r = b.r();
    if (r >= 1.0) return kNegInf;
    return log_density_value(p, bloch_to_rho(b));
  };
  std::vector<double> xr, wr, xa, wa, xb, wb;
  if (p.field == Field::Real) {
    gauss_legendre(96, xr, wr);   // radius
    gauss_legendre(128, xa, wa);  // angle
    std::vector<double> vals;
    vals.reserve(xr.size() * xa.size());
    double shift = kNegInf;
    for (std::size_t i = 0; i < xr.size(); ++i) {
      double r = 0.5 * (xr[i] + 1.0);
      for (std::size_t j = 0; j < xa.size(); ++j) {
        double th = M_PI * (xa[j] + 1.0);
        double v = lp(BlochVector(r * std::cos(th), r * std::sin(th)));
        vals.push_back(v);
        shift = std::max(shift, v);
      }
    }
    double val = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < xr.size(); ++i) {
      double r = 0.5 * (xr[i] + 1.0);
      for (std::size_t j = 0; j < xa.size(); ++j, ++idx) {
        double v = vals[idx];
        if (v == kNegInf) continue;
        val += 0.5 * wr[i] * M_PI * wa[j] * r * std::exp(v - shift);
      }
    }
    if (!(val > 0.0) || !std::isfinite(val))
      throw QuadratureFailure("normalization_constant_qubit: non-finite integral");
    return shift + std::log(val);
  }
  gauss_legendre(64, xr, wr);  // radius
  gauss_legendre(64, xa, wa);  // cos(theta)
  gauss_legendre(64, xb, wb);  // phi
  std::vector<double> vals;
  vals.reserve(xr.size() * xa.size() * xb.size());
  double shift = kNegInf;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    double r = 0.5 * (xr[i] + 1.0);
    for (std::size_t j = 0; j < xa.size(); ++j) {
      double ct = xa[j], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (std::size_t k = 0; k < xb.size(); ++k) {
        double phi = M_PI * (xb[k] + 1.0);
        double v = lp(BlochVector(r * st * std::cos(phi), r * st * std::sin(phi), r * ct));
        vals.push_back(v);
        shift = std::max(shift, v);
      }
    }
  }
  double val = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    double r = 0.5 * (xr[i] + 1.0);
    for (std::size_t j = 0; j < xa.size(); ++j)
      for (std::size_t k = 0; k < xb.size(); ++k, ++idx) {
        double v = vals[idx];
        if (v == kNegInf) continue;
        val += 0.5 * wr[i] * wa[j] * M_PI * wb[k] * r * r * std::exp(v - shift);
      }
  }
  if (!(val > 0.0) || !std::isfinite(val))
    throw QuadratureFailure("normalization_constant_qubit: non-finite integral");
  return shift + std::log(val);
}

}  // namespace

double log_normalization_constant_qubit(const WishartParams& p) {
  if (p.d != 2) throw DimensionMismatch("normalization_constant_qubit: d = 2 required");
  p.validate();
  if (is_identity(p.Sigma)) {
    QubitAxialDensity f(p);
    return log_norm_axial(f, p.field);
  }
  return log_norm_general(p);
}

double normalization_constant_qubit(const WishartParams& p) {
  return std::exp(log_normalization_constant_qubit(p));
}

}  // namespace qwishart
