#include "qwishart/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwishart/state.hpp"

namespace qwishart {

namespace {

Eigen::Matrix2cd pauli_combo(double w, double ax, double ay, double az) {
  // w * (I + ax sx + ay sy + az sz)
  Eigen::Matrix2cd m;
  m(0, 0) = Cplx(w * (1.0 + az), 0.0);
  m(1, 1) = Cplx(w * (1.0 - az), 0.0);
  m(0, 1) = Cplx(w * ax, -w * ay);
  m(1, 0) = Cplx(w * ax, w * ay);
  return m;
}

}  // namespace

const std::vector<std::string>& Pom::builtin_names() {
  static const std::vector<std::string> names = {"crosshair-real", "crosshair-complex",
                                                 "trine", "tetrahedron"};
  return names;
}

Pom Pom::builtin(const std::string& name) {
  Pom pom;
  pom.name = name;
  if (name == "crosshair-real") {
    // x and z measurements on alternating copies; effects scaled to unit sum.
    pom.kind = Field::Real;
    pom.effects = {pauli_combo(0.25, 1, 0, 0), pauli_combo(0.25, -1, 0, 0),
                   pauli_combo(0.25, 0, 0, 1), pauli_combo(0.25, 0, 0, -1)};
  } else if (name == "crosshair-complex") {
    pom.kind = Field::Complex;
    pom.effects = {pauli_combo(1.0 / 6.0, 1, 0, 0),  pauli_combo(1.0 / 6.0, -1, 0, 0),
                   pauli_combo(1.0 / 6.0, 0, 1, 0),  pauli_combo(1.0 / 6.0, 0, -1, 0),
                   pauli_combo(1.0 / 6.0, 0, 0, 1),  pauli_combo(1.0 / 6.0, 0, 0, -1)};
  } else if (name == "trine") {
    // Three symmetric directions in the x-z plane.
    pom.kind = Field::Real;
    for (int k = 0; k < 3; ++k) {
      double ang = 2.0 * M_PI * k / 3.0;
      pom.effects.push_back(pauli_combo(1.0 / 3.0, std::cos(ang), 0.0, std::sin(ang)));
    }
  } else if (name == "tetrahedron") {
    pom.kind = Field::Complex;
    const double s = 1.0 / std::sqrt(3.0);
    pom.effects = {pauli_combo(0.25, s, s, s), pauli_combo(0.25, -s, -s, s),
                   pauli_combo(0.25, -s, s, -s), pauli_combo(0.25, s, -s, -s)};
  } else {
    throw ConfigError("unknown POM: " + name);
  }
  return pom;
}

void Pom::validate() const {
  if (effects.empty()) throw ConfigError("Pom: no effects");
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& e : effects) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw ConfigError("Pom: effect not positive semidefinite");
    sum += e;
  }
  if ((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("Pom: effects do not sum to identity");
}

long ClickRecord::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

void ClickRecord::validate(const Pom& pom) const {
  if (static_cast<int>(counts.size()) != pom.outcomes())
    throw ConfigError("ClickRecord: count length does not match POM outcomes");
  for (long n : counts)
    if (n < 0) throw ConfigError("ClickRecord: negative count");
  if (total() < 1) throw ConfigError("ClickRecord: total must be >= 1");
}

std::vector<double> born_probabilities(const Pom& pom, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("born_probabilities: d = 2 required");
  std::vector<double> p;
  p.reserve(pom.effects.size());
  for (const auto& e : pom.effects)
    p.push_back(std::max(0.0, (e * rho.rho).trace().real()));
  return p;
}

AffinePom::AffinePom(const Pom& pom) : kind(pom.kind) {
  for (const auto& e : pom.effects) {
    offset.push_back(0.5 * e.trace().real());
    // p_k(b) = tr(Pi_k) / 2 + 1/2 sum_i b_i tr(Pi_k sigma_i)
    double gx = e(0, 1).real() + e(1, 0).real();
    double gy = e(1, 0).imag() - e(0, 1).imag();
    double gz = e(0, 0).real() - e(1, 1).real();
    grad.push_back(0.5 * Eigen::Vector3d(gx, gy, gz));
  }
}

double AffinePom::log_posterior(const ClickRecord& clicks, const BlochVector& b) const {
  Eigen::Vector3d v = b.vec();
  double s = 0.0;
  for (std::size_t k = 0; k < offset.size(); ++k) {
    long n = clicks.counts[k];
    if (n == 0) continue;
    double p = offset[k] + grad[k].dot(v);
    if (p <= 0.0) return kLogZero;
    s += static_cast<double>(n) * std::log(p);
  }
  return s;
}

double log_posterior(const Pom& pom, const ClickRecord& clicks, const BlochVector& b) {
  return AffinePom(pom).log_posterior(clicks, b);
}

double log_posterior(const Pom& pom, const ClickRecord& clicks, const DensityMatrix& rho) {
  return log_posterior(pom, clicks, rho_to_bloch(rho));
}

namespace {

Eigen::Vector3d project_ball(Eigen::Vector3d v, bool real_plane) {
  if (real_plane) v.y() = 0.0;
  double r = v.norm();
  if (r > 1.0) v /= r;
  return v;
}

std::vector<Eigen::Vector3d> ascent_starts(int n, bool real_plane) {
  std::vector<Eigen::Vector3d> starts;
  starts.emplace_back(Eigen::Vector3d::Zero());
  if (real_plane) {
    for (int i = 1; i < n; ++i) {
      double r = (i % 2 == 0) ? 0.5 : 0.9;
      double th = 2.0 * M_PI * i / static_cast<double>(n - 1);
      starts.emplace_back(r * std::cos(th), 0.0, r * std::sin(th));
    }
  } else {
    // Golden-spiral directions at two radii.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 1; i < n; ++i) {
      double frac = (i - 0.5) / static_cast<double>(n - 1);
      double cz = 1.0 - 2.0 * frac;
      double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
      double ang = golden * i;
      double r = (i % 2 == 0) ? 0.5 : 0.9;
      starts.emplace_back(r * sz * std::cos(ang), r * sz * std::sin(ang), r * cz);
    }
  }
  return starts;
}

}  // namespace

MlePeak mle(const Pom& pom, const ClickRecord& clicks, int starts) {
  pom.validate();
  clicks.validate(pom);
  AffinePom ap(pom);
  const bool real_plane = pom.kind == Field::Real;

  auto value = [&](const Eigen::Vector3d& v) {
    return ap.log_posterior(clicks, BlochVector::from_vec(v));
  };
  auto gradient = [&](const Eigen::Vector3d& v) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < ap.offset.size(); ++k) {
      long n = clicks.counts[k];
      if (n == 0) continue;
      double p = ap.offset[k] + ap.grad[k].dot(v);
      if (p <= 1e-300) p = 1e-300;
      g += (static_cast<double>(n) / p) * ap.grad[k];
    }
    if (real_plane) g.y() = 0.0;
    return g;
  };

  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  double best_val = value(best);
  for (const Eigen::Vector3d& start : ascent_starts(starts, real_plane)) {
    Eigen::Vector3d v = project_ball(start, real_plane);
    double fv = value(v);
    double step = 0.05 / std::max<double>(1, clicks.total());
    for (int it = 0; it < 5000; ++it) {
      Eigen::Vector3d g = gradient(v);
      Eigen::Vector3d cand = project_ball(v + step * g, real_plane);
      double fc = value(cand);
      if (fc > fv) {
        double moved = (cand - v).norm();
        v = cand;
        fv = fc;
        step *= 1.3;
        if (moved < 1e-9) break;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    if (fv > best_val + 1e-12) {
      best_val = fv;
      best = v;
    }
  }

  double r = best.norm();
  bool boundary = false;
  if (r > 1.0 - 5e-6) {
    best /= r;  // clamp exactly to the boundary
    boundary = true;
    best_val = value(best);
  }
  MlePeak peak;
  peak.bloch = BlochVector::from_vec(best);
  peak.spherical = to_spherical(peak.bloch);
  peak.log_likelihood_at_peak = best_val;
  peak.on_boundary = boundary;
  return peak;
}

}  // namespace qwishart
