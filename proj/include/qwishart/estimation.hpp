// Measurement settings (POMs), click data, posterior targets and maximum
// likelihood peak finding on the Bloch ball.

#pragma once

#include <string>
#include <vector>

#include "qwishart/types.hpp"

namespace qwishart {

// Probability-operator measurement: PSD effects with unit sum. kind marks
// whether the induced posterior lives on the real disc or the Bloch ball.
struct Pom {
  std::string name;
  std::vector<Eigen::Matrix2cd> effects;
  Field kind = Field::Complex;

  int outcomes() const { return static_cast<int>(effects.size()); }

  // Built-ins: "crosshair-real" (4), "crosshair-complex" (6), "trine" (3),
  // "tetrahedron" (4). Throws ConfigError for unknown names.
  static Pom builtin(const std::string& name);
  static const std::vector<std::string>& builtin_names();

  void validate() const;
};

struct ClickRecord {
  std::vector<long> counts;

  long total() const;
  void validate(const Pom& pom) const;
};

struct MlePeak {
  BlochVector bloch;
  Spherical spherical;
  double log_likelihood_at_peak = 0.0;
  bool on_boundary = false;
};

// p_k = tr(Pi_k rho); clamped at 0, sums to 1 within 1e-12.
std::vector<double> born_probabilities(const Pom& pom, const DensityMatrix& rho);

// Affine Born form p_k(b) = offset_k + grad_k . b, exact for qubit POMs.
// This is the hot-path representation used by the sampler.
struct AffinePom {
  std::vector<double> offset;
  std::vector<Eigen::Vector3d> grad;
  Field kind = Field::Complex;

  explicit AffinePom(const Pom& pom);
  double log_posterior(const ClickRecord& clicks, const BlochVector& b) const;
};

// sum_k n_k log p_k; a large negative sentinel when some p_k = 0 has n_k > 0.
double log_posterior(const Pom& pom, const ClickRecord& clicks, const DensityMatrix& rho);
double log_posterior(const Pom& pom, const ClickRecord& clicks, const BlochVector& b);

inline constexpr double kLogZero = -1e300;

// Constrained maximizer of the posterior over the disc/ball by multi-start
// projected gradient ascent; 20 deterministic starts, position tol 1e-5.
// Unconstrained optima outside the ball are returned clamped at r = 1 with
// on_boundary set.
MlePeak mle(const Pom& pom, const ClickRecord& clicks, int starts = 20);

}  // namespace qwishart
