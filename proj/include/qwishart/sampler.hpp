// Mixture proposals, envelope-constant estimation and acceptance-rejection
// sampling of qubit posterior targets.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qwishart/density.hpp"
#include "qwishart/estimation.hpp"
#include "qwishart/rng.hpp"
#include "qwishart/state.hpp"

namespace qwishart {

// Weighted mixture of Wishart ensembles and the uniform state distribution.
// The rotation is applied to every Wishart component's samples (and undone
// before density evaluation). Weights must sum to 1.
struct ProposalSpec {
  struct Component {
    double weight = 1.0;
    // Empty optional = uniform distribution on the disc/ball.
    std::optional<WishartParams> wishart;
  };

  Field field = Field::Complex;
  std::vector<Component> components;
  Rotation3 rotation = Rotation3::Identity();

  void validate() const;
};

// Precomputed evaluator/sampler for a ProposalSpec. Normalizes each Wishart
// component once (quadrature) so proposal_logpdf returns a normalized mixture
// density in flat Bloch coordinates.
class Proposal {
 public:
  explicit Proposal(ProposalSpec spec);

  const ProposalSpec& spec() const { return spec_; }
  Field field() const { return spec_.field; }

  // log sum_i w_i g_i(b), log-sum-exp stable.
  double logpdf(const BlochVector& b) const;

  BlochVector propose(RandomStream& stream) const;

 private:
  ProposalSpec spec_;
  Rotation3 inverse_rotation_;
  std::vector<double> log_weight_;
  std::vector<double> log_norm_;                      // per Wishart component
  std::vector<std::unique_ptr<QubitAxialDensity>> fast_;  // null = uniform
  double log_uniform_;                                // log flat density
  std::vector<double> weight_cdf_;
};

using TargetLogPdf = std::function<double(const BlochVector&)>;

struct RejectionReport {
  long proposed = 0;
  long accepted = 0;
  double acceptance_rate = 0.0;
  double bound_c = 0.0;
  double max_observed_ratio = 0.0;
  double wall_seconds = 0.0;
};

// Envelope constant c = safety * max exp(target - proposal) over a Bloch grid
// (default resolution 0.01, safety 1.05), refined by local ascent from the
// top 10 grid cells. The target may be unnormalized; c absorbs the missing
// constant. Throws UnboundedRatio when refinement grows past 1e6 x the grid
// estimate.
double estimate_bound(const TargetLogPdf& target, const Proposal& proposal,
                      double grid_resolution = 0.01, double safety = 1.05);

// Draws until n_accept acceptances. Every evaluated ratio is checked against
// c; a violation throws RatioExceedsBound. Proposals are generated in fixed
// chunks with one RandomStream per chunk, so the accepted list is identical
// for any worker count. OpenMP-parallel.
std::vector<BlochVector> rejection_sample(const TargetLogPdf& target,
                                          const Proposal& proposal, double c,
                                          long n_accept, std::uint64_t seed,
                                          RejectionReport* report = nullptr,
                                          int workers = 0);

// Serial reference for the rejection kernel; must produce the identical list.
std::vector<BlochVector> rejection_sample_serial(const TargetLogPdf& target,
                                                 const Proposal& proposal, double c,
                                                 long n_accept, std::uint64_t seed,
                                                 RejectionReport* report = nullptr);

// Acceptance rate over a fixed number of proposals (for rate benchmarks;
// does not abort on ratio > c, it clips and reports through the return).
double measure_acceptance_rate(const TargetLogPdf& target, const Proposal& proposal,
                               double c, long n_proposals, std::uint64_t seed,
                               int workers = 0);

enum class ProposalStrategy { InteriorPeak, BoundaryPeak, TwoWishartMix };

struct ProposalKnobs {
  int N = 4;                  // columns of the interior-peaked component
  double alpha = 0.002;       // uniform admixture fraction
  double mu_boundary = 0.0;   // 0 = solve by peak-height matching
  double mu_interior = 0.0;   // 0 = solve by fit_mean_radial at the MLE radius
  double w_interior = 0.5;    // TwoWishartMix weight of the interior component
};

// Builds the standard proposals: InteriorPeak (peaked Wishart + uniform),
// BoundaryPeak (N = 2 complex / N = 3 real boundary Wishart + uniform),
// TwoWishartMix (both).
ProposalSpec build_proposal(const Pom& pom, const ClickRecord& clicks,
                            ProposalStrategy strategy, const ProposalKnobs& knobs);

}  // namespace qwishart
