#include "qwishart/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "qwishart/peak.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qwishart {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long kChunk = 8192;

bool is_identity(const Matrix& m) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-12;
}
}  // namespace

void ProposalSpec::validate() const {
  if (components.empty()) throw ConfigError("ProposalSpec: no components");
  if (components.size() > 16) throw ConfigError("ProposalSpec: at most 16 components");
  double sum = 0.0;
  for (const auto& c : components) {
    if (c.weight < 0.0) throw ConfigError("ProposalSpec: negative weight");
    sum += c.weight;
    if (c.wishart) {
      c.wishart->validate();
      if (c.wishart->d != 2) throw ConfigError("ProposalSpec: qubit components required");
      if (c.wishart->field != field)
        throw ConfigError("ProposalSpec: component field mismatch");
    }
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw ConfigError("ProposalSpec: weights must sum to 1");
  if ((rotation * rotation.transpose() - Rotation3::Identity()).cwiseAbs().maxCoeff() > 1e-10 ||
      rotation.determinant() < 0.0)
    throw ConfigError("ProposalSpec: rotation must be proper orthogonal");
}

Proposal::Proposal(ProposalSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  inverse_rotation_ = spec_.rotation.transpose();
  log_uniform_ = spec_.field == Field::Real ? -std::log(M_PI) : std::log(3.0 / (4.0 * M_PI));
  double acc = 0.0;
  for (const auto& c : spec_.components) {
    log_weight_.push_back(c.weight > 0.0 ? std::log(c.weight) : kNegInf);
    acc += c.weight;
    weight_cdf_.push_back(acc);
    if (c.wishart && is_identity(c.wishart->Sigma)) {
      fast_.push_back(std::make_unique<QubitAxialDensity>(*c.wishart));
      log_norm_.push_back(log_normalization_constant_qubit(*c.wishart));
    } else if (c.wishart) {
      fast_.push_back(nullptr);
      log_norm_.push_back(log_normalization_constant_qubit(*c.wishart));
    } else {
      fast_.push_back(nullptr);
      log_norm_.push_back(0.0);
    }
  }
  weight_cdf_.back() = 1.0;
}

double Proposal::logpdf(const BlochVector& b) const {
  if (b.r() > 1.0 + 1e-12) return kNegInf;
  BlochVector back = rotate(inverse_rotation_, b);
  double best = kNegInf;
  double terms[16];
  std::size_t n = spec_.components.size();
  for (std::size_t i = 0; i < n; ++i) {
    double t;
    if (!spec_.components[i].wishart) {
      t = log_weight_[i] + log_uniform_;
    } else if (fast_[i]) {
      t = log_weight_[i] + fast_[i]->logpdf(back) - log_norm_[i];
    } else {
      double r = back.r();
      t = r >= 1.0 ? kNegInf
                   : log_weight_[i] +
                         log_density_value(*spec_.components[i].wishart, bloch_to_rho(back)) -
                         log_norm_[i];
    }
    terms[i] = t;
    best = std::max(best, t);
  }
  if (best == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(terms[i] - best);
  return best + std::log(s);
}

BlochVector Proposal::propose(RandomStream& stream) const {
  double u = stream.next_double();
  std::size_t idx = 0;
  while (idx + 1 < weight_cdf_.size() && u > weight_cdf_[idx]) ++idx;
  const auto& comp = spec_.components[idx];
  if (!comp.wishart) {
    return spec_.field == Field::Real ? sample_uniform_disc(stream)
                                      : sample_uniform_ball(stream);
  }
  BlochVector b = rho_to_bloch(sample_state(*comp.wishart, stream));
  return rotate(spec_.rotation, b);
}

// ---- envelope constant --------------------------------------------------

namespace {

struct RatioPoint {
  double log_ratio;
  BlochVector b;
};

double refine_local(const TargetLogPdf& target, const Proposal& proposal,
                    BlochVector start, double step0, bool real_plane) {
  auto value = [&](const BlochVector& b) {
    if (b.r() > 1.0 - 1e-12) return kNegInf;
    double g = proposal.logpdf(b);
    if (g == kNegInf) return kNegInf;
    return target(b) - g;
  };
  BlochVector cur = start;
  double best = value(cur);
  double step = step0;
  while (step > 1e-7) {
    bool improved = false;
    const double dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                               {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const auto& d : dirs) {
      if (real_plane && d[1] != 0.0) continue;
      BlochVector cand(cur.x + step * d[0], cur.y + step * d[1], cur.z + step * d[2]);
      double v = value(cand);
      if (v > best) {
        best = v;
        cur = cand;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

double estimate_bound(const TargetLogPdf& target, const Proposal& proposal,
                      double grid_resolution, double safety) {
  const bool real_plane = proposal.field() == Field::Real;
  const double h = grid_resolution;
  const int n = static_cast<int>(std::floor(2.0 / h));

  std::vector<RatioPoint> top;
  auto push_top = [&top](double lr, const BlochVector& b) {
    top.push_back({lr, b});
    std::push_heap(top.begin(), top.end(),
                   [](const RatioPoint& a, const RatioPoint& c) { return a.log_ratio > c.log_ratio; });
    if (top.size() > 10) {
      std::pop_heap(top.begin(), top.end(),
                    [](const RatioPoint& a, const RatioPoint& c) { return a.log_ratio > c.log_ratio; });
      top.pop_back();
    }
  };

  double grid_max = kNegInf;
#if defined(_OPENMP)
#pragma omp parallel
#endif
  {
    double local_max = kNegInf;
    std::vector<RatioPoint> local_top;
#if defined(_OPENMP)
#pragma omp for schedule(static) nowait
#endif
    for (int i = 0; i < n; ++i) {
      double x = -1.0 + (i + 0.5) * h;
      for (int j = 0; j < (real_plane ? 1 : n); ++j) {
        double y = real_plane ? 0.0 : -1.0 + (j + 0.5) * h;
        for (int k = 0; k < n; ++k) {
          double z = -1.0 + (k + 0.5) * h;
          double r2 = x * x + y * y + z * z;
          if (r2 >= 1.0) continue;
          BlochVector b(x, y, z);
          double g = proposal.logpdf(b);
          double f = target(b);
          if (f <= kLogZero) continue;
          double lr = g == kNegInf ? std::numeric_limits<double>::infinity() : f - g;
          if (lr > local_max) local_max = lr;
          local_top.push_back({lr, b});
          std::sort(local_top.begin(), local_top.end(),
                    [](const RatioPoint& a, const RatioPoint& c) {
                      return a.log_ratio > c.log_ratio;
                    });
          if (local_top.size() > 10) local_top.resize(10);
        }
      }
    }
#if defined(_OPENMP)
#pragma omp critical
#endif
    {
      grid_max = std::max(grid_max, local_max);
      for (const auto& p : local_top) push_top(p.log_ratio, p.b);
    }
  }

  if (!std::isfinite(grid_max))
    throw UnboundedRatio("estimate_bound: target is positive where the proposal vanishes");

  double refined = grid_max;
  for (const auto& p : top)
    refined = std::max(refined, refine_local(target, proposal, p.b, h, real_plane));
  if (refined > grid_max + std::log(1e6))
    throw UnboundedRatio("estimate_bound: ratio grows without bound under refinement");
  return safety * std::exp(refined);
}

// ---- rejection sampling -------------------------------------------------

namespace {

// Per-chunk kernel; identical arithmetic on the serial and parallel paths.
struct ChunkResult {
  std::vector<BlochVector> accepted;
  double max_ratio = 0.0;
  bool violation = false;
  BlochVector violating;
};

ChunkResult run_chunk(const TargetLogPdf& target, const Proposal& proposal,
                      double log_c, std::uint64_t seed, long chunk_id) {
  ChunkResult res;
  RandomStream stream(seed, static_cast<std::uint64_t>(chunk_id));
  for (long i = 0; i < kChunk; ++i) {
    BlochVector b = proposal.propose(stream);
    double u = stream.next_double();
    double f = target(b);
    if (f <= kLogZero) continue;
    double g = proposal.logpdf(b);
    double lr = f - g;
    double ratio = std::exp(lr);
    if (ratio > res.max_ratio) res.max_ratio = ratio;
    if (lr > log_c + 1e-9) {
      res.violation = true;
      res.violating = b;
      return res;
    }
    if (std::log(std::max(u, 1e-300)) <= lr - log_c) res.accepted.push_back(b);
  }
  return res;
}

std::vector<BlochVector> rejection_impl(const TargetLogPdf& target,
                                        const Proposal& proposal, double c,
                                        long n_accept, std::uint64_t seed,
                                        RejectionReport* report, int workers,
                                        bool parallel) {
  if (n_accept < 1) throw ConfigError("rejection_sample: n_accept >= 1 required");
  if (!(c > 0.0)) throw ConfigError("rejection_sample: c > 0 required");
  auto t0 = std::chrono::steady_clock::now();
  const double log_c = std::log(c);

  std::vector<ChunkResult> chunks;
  long accepted_total = 0;
  long next_chunk = 0;
  long batch = 8;
  while (accepted_total < n_accept) {
    long first = next_chunk;
    chunks.resize(static_cast<std::size_t>(first + batch));
#if defined(_OPENMP)
    if (parallel) {
      if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic)
      for (long id = first; id < first + batch; ++id)
        chunks[static_cast<std::size_t>(id)] = run_chunk(target, proposal, log_c, seed, id);
    } else
#endif
    {
      for (long id = first; id < first + batch; ++id)
        chunks[static_cast<std::size_t>(id)] = run_chunk(target, proposal, log_c, seed, id);
    }
    (void)parallel;
    (void)workers;
    next_chunk += batch;
    accepted_total = 0;
    for (const auto& ch : chunks) {
      if (ch.violation)
        throw RatioExceedsBound("rejection_sample: ratio exceeds bound c at Bloch (" +
                                std::to_string(ch.violating.x) + ", " +
                                std::to_string(ch.violating.y) + ", " +
                                std::to_string(ch.violating.z) + "); re-estimate c");
      accepted_total += static_cast<long>(ch.accepted.size());
    }
    // Size the next batch from the observed rate.
    double rate = static_cast<double>(accepted_total) /
                  static_cast<double>(next_chunk * kChunk);
    long remaining = n_accept - accepted_total;
    if (remaining > 0) {
      double per_chunk = std::max(rate * kChunk, 1e-3);
      batch = std::clamp(static_cast<long>(std::ceil(remaining / per_chunk)) + 1, 1L, 65536L);
    }
  }

  std::vector<BlochVector> out;
  out.reserve(static_cast<std::size_t>(n_accept));
  double max_ratio = 0.0;
  long proposed = next_chunk * kChunk;
  for (const auto& ch : chunks) {
    max_ratio = std::max(max_ratio, ch.max_ratio);
    for (const auto& b : ch.accepted) {
      if (static_cast<long>(out.size()) < n_accept) out.push_back(b);
    }
  }
  if (report) {
    report->proposed = proposed;
    report->accepted = accepted_total;
    report->acceptance_rate = static_cast<double>(accepted_total) / proposed;
    report->bound_c = c;
    report->max_observed_ratio = max_ratio;
    report->wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

}  // namespace

std::vector<BlochVector> rejection_sample(const TargetLogPdf& target,
                                          const Proposal& proposal, double c,
                                          long n_accept, std::uint64_t seed,
                                          RejectionReport* report, int workers) {
  return rejection_impl(target, proposal, c, n_accept, seed, report, workers, true);
}

std::vector<BlochVector> rejection_sample_serial(const TargetLogPdf& target,
                                                 const Proposal& proposal, double c,
                                                 long n_accept, std::uint64_t seed,
                                                 RejectionReport* report) {
  return rejection_impl(target, proposal, c, n_accept, seed, report, 1, false);
}

double measure_acceptance_rate(const TargetLogPdf& target, const Proposal& proposal,
                               double c, long n_proposals, std::uint64_t seed,
                               int workers) {
  if (n_proposals < 1) throw ConfigError("measure_acceptance_rate: n_proposals >= 1");
  if (!(c > 0.0)) throw ConfigError("measure_acceptance_rate: c > 0 required");
  const double log_c = std::log(c);
  const long n_chunks = (n_proposals + kChunk - 1) / kChunk;
  std::vector<long> accepted(static_cast<std::size_t>(n_chunks), 0);
#if defined(_OPENMP)
  if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic)
#endif
  for (long id = 0; id < n_chunks; ++id) {
    RandomStream stream(seed, static_cast<std::uint64_t>(id));
    long lo = id * kChunk;
    long hi = std::min(n_proposals, lo + kChunk);
    long acc = 0;
    for (long i = lo; i < hi; ++i) {
      BlochVector b = proposal.propose(stream);
      double u = stream.next_double();
      double f = target(b);
      if (f <= kLogZero) continue;
      double lr = f - proposal.logpdf(b);
      if (std::log(std::max(u, 1e-300)) <= lr - log_c) ++acc;
    }
    accepted[static_cast<std::size_t>(id)] = acc;
  }
  (void)workers;
  long total = 0;
  for (long a : accepted) total += a;
  return static_cast<double>(total) / static_cast<double>(n_proposals);
}

// ---- proposal construction ----------------------------------------------

namespace {

// mu for the boundary-peaked family (complex N=2 / real N=3) matching the
// target's center-to-peak log-density gain along the peak direction.
double solve_boundary_mu(double target_gain, int N, Field field) {
  double xi_base = field == Field::Real ? 0.5 * N : 2.0 * N;
  double a = field == Field::Real ? static_cast<double>(N) : 2.0 * N;
  double b = field == Field::Real ? 0.5 * N : static_cast<double>(N);
  auto gain = [&](double mu) {
    double c0 = xi_base * mu * mu;
    return series_factor(a, b, 2.0 * c0) - series_factor(a, b, c0);
  };
  if (target_gain <= 0.0) return 0.1;
  double lo = 0.0, hi = 20.0;
  if (gain(hi) < target_gain) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gain(mid) < target_gain)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ProposalSpec build_proposal(const Pom& pom, const ClickRecord& clicks,
                            ProposalStrategy strategy, const ProposalKnobs& knobs) {
  pom.validate();
  clicks.validate(pom);
  const Field field = pom.kind;
  MlePeak peak = mle(pom, clicks);
  AffinePom ap(pom);
  double alpha = knobs.alpha;
  if (alpha < 0.0 || alpha >= 1.0) throw ConfigError("build_proposal: alpha in [0, 1) required");

  ProposalSpec spec;
  spec.field = field;

  Eigen::Vector3d dir = peak.bloch.vec();
  if (dir.norm() < 1e-9) dir = Eigen::Vector3d::UnitX();
  spec.rotation = align_rotation(BlochVector(1, 0, 0), BlochVector::from_vec(dir));

  auto interior_component = [&](double weight) {
    double r = std::min(peak.spherical.r, 0.999);
    double mu = knobs.mu_interior > 0.0 ? knobs.mu_interior
                                        : (r > 1e-9 ? fit_mean_radial(r, knobs.N, field) : 0.0);
    ProposalSpec::Component comp;
    comp.weight = weight;
    comp.wishart = WishartParams::axial(field, 2, knobs.N, mu);
    return comp;
  };
  auto boundary_component = [&](double weight) {
    int Nb = field == Field::Complex ? 2 : 3;
    double mu = knobs.mu_boundary;
    if (mu <= 0.0) {
      double gain = ap.log_posterior(clicks, peak.bloch) -
                    ap.log_posterior(clicks, BlochVector(0, 0, 0));
      mu = solve_boundary_mu(gain, Nb, field);
    }
    ProposalSpec::Component comp;
    comp.weight = weight;
    comp.wishart = WishartParams::axial(field, 2, Nb, mu);
    return comp;
  };

  switch (strategy) {
    case ProposalStrategy::InteriorPeak:
      spec.components.push_back(interior_component(1.0 - alpha));
      break;
    case ProposalStrategy::BoundaryPeak:
      spec.components.push_back(boundary_component(1.0 - alpha));
      break;
    case ProposalStrategy::TwoWishartMix: {
      double w = knobs.w_interior;
      if (w <= 0.0 || w >= 1.0) throw ConfigError("build_proposal: w_interior in (0, 1)");
      spec.components.push_back(interior_component(w * (1.0 - alpha)));
      spec.components.push_back(boundary_component((1.0 - w) * (1.0 - alpha)));
      break;
    }
  }
  if (alpha > 0.0) {
    ProposalSpec::Component uni;
    uni.weight = alpha;
    spec.components.push_back(uni);
  }
  return spec;
}

}  // namespace qwishart
