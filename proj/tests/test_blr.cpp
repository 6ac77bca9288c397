#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qwishart/blr.hpp"
#include "qwishart/sampler.hpp"
#include "qwishart/state.hpp"

using namespace qwishart;

namespace {

std::vector<BlochVector> uniform_ball_sample(int n, std::uint64_t seed) {
  std::vector<BlochVector> out;
  out.reserve(static_cast<std::size_t>(n));
  RandomStream s(seed, 0);
  for (int i = 0; i < n; ++i) out.push_back(sample_uniform_ball(s));
  return out;
}

std::vector<BlochVector> posterior_sample(const Pom& pom, const ClickRecord& clicks,
                                          int n, std::uint64_t seed) {
  AffinePom ap(pom);
  TargetLogPdf target = [ap, clicks](const BlochVector& b) {
    return ap.log_posterior(clicks, b);
  };
  ProposalKnobs knobs;
  knobs.N = 5;
  Proposal prop(build_proposal(pom, clicks, ProposalStrategy::TwoWishartMix, knobs));
  double c = estimate_bound(target, prop, 0.02);
  return rejection_sample(target, prop, c, n, seed);
}

}  // namespace

TEST_CASE("region indicator endpoints") {
  Pom pom = Pom::builtin("tetrahedron");
  ClickRecord clicks{{12, 7, 21, 10}};
  MlePeak peak = mle(pom, clicks);
  double ll = peak.log_likelihood_at_peak;
  CHECK(region_indicator(pom, clicks, 0.0, BlochVector(0.9, 0.0, 0.0), ll));
  CHECK(region_indicator(pom, clicks, 1.0, peak.bloch, ll));
  CHECK(region_indicator(pom, clicks, 0.5, peak.bloch, ll));
  CHECK_FALSE(region_indicator(pom, clicks, 1.0, BlochVector(-0.9, 0.0, 0.0), ll));
  CHECK_THROWS_AS(region_indicator(pom, clicks, 1.5, peak.bloch, ll), ConfigError);
}

TEST_CASE("curve endpoints, ranges and monotonicity") {
  Pom pom = Pom::builtin("tetrahedron");
  ClickRecord clicks{{12, 7, 21, 10}};
  auto uni = uniform_ball_sample(20000, 1);
  auto post = posterior_sample(pom, clicks, 20000, 2);
  BlrCurve curve = blr_curves(pom, clicks, uni, post, default_lambda_grid());
  REQUIRE(curve.lambdas.size() == 101);
  CHECK(curve.size.front() == 1.0);
  CHECK(curve.credibility_empirical.front() == 1.0);
  CHECK(curve.credibility_theoretical.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curve.size.back() < 0.01);
  CHECK(curve.credibility_empirical.back() < 0.05);
  for (std::size_t i = 1; i < curve.lambdas.size(); ++i) {
    CHECK(curve.size[i] <= curve.size[i - 1] + 1e-12);
    CHECK(curve.credibility_empirical[i] <= curve.credibility_empirical[i - 1] + 1e-12);
    CHECK(curve.credibility_theoretical[i] <= curve.credibility_theoretical[i - 1] + 1e-9);
  }
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    CHECK(curve.credibility_empirical[i] >= curve.size[i] - 0.02);
    CHECK(curve.size[i] >= 0.0);
    CHECK(curve.credibility_theoretical[i] <= 1.0 + 1e-12);
  }
}

TEST_CASE("empirical and theoretical credibility agree at moderate sample size") {
  Pom pom = Pom::builtin("tetrahedron");
  ClickRecord clicks{{5, 20, 23, 7}};
  auto uni = uniform_ball_sample(30000, 3);
  auto post = posterior_sample(pom, clicks, 30000, 4);
  BlrCurve curve = blr_curves(pom, clicks, uni, post, default_lambda_grid());
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
    worst = std::max(worst,
                     std::fabs(curve.credibility_empirical[i] -
                               curve.credibility_theoretical[i]));
  CHECK(worst <= 0.04);  // the binding 0.02 check at 1e5 runs in acceptance
}

TEST_CASE("empty samples are rejected") {
  Pom pom = Pom::builtin("tetrahedron");
  ClickRecord clicks{{12, 7, 21, 10}};
  std::vector<BlochVector> empty, some = {BlochVector(0.1, 0.0, 0.0)};
  CHECK_THROWS_AS(blr_curves(pom, clicks, empty, some, default_lambda_grid()),
                  EmptySample);
  CHECK_THROWS_AS(blr_curves(pom, clicks, some, empty, default_lambda_grid()),
                  EmptySample);
}

TEST_CASE("worker count does not change the curves") {
  Pom pom = Pom::builtin("tetrahedron");
  ClickRecord clicks{{12, 7, 21, 10}};
  auto uni = uniform_ball_sample(5000, 5);
  auto post = posterior_sample(pom, clicks, 5000, 6);
  BlrCurve a = blr_curves(pom, clicks, uni, post, default_lambda_grid(), 1);
  BlrCurve b = blr_curves(pom, clicks, uni, post, default_lambda_grid(), 3);
  for (std::size_t i = 0; i < a.lambdas.size(); ++i) {
    CHECK(a.size[i] == b.size[i]);
    CHECK(a.credibility_empirical[i] == b.credibility_empirical[i]);
  }
}
