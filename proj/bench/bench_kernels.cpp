// Serial vs OpenMP timing for the three data-parallel kernels: batch state
// sampling, the rejection loop, and BLR curve counting. Also asserts that
// both paths produce identical output, which is the determinism contract.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qwishart/blr.hpp"
#include "qwishart/sampler.hpp"

using namespace qwishart;

namespace {

double seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-24s %10.3fs %10.3fs %8.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int n_states = argc > 1 ? std::atoi(argv[1]) : 200000;
  const long n_accept = argc > 2 ? std::atol(argv[2]) : 200000;

  std::printf("%-24s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  // 1. batch Wishart sampling
  WishartParams wp = WishartParams::axial(Field::Complex, 2, 6, 0.7);
  std::vector<DensityMatrix> a, b;
  double ts = seconds([&] { a = sample_states_batch_serial(wp, n_states, 42); });
  double tp = seconds([&] { b = sample_states_batch(wp, n_states, 42); });
  for (int i = 0; i < n_states; ++i)
    if ((a[i].rho - b[i].rho).cwiseAbs().maxCoeff() != 0.0) {
      std::fprintf(stderr, "batch kernel mismatch at %d\n", i);
      return 1;
    }
  row("sample_states_batch", ts, tp);

  // 2. rejection loop on the tetrahedron posterior
  Pom pom = Pom::builtin("tetrahedron");
  ClickRecord clicks{{12, 7, 21, 10}};
  AffinePom ap(pom);
  TargetLogPdf target = [&](const BlochVector& v) { return ap.log_posterior(clicks, v); };
  ProposalKnobs knobs;
  knobs.mu_boundary = 0.85;
  Proposal proposal(build_proposal(pom, clicks, ProposalStrategy::TwoWishartMix, knobs));
  double c = estimate_bound(target, proposal);
  std::vector<BlochVector> ss, sp;
  ts = seconds([&] { ss = rejection_sample_serial(target, proposal, c, n_accept, 7); });
  tp = seconds([&] { sp = rejection_sample(target, proposal, c, n_accept, 7); });
  for (long i = 0; i < n_accept; ++i)
    if (ss[i].x != sp[i].x || ss[i].y != sp[i].y || ss[i].z != sp[i].z) {
      std::fprintf(stderr, "rejection kernel mismatch at %ld\n", i);
      return 1;
    }
  row("rejection_sample", ts, tp);

  // 3. BLR counting over both samples
  std::vector<BlochVector> uniform;
  uniform.reserve(ss.size());
  RandomStream stream(3, 0);
  for (std::size_t i = 0; i < ss.size(); ++i) uniform.push_back(sample_uniform_ball(stream));
  BlrCurve cs, cp;
  ts = seconds([&] {
    cs = blr_curves(pom, clicks, uniform, ss, default_lambda_grid(), 1);
  });
  tp = seconds([&] {
    cp = blr_curves(pom, clicks, uniform, ss, default_lambda_grid(), 0);
  });
  for (std::size_t i = 0; i < cs.lambdas.size(); ++i)
    if (cs.size[i] != cp.size[i] ||
        cs.credibility_empirical[i] != cp.credibility_empirical[i]) {
      std::fprintf(stderr, "blr kernel mismatch at %zu\n", i);
      return 1;
    }
  row("blr_curves", ts, tp);
  return 0;
}
