// Matrix-variate Gaussian sampling with rank-1 mean and general covariance,
// and trace-normalized Wishart random states.

#pragma once

#include <vector>

#include "qwishart/rng.hpp"
#include "qwishart/types.hpp"

namespace qwishart {

// One quantum Wishart ensemble: field, state dimension d, column count N,
// rank-1 mean matrix M (d x N) and Hermitian positive definite covariance
// Sigma (d x d).
struct WishartParams {
  Field field = Field::Complex;
  int d = 2;
  int N = 2;
  Matrix M;      // d x N, rank <= 1
  Matrix Sigma;  // d x d

  // Central ensemble: M = 0, Sigma = I.
  static WishartParams central(Field field, int d, int N);

  // Sigma = I, mean peaked along +x for qubits: all-mu real entries for the
  // real field, sqrt(2) e^{i pi/4} mu entries for the complex field. The
  // complex phase convention makes xi^2 = 2 N mu^2 (1 + x).
  static WishartParams axial(Field field, int d, int N, double mu);

  // Throws on violated invariants (rank(M) <= 1, Sigma PD Hermitian,
  // N >= 3 real / N >= 2 complex, N >= d).
  void validate() const;
};

// A = M + Sigma^{1/2} G with G standard (complex) normal entries; Sigma^{1/2}
// is the Cholesky factor. Matches exp(-1/2 tr{(A-M)^T Sigma^-1 (A-M)}) in the
// real field and exp(-tr{(A-M)^dag Sigma^-1 (A-M)}) in the complex field.
Matrix sample_gaussian_matrix(const WishartParams& p, RandomStream& stream);

// rho = A A^dag / tr(A A^dag).
DensityMatrix sample_state(const WishartParams& p, RandomStream& stream);

// n independent draws, one RandomStream per index (stream_id = i), so the
// output is identical for any worker count. OpenMP-parallel.
std::vector<DensityMatrix> sample_states_batch(const WishartParams& p, int n,
                                               std::uint64_t seed,
                                               int workers = 0);

// Serial reference for the batch kernel; must produce the identical list.
std::vector<DensityMatrix> sample_states_batch_serial(const WishartParams& p,
                                                      int n, std::uint64_t seed);

}  // namespace qwishart
