// Placement of the proposal density's mode at a requested state: 1-D mean
// solve with rotation for qubits, and the stationary-point covariance/mean
// construction for any dimension.

#pragma once

#include "qwishart/density.hpp"
#include "qwishart/types.hpp"
#include "qwishart/wishart.hpp"

namespace qwishart {

// With Sigma = I and an axial all-mu mean, returns mu > 0 placing the radial
// stationary point of the qubit density at x = r. Bracketed root-find on the
// analytic radial derivative of the log density; reproducible to 1e-6.
// Throws NoRoot if [0, 20] contains no sign change.
double fit_mean_radial(double r, int N, Field field);

struct QubitProposal {
  WishartParams params;  // axial, peak on +x axis
  Rotation3 rotation;    // maps +x to the target direction
};

// Axial ensemble peaked at |target| plus the rotation carrying +x to the
// target direction. Identity rotation when the target is on +x or at origin.
QubitProposal build_qubit_proposal(const BlochVector& target, int N, Field field);

struct StationarySolution {
  Matrix Sigma1;   // covariance with tr(Sigma1^-1 rho_p) = 1
  Matrix M1;       // rank-1 mean, M1 = Sigma1 M2 / sqrt(kappa)
  double residual; // tangent-space gradient norm at rho_p
};

// Solves the stationarity condition at rho_p for a chosen rank-1 M2 via
// fixed-point iteration on T1 = S'(xi^2)/S(xi^2), starting from the central
// solution T1 = 0. Requires rho_p full rank and N > d. Throws NotFullRank or
// FixedPointDivergence (500 iterations).
StationarySolution stationary_params(const DensityMatrix& rho_p, const Matrix& M2,
                                     int N, Field field);

// Central-difference gradient norm of the log density over trace-preserving
// Hermitian perturbations at rho_p; step 1e-5.
double verify_stationary(const WishartParams& p, const DensityMatrix& rho_p);

}  // namespace qwishart
