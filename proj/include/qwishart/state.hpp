// Qubit Bloch parameterization, uniform state generation and alignment
// rotations shared by all other modules.

#pragma once

#include "qwishart/rng.hpp"
#include "qwishart/types.hpp"

namespace qwishart {

// rho = (I + x sx + y sy + z sz) / 2. Throws RadiusOutOfRange if r > 1 + 1e-10.
DensityMatrix bloch_to_rho(const BlochVector& b);

// Inverse of bloch_to_rho; d must be 2.
BlochVector rho_to_bloch(const DensityMatrix& rho);

// Uniform (Hilbert-Schmidt) random state: trace-normalized central complex
// Wishart with N = d. For d = 2 this is flat over the Bloch ball.
DensityMatrix sample_uniform_state(int d, RandomStream& stream);

// Flat draws in Bloch coordinates, law-equal to sample_uniform_state(2) on
// the ball; the disc variant is the real-plane uniform reference measure.
BlochVector sample_uniform_ball(RandomStream& stream);
BlochVector sample_uniform_disc(RandomStream& stream);  // x-z plane, y = 0

// Proper rotation R with R from/|from| = to/|to|. Throws ZeroVector if either
// input has norm < 1e-12.
Rotation3 align_rotation(const BlochVector& from, const BlochVector& to);

// Unitary conjugation rho -> U rho U^dagger, the d > 2 alignment transform.
DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& U);

}  // namespace qwishart
