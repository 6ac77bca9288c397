#include "qwishart/rng.hpp"

#include <cmath>

namespace qwishart {

double RandomStream::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; u1 in (0, 1].
  double u1 = 1.0 - next_double();
  double u2 = next_double();
  double mag = std::sqrt(-2.0 * std::log(u1));
  double ang = 6.283185307179586476925286766559 * u2;
  cached_ = mag * std::sin(ang);
  has_cached_ = true;
  return mag * std::cos(ang);
}

}  // namespace qwishart
