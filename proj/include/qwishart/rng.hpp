// Reproducible counter-free random streams (pcg32, PCG-XSH-RR-64/32).
//
// Each (seed, stream_id) pair selects an independent pcg32 stream via the
// generator's odd-increment mechanism, so workers can draw concurrently
// without coordination and a run is bit-reproducible across platforms.
// Normal variates use Box-Muller on 53-bit uniforms; no libc distribution
// objects are involved anywhere.

#pragma once

#include <complex>
#include <cstdint>

namespace qwishart {

inline constexpr const char* kRngAlgorithm = "pcg32 (PCG-XSH-RR-64/32) + Box-Muller";

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(0u), inc_((stream_id << 1u) | 1u) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    std::uint64_t hi = static_cast<std::uint64_t>(next_u32() >> 5);   // 27 bits
    std::uint64_t lo = static_cast<std::uint64_t>(next_u32() >> 6);   // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  // Standard normal N(0,1).
  double next_normal();

  // Standard complex normal with E|z|^2 = 1.
  std::complex<double> next_cnormal() {
    double re = next_normal();
    double im = next_normal();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace qwishart
