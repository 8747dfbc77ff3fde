#pragma once

#include <cstdint>
#include <vector>

#include "hsball/params.hpp"

namespace hsball {

// Self-contained, fully pinned random number generation.  The standard
// library's distributions are implementation-defined, which would break the
// byte-identical-report guarantee, so uniforms and gaussians are generated
// explicitly (xoshiro256++ seeded through splitmix64, Box-Muller).
uint64_t splitmix64_next(uint64_t& state);

class Rng {
 public:
  explicit Rng(uint64_t seed);
  // Independent stream for chunk/draw `index` of a seeded experiment.
  Rng(uint64_t seed, uint64_t index);

  uint64_t next_u64();
  double uniform01();                    // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // standard gaussian, Box-Muller
  Complex complex_normal();              // independent N(0,1) re/im

 private:
  uint64_t s_[4];
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Uniform point of the real sphere S^{2n-1}, returned as a complex n-vector:
// 2n gaussians, normalized.
std::vector<Complex> sphere_point(Rng& rng, int n);

// Uniform point of the ball of radius maxRadius: sphere direction times
// U^{1/(2n)} (the volume-measure radial law), scaled.
Point ball_point(Rng& rng, int n, double maxRadius = 1.0);

}  // namespace hsball
