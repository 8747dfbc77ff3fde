#include "hsball/rng.hpp"

#include <cmath>
#include <numbers>

namespace hsball {

uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {
inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& lane : s_) lane = splitmix64_next(sm);
}

Rng::Rng(uint64_t seed, uint64_t index) {
  // Decorrelate streams by mixing the index through splitmix before seeding.
  uint64_t sm = seed;
  const uint64_t mixed = splitmix64_next(sm) ^ (index * 0x9E3779B97F4A7C15ULL);
  uint64_t sm2 = mixed;
  for (auto& lane : s_) lane = splitmix64_next(sm2);
}

uint64_t Rng::next_u64() {
  // xoshiro256++
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::vector<Complex> sphere_point(Rng& rng, int n) {
  std::vector<Complex> z(n);
  double norm2 = 0.0;
  for (int t = 0; t < n; ++t) {
    z[t] = rng.complex_normal();
    norm2 += std::norm(z[t]);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : z) c *= inv;
  return z;
}

Point ball_point(Rng& rng, int n, double maxRadius) {
  std::vector<Complex> z = sphere_point(rng, n);
  const double r =
      maxRadius * std::pow(rng.uniform01(), 1.0 / (2.0 * n));
  for (auto& c : z) c *= r;
  return Point{std::move(z)};
}

}  // namespace hsball
