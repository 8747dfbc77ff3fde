#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "hsball/errors.hpp"

namespace hsball {

using Complex = std::complex<double>;

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

// Conjugate exponent q' with 1/q + 1/q' = 1.  q = 1 maps to the infinity
// marker and q = infinity maps to 1.
double conjugate_exponent(double q);

// The parameter triple (n, s, p).  Validation:
//   n >= 1, s >= 0, p >= 1 (hard); s != n/2 (the kernel degenerates there,
//   hard); s <= n/p (soft, lifted by override_sp_bound with a warning flag).
struct SpaceParams {
  int n = 1;
  double s = 0.0;
  double p = 2.0;
  bool override_sp_bound = false;

  static SpaceParams make(int n, double s, double p,
                          bool override_sp_bound = false);

  double pPrime() const { return conjugate_exponent(p); }
  double rho() const { return n - 2.0 * s; }

  // Kernel norm exponent s - n/q' = s - n(1 - 1/q); finite for every
  // q in [1, infinity].
  double kernelExp(double q) const;

  // True when the soft bound s <= n/p is violated (requires the override).
  bool spBoundViolated() const { return s * p > n + 1e-12; }
};

struct Exponents {
  double pPrime;
  double rho;
  double kernelNormExp_p;
  double kernelNormExp_pPrime;
};

Exponents derive_exponents(const SpaceParams& params);

// The exponent q with 1/q = 1/p - s/n; rejects sp >= n.
double sobolev_embedding_q(const SpaceParams& params);

// A point of the open unit ball of C^n.
struct Point {
  std::vector<Complex> z;

  static Point make(std::vector<Complex> coords);

  int n() const { return static_cast<int>(z.size()); }
  double norm2() const;
  double norm() const;
};

// Hermitian inner product sum_t a_t conj(b_t).
Complex herm_inner(const Point& a, const Point& b);
Complex herm_inner(const std::vector<Complex>& a, const std::vector<Complex>& b);

// A finite sequence of distinct points of the ball, with optional labels.
struct PointSeq {
  SpaceParams params;
  std::vector<Point> points;
  std::vector<std::string> labels;

  static PointSeq make(SpaceParams params, std::vector<Point> points,
                       std::vector<std::string> labels = {});

  size_t size() const { return points.size(); }
};

}  // namespace hsball
