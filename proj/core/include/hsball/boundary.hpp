#pragma once

#include <cstdint>
#include <vector>

#include "hsball/params.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

enum class QuadMode { ExactMoments, MonteCarlo };

// How to integrate over the unit sphere.  Monte Carlo sampling is seeded and
// chunked in fixed order, so the reduction is deterministic regardless of
// parallelism.
struct QuadratureSpec {
  QuadMode mode = QuadMode::ExactMoments;
  long sampleCount = 200000;
  uint64_t seed = 42;
  double relStderrTol = 0.01;
  long chunkSize = 4096;
};

struct NormReport {
  double value = 0.0;
  double stderrEst = 0.0;  // 0 in exact mode
  QuadMode mode = QuadMode::ExactMoments;
  std::vector<double> perJ;  // per-derivative H^p norms (MaxDerivative flavor)
};

// Exact moment of the normalized surface measure:
//   int_{S} z^alpha conj(z)^beta dsigma = 0 unless alpha = beta,
//   and for alpha = beta equals (n-1)! alpha! / (n-1+|alpha|)!.
double monomial_moment(const MultiIndex& alpha, const MultiIndex& beta, int n);
double monomial_weight(const MultiIndex& alpha, int n);  // the alpha = beta value

// Weight (1+|alpha|)^{2s} w_alpha of the diagonal inner product.
double hs2_weight(const MultiIndex& alpha, const SpaceParams& params);

// <f, g> = sum_alpha (1+|alpha|)^{2s} w_alpha c_alpha(f) conj(c_alpha(g)).
Complex hs2_inner(const PolyFn& f, const PolyFn& g, const SpaceParams& params);

enum class NormFlavor { FractionalShift, MaxDerivative };

// Boundary norm of a polynomial.  All representable functions are
// polynomials, continuous up to the boundary, so the sup over r < 1 in the
// norm definition is attained at r = 1 and the integral is evaluated there.
//
// FractionalShift computes ||(I+R)^s f||_{H^p} (any real s); MaxDerivative
// computes max_{0<=j<=s} ||R^j f||_{H^p} (integer s only).  The H^p integral
// uses exact moments when p = 2 and seeded Monte Carlo otherwise.
NormReport hsp_norm(const PolyFn& f, const SpaceParams& params,
                    const QuadratureSpec& quad,
                    NormFlavor flavor = NormFlavor::FractionalShift);

// ||f||_{H^2} = sqrt(sum_alpha w_alpha |c_alpha|^2), exact.
double hp_norm_exact2(const PolyFn& f);

// Monte Carlo ||f||_{H^p}; throws QuadratureUnderResolved when the relative
// standard error of the p-th moment exceeds quad.relStderrTol.
NormReport hp_norm_mc(const PolyFn& f, double p, const QuadratureSpec& quad);

// Monte Carlo estimate of int_S z^alpha conj(z)^beta dsigma with a
// componentwise standard error, for oracle cross-checks.
struct MomentEstimate {
  Complex value;
  double stderrEst;
};
MomentEstimate monomial_moment_mc(const MultiIndex& alpha,
                                  const MultiIndex& beta, int n,
                                  const QuadratureSpec& quad);

}  // namespace hsball
