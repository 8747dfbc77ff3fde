#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hsball/boundary.hpp"
#include "hsball/kernels.hpp"
#include "hsball/params.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

// Minimal-H_s^2-norm interpolant in the kernel span: g = sum_i c_i k_{a_i}
// with G c = values, so norm^2 = values^* G^{-1} values.
struct MinNormInterpolant {
  PolyFn g;
  Eigen::VectorXcd coeffs;
  double norm2 = 0.0;
  double maxResidual = 0.0;
};

MinNormInterpolant min_norm_interpolant(const PointSeq& seq,
                                        const Eigen::VectorXcd& values,
                                        KernelConvention convention,
                                        int degreeCap);

// Feasibility record of the bisection on t: multiplier interpolation with
// norm <= t is feasible iff [(t^2 - lambda_i conj(lambda_j)) K(a_i,a_j)] is
// positive semidefinite (complete-Pick regime rho <= 1, p = 2).
struct PickResult {
  double tMin = 0.0;
  std::vector<std::pair<double, bool>> trace;  // (t, feasible)
  double certificateEig = 0.0;                 // min eigenvalue at tMin
};

PickResult pick_min_norm(const PointSeq& seq, const Eigen::VectorXcd& values,
                         const SpaceParams& params);

// Extremal multiplier realized from the null vector nu of the Pick matrix at
// tMin:  m = tMin^2 (sum nu_i k_i) / (sum nu_i conj(lambda_i) k_i), the
// quotient computed by power-series division in the quotient ring, then
// corrected by a small kernel-span interpolant so the values are hit to
// near machine precision.  Falls back to the kernel-span interpolant when
// the denominator's constant term is too small for a stable division.
struct PickFunctionResult {
  PickResult pick;
  PolyFn m;
  double maxResidual = 0.0;
  bool quotientPath = false;
};

PickFunctionResult pick_extremal_function(const PointSeq& seq,
                                          const Eigen::VectorXcd& values,
                                          const SpaceParams& params,
                                          int degreeCap);

// Multiplier norm estimate of a polynomial m on H_s^p.
//   galerkinUpper: largest singular value of (project to degree <= cap) o
//     (multiply by m) in the hs2_inner geometry (p = 2 only).
//   samplingLower: max ||trunc(m f)||/||f|| over a documented family
//     (monomials, seeded random polynomials, truncated kernels at seeded
//     points); any p, Monte Carlo norms when p != 2.
struct MultiplierEstimate {
  double galerkinUpper = 0.0;
  double samplingLower = 0.0;
  int degreeCap = 0;
};

MultiplierEstimate multiplier_norm_estimate(const PolyFn& m,
                                            const SpaceParams& params,
                                            int degreeCap,
                                            const QuadratureSpec& quad = {},
                                            uint64_t familySeed = 2024);

// || (M_m)^* k_a - conj(m(a)) k_a || / ||k_a|| in the degree-capped Galerkin
// model with the Exact kernel; vanishes up to the kernel truncation tail.
double adjoint_eigen_residual(const PolyFn& m, const Point& a,
                              const SpaceParams& params, int degreeCap);

}  // namespace hsball
