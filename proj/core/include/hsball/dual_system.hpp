#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "hsball/params.hpp"
#include "hsball/pick.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

// Roots-of-unity dual system on a finite sequence S = {a_1, ..., a_N}:
// beta_j interpolates the characters beta_j(a_k) = theta^{jk},
// theta = exp(2 pi i / N), and gamma is their discrete Fourier transform
//   gamma_l = (1/N) sum_j theta^{-jl} beta_j,   gamma_l(a_k) = delta_{lk}.
// Convolution powers Q_l (hat(Q_l) = gamma^l in the quotient ring) feed the
// extension and domination machinery.
//
// Realization: beta_j is the minimal-norm kernel-span interpolant of its
// character values (a single point realizes as the constant function, the
// minimal multiplier-norm choice).  C_estimate is the realized path's norm:
// max over j of max(Galerkin upper estimate, sampling lower estimate,
// sampled sup norm).  In the complete-Pick regime (rho <= 1, p = 2) the
// optimal constant max_j tMin is additionally certified and reported as
// pickCertificate (a lower bound for the optimal constant, which the
// realized functions may exceed).
struct DualSystem {
  PointSeq seq;
  SpaceParams params;
  int N = 0;
  int degreeCap = 12;
  Complex theta;
  std::vector<PolyFn> beta;   // beta[j-1] = beta_j, j = 1..N
  std::vector<PolyFn> gamma;  // gamma[l-1] = gamma_l, l = 1..N
  std::map<int, std::vector<PolyFn>> Q;  // l -> group-indexed Q_l[0..N-1]
  double C_estimate = 1.0;
  double pickCertificate = 0.0;  // 0 when outside the certified regime
  double maxCharacterResidual = 0.0;

  // Group-element view: member(j mod N); beta_j depends on j only mod N.
  const PolyFn& beta_group(int g) const;
  const PolyFn& gamma_group(int g) const;
};

DualSystem build_beta(const PointSeq& seq, const SpaceParams& params,
                      int degreeCap, uint64_t seed = 9001);

// Fills gamma by termwise inverse DFT of the beta coefficients.
void gamma_dft(DualSystem& sys);

// Q_1 = beta; Q_l(k) = (1/N) sum_j beta_j Q_{l-1}(k-j mod N).  Memoized on
// the system; returns the group-indexed list.
const std::vector<PolyFn>& convolution_power(DualSystem& sys, int l,
                                             bool strict = false);

// max over seeded ball samples z of sum_a |gamma_a(z)|^{2l} against
// C_estimate^{2l}; a conditional check on the estimated constant.
struct Ha0Report {
  double maxSum = 0.0;
  double bound = 0.0;
  bool pass = false;
};

Ha0Report ha0_bound_check(const DualSystem& sys, int l, int zSamples,
                          uint64_t seed);

// H_q = Q_l(q) h, and the pointwise domination
// |R^j(gamma_a^l h)(z)| <= (1/N) sum_q |R^j(H_q)(z)| checked at seeded
// samples for every a; minSlack is the worst rhs - lhs (>= -1e-12 expected).
struct DominationReport {
  std::vector<PolyFn> H;
  double minSlack = 0.0;
  bool pass = false;
};

DominationReport domination_split(DualSystem& sys, const PolyFn& h, int l,
                                  int j, int zSamples, uint64_t seed);

}  // namespace hsball
