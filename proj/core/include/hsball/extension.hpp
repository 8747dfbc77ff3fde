#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "hsball/boundary.hpp"
#include "hsball/dual_system.hpp"
#include "hsball/params.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

// Deterministic Rademacher signs: sign(seed, drawIndex, labelIndex) in {-1,+1}.
struct RademacherDraw {
  uint64_t seed = 42;
  int drawCount = 0;

  static int sign(uint64_t seed, uint64_t drawIndex, uint64_t labelIndex);
};

// Bounded linear extension f = sum_a lambda_a gamma_a^l e_a with
// e_a = (truncated model kernel at a) / ||k_a||_{H_s^p} proxy, so that the
// target values are f(a) = lambda_a ||k_a||_{H_s^{p'}} proxy.
struct ExtensionReport {
  PolyFn f;
  std::vector<double> valueResiduals;
  double normRatio = 0.0;  // ||f||_{H_s^p} / ||lambda||_{l^p}
  int l = 0;
};

// l must exceed s; l = 0 selects the default floor(s)+1.
ExtensionReport linear_extension(DualSystem& sys,
                                 const Eigen::VectorXcd& lambda, int l,
                                 const QuadratureSpec& quad);

// Union gluing: with witnesses m_{a,b}(a) = 1, m_{a,b}(b) = 0,
//   m_b = sum_{a in S1} gamma_a^l m_{a,b},  m = sum_{b in S2} Gamma_b^l (1 - m_b),
// so m = 0 on S1 and m = 1 on S2.
struct GlueReport {
  PolyFn m;
  std::vector<double> residualsS1;  // |m(a) - 0|
  std::vector<double> residualsS2;  // |m(b) - 1|
};

GlueReport glue_union(DualSystem& sys1, DualSystem& sys2,
                      const std::map<std::pair<int, int>, PolyFn>& witnesses,
                      int l);

// M = (1-m) m1 + m m2: reproduces m1's values on S1 and m2's on S2.
PolyFn combine_glued(const PolyFn& m, const PolyFn& m1, const PolyFn& m2);

// Weighted interpolation with weight (1-|a|^2)^s:
//   h = sum_a lambda_a rho_a (1-|a|^2)^s k_a / (||k_a||_{p'} ||k_a||_r),
//   h(a) = lambda_a (1-|a|^2)^s ||k_a||_{r'},
// for exponents with 1/r = 1/p + 1/q.  The compensation factor
//   gamma_a = (1-|a|^2)^s ||k_a||_q / (||k_a||_{p'} ||k_a||_r)
// is exactly 1 by exponent algebra and is recomputed as a check.
// The splitting mu_a = lambda_a/|lambda_a|^alpha, nu_a = |lambda_a|^alpha,
// alpha = r/q satisfies ||mu||_p^p = ||nu||_q^q = ||lambda||_r^r.
struct WeightedReport {
  PolyFn h;
  std::vector<double> valueResiduals;
  std::vector<double> gammaCompensation;
  Eigen::VectorXcd mu;
  Eigen::VectorXd nu;
  double muNormP = 0.0;
  double nuNormQ = 0.0;
  double lambdaNormR = 0.0;
};

WeightedReport weighted_interp(const PointSeq& seq,
                               const std::vector<PolyFn>& dualSystem,
                               const Eigen::VectorXcd& lambda, double p,
                               double q, double r);

// Sign-randomization experiment.  For the family {f_1, ..., f_N}:
//   lhs  = (E || sum_j eps_j f_j ||^2)^{1/2},
//   rhs  = (sum_j ||f_j||^p)^{1/p},   ratio = lhs/rhs (empirical type bound).
// The expectation is exact enumeration of all 2^N sign patterns for N <= 12
// and Monte Carlo beyond.  The averaging inequality ||E(f)||^p <= E(||f||^p)
// is checked on the affine family f_eps = f_1 + sum_{j>=2} eps_j f_j.
struct TypeExperiment {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double avgLhs = 0.0;  // ||E f||^p
  double avgRhs = 0.0;  // E ||f||^p
  bool avgInequalityHolds = false;
  bool enumerated = false;
};

TypeExperiment rademacher_experiment(const std::vector<PolyFn>& family,
                                     const SpaceParams& params, int draws,
                                     uint64_t seed, const QuadratureSpec& quad);

// Biorthogonal system diagnostics: rho_a is the minimal-norm kernel-span
// interpolant of the targets delta_ab ||k_a||_{p'} proxy; maxDualNorm is
// max_a ||rho_a||_{H_s^p}.
struct DualBoundedReport {
  double maxDualNorm = 0.0;
  std::vector<double> perPoint;
  std::vector<PolyFn> rho;
};

DualBoundedReport dual_bounded_test(const PointSeq& seq,
                                    const SpaceParams& params, int degreeCap,
                                    const QuadratureSpec& quad);

}  // namespace hsball
