#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hsball/boundary.hpp"
#include "hsball/params.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

enum class KernelConvention { Model, Exact };

// Reproducing kernel at a center a, truncated to the degree cap.
//
//   Model:  k_a(z) = (1 - <z,a>)^{-rho}, rho = n - 2s, via the binomial
//           series; coefficient at z^alpha is rising(rho,|alpha|) conj(a)^alpha / alpha!.
//   Exact:  coefficient conj(a)^alpha / ((1+|alpha|)^{2s} w_alpha), the
//           diagonal kernel that reproduces hs2_inner exactly on degree <= cap.
struct KernelFn {
  Point center;
  SpaceParams params;
  KernelConvention convention;
  PolyFn truncation;
};

KernelFn kernel(const Point& center, const SpaceParams& params,
                KernelConvention convention, int degreeCap);

// Canonical representative of the kernel norm: (1-|a|^2)^{s - n/q'}.
double kernel_norm_proxy(const Point& center, const SpaceParams& params,
                         double q);

struct GramMatrix {
  Eigen::MatrixXcd entries;  // G(i,j) = K(a_i, a_j)
  KernelConvention convention;
  SpaceParams params;
};

// Model: closed form G(i,j) = (1 - <a_i, a_j>)^{-rho}.
// Exact: hs2_inner of the truncated kernels (degreeCap).
// Rejects condition numbers above 1e12 (SingularGram).
GramMatrix gram(const PointSeq& seq, KernelConvention convention,
                int degreeCap = 12);

// Boundary point (norm 1 within 1e-12).
struct BoundaryPoint {
  std::vector<Complex> z;
  static BoundaryPoint make(std::vector<Complex> coords);
};

// Non-isotropic boundary neighborhood Q(zeta, h) = {z : |1 - <z, zeta>| < h}.
struct PseudoBall {
  BoundaryPoint zeta;
  double h = 0.0;
};

struct CarlesonReport {
  double supRatio = 0.0;
  PseudoBall argmaxBox;
  long boxesTested = 0;
  double exponent = 0.0;  // n - sp
  bool exponentDegenerate = false;
};

// Box family swept by carleson_box_sup.  Per-point boxes are centered at
// a/|a| with radii c (1-|a|^2) (the one-point convention h = 1-|a|^2 makes
// the single-point ratio exactly 1); a fixed boundary grid at three dyadic
// radii is added.  The family is a documented witness set, so the result is
// a lower bound for the true sup.
struct BoxStrategy {
  std::vector<double> pointRadiusFactors{1.0, 2.0, 4.0, 8.0};
  int gridCount = 64;
  std::vector<double> gridRadii{0.5, 0.25, 0.125};
  uint64_t gridSeed = 7;
};

// sup over tested boxes of nu_S(Q)/h^{n-sp} with the sequence measure
// nu_S = sum_a (1-|a|^2)^{n-sp} delta_a.  Exponent may be overridden to
// test a different smoothness on the same box family.
CarlesonReport carleson_box_sup(const PointSeq& seq, const SpaceParams& params,
                                const BoxStrategy& strategy = {});
CarlesonReport carleson_box_sup_exponent(const PointSeq& seq, double exponent,
                                         const BoxStrategy& strategy = {});

// Full sweep record, one row per tested box.
struct BoxRecord {
  PseudoBall box;
  double mass = 0.0;
  double ratio = 0.0;
};

std::vector<BoxRecord> carleson_box_sweep(const PointSeq& seq, double exponent,
                                          const BoxStrategy& strategy = {});

// Pseudo-hyperbolic distance |phi_a(b)| from the two-point identity
// 1 - |phi_a(b)|^2 = (1-|a|^2)(1-|b|^2)/|1 - <b,a>|^2.
double pseudo_hyperbolic(const Point& a, const Point& b);

struct SeparationStats {
  double minPseudoHyperbolic = 0.0;
  Eigen::MatrixXd pairMatrix;
};

SeparationStats separation_stats(const PointSeq& seq);

// Frame bounds of the normalized kernels e_a = k_a/||k_a||: the extreme
// eigenvalues of the normalized Gram matrix.  Hilbert case p = 2 only.
struct RieszBounds {
  double lower = 0.0;
  double upper = 0.0;
};

RieszBounds riesz_bounds(const PointSeq& seq, const SpaceParams& params);

// Normalized model Gram entry <e_a, e_b> in closed form.
Complex normalized_kernel_inner(const Point& a, const Point& b, double rho);

}  // namespace hsball
