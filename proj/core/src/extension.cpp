#include "hsball/extension.hpp"

#include <algorithm>
#include <cmath>

#include "hsball/kernels.hpp"
#include "hsball/pick.hpp"
#include "hsball/rng.hpp"

namespace hsball {

int RademacherDraw::sign(uint64_t seed, uint64_t drawIndex,
                         uint64_t labelIndex) {
  uint64_t state = seed;
  state ^= splitmix64_next(state) + 0x9E3779B97F4A7C15ULL * (drawIndex + 1);
  state ^= splitmix64_next(state) + 0xBF58476D1CE4E5B9ULL * (labelIndex + 1);
  const uint64_t bit = splitmix64_next(state) >> 63;
  return bit ? 1 : -1;
}

ExtensionReport linear_extension(DualSystem& sys,
                                 const Eigen::VectorXcd& lambda, int l,
                                 const QuadratureSpec& quad) {
  const SpaceParams& params = sys.params;
  if (lambda.size() != sys.N) {
    fail(ErrorKind::InvalidParams, "lambda length does not match points");
  }
  if (l == 0) l = static_cast<int>(std::floor(params.s)) + 1;
  if (!(l > params.s)) {
    fail(ErrorKind::InvalidParams, "extension power l must exceed s");
  }
  ExtensionReport report;
  report.l = l;
  PolyFn f = PolyFn::zero(params.n, sys.degreeCap);
  for (int i = 0; i < sys.N; ++i) {
    if (lambda(i) == Complex(0.0)) continue;
    const Point& a = sys.seq.points[i];
    const PolyFn k =
        kernel(a, params, KernelConvention::Model, sys.degreeCap).truncation;
    const double proxyP = kernel_norm_proxy(a, params, params.p);
    const PolyFn e = k.scale(1.0 / proxyP);
    f = f.add(sys.gamma[i].pow(l).mul(e).scale(lambda(i)));
  }
  report.f = f;
  double lambdaNorm = 0.0;
  for (int i = 0; i < sys.N; ++i) {
    const Point& a = sys.seq.points[i];
    const double proxyPPrime =
        kernel_norm_proxy(a, params, params.pPrime());
    const Complex target = lambda(i) * proxyPPrime;
    report.valueResiduals.push_back(std::abs(f.eval(a) - target));
    lambdaNorm += std::pow(std::abs(lambda(i)), params.p);
  }
  lambdaNorm = std::pow(lambdaNorm, 1.0 / params.p);
  if (lambdaNorm > 0.0) {
    report.normRatio = hsp_norm(f, params, quad).value / lambdaNorm;
  }
  return report;
}

GlueReport glue_union(DualSystem& sys1, DualSystem& sys2,
                      const std::map<std::pair<int, int>, PolyFn>& witnesses,
                      int l) {
  if (sys1.params.n != sys2.params.n) {
    fail(ErrorKind::InvalidParams, "glued systems must share dimension");
  }
  const int n = sys1.params.n;
  const int cap = sys1.degreeCap;
  GlueReport report;
  PolyFn m = PolyFn::zero(n, cap);
  for (int b = 0; b < sys2.N; ++b) {
    PolyFn mb = PolyFn::zero(n, cap);
    for (int a = 0; a < sys1.N; ++a) {
      const auto it = witnesses.find({a, b});
      if (it == witnesses.end()) {
        fail(ErrorKind::InvalidParams, "missing witness for a pair");
      }
      mb = mb.add(sys1.gamma[a].pow(l).mul(it->second));
    }
    const PolyFn oneMinus = PolyFn::constant(n, cap, 1.0).sub(mb);
    m = m.add(sys2.gamma[b].pow(l).mul(oneMinus));
  }
  report.m = m;
  for (int a = 0; a < sys1.N; ++a) {
    report.residualsS1.push_back(std::abs(m.eval(sys1.seq.points[a])));
  }
  for (int b = 0; b < sys2.N; ++b) {
    report.residualsS2.push_back(
        std::abs(m.eval(sys2.seq.points[b]) - Complex(1.0)));
  }
  return report;
}

PolyFn combine_glued(const PolyFn& m, const PolyFn& m1, const PolyFn& m2) {
  const PolyFn oneMinus =
      PolyFn::constant(m.n(), m.cap(), 1.0).sub(m);
  return oneMinus.mul(m1).add(m.mul(m2));
}

WeightedReport weighted_interp(const PointSeq& seq,
                               const std::vector<PolyFn>& dualSystem,
                               const Eigen::VectorXcd& lambda, double p,
                               double q, double r) {
  const SpaceParams& params = seq.params;
  const int N = static_cast<int>(seq.size());
  if (static_cast<int>(dualSystem.size()) != N || lambda.size() != N) {
    fail(ErrorKind::InvalidParams, "system and lambda must match points");
  }
  if (!(p >= 1.0) || !(q >= 1.0) || !(r >= 1.0)) {
    fail(ErrorKind::InvalidParams, "exponents must be >= 1");
  }
  if (std::abs(1.0 / r - 1.0 / p - 1.0 / q) > 1e-12) {
    fail(ErrorKind::InvalidParams, "exponents must satisfy 1/r = 1/p + 1/q");
  }
  WeightedReport report;
  const int cap = dualSystem.empty() ? 12 : dualSystem[0].cap();
  PolyFn h = PolyFn::zero(params.n, cap);
  for (int i = 0; i < N; ++i) {
    if (lambda(i) == Complex(0.0)) continue;
    const Point& a = seq.points[i];
    const PolyFn k =
        kernel(a, params, KernelConvention::Model, cap).truncation;
    const double weight = std::pow(1.0 - a.norm2(), params.s);
    const double denom = kernel_norm_proxy(a, params, conjugate_exponent(p)) *
                         kernel_norm_proxy(a, params, r);
    h = h.add(dualSystem[i].mul(k).scale(lambda(i) * weight / denom));
  }
  report.h = h;
  report.mu.resize(N);
  report.nu.resize(N);
  const double alpha = r / q;
  double muP = 0.0, nuQ = 0.0, lamR = 0.0;
  for (int i = 0; i < N; ++i) {
    const Point& a = seq.points[i];
    const double weight = std::pow(1.0 - a.norm2(), params.s);
    const double proxyRPrime =
        kernel_norm_proxy(a, params, conjugate_exponent(r));
    const Complex target = lambda(i) * weight * proxyRPrime;
    report.valueResiduals.push_back(std::abs(h.eval(a) - target));
    const double gammaA =
        weight * kernel_norm_proxy(a, params, q) /
        (kernel_norm_proxy(a, params, conjugate_exponent(p)) *
         kernel_norm_proxy(a, params, r));
    report.gammaCompensation.push_back(gammaA);
    const double mod = std::abs(lambda(i));
    if (mod > 0.0) {
      report.mu(i) = lambda(i) / std::pow(mod, alpha);
      report.nu(i) = std::pow(mod, alpha);
    } else {
      report.mu(i) = 0.0;
      report.nu(i) = 0.0;
    }
    muP += std::pow(std::abs(report.mu(i)), p);
    nuQ += std::pow(report.nu(i), q);
    lamR += std::pow(mod, r);
  }
  report.muNormP = std::pow(muP, 1.0 / p);
  report.nuNormQ = std::pow(nuQ, 1.0 / q);
  report.lambdaNormR = std::pow(lamR, 1.0 / r);
  return report;
}

TypeExperiment rademacher_experiment(const std::vector<PolyFn>& family,
                                     const SpaceParams& params, int draws,
                                     uint64_t seed,
                                     const QuadratureSpec& quad) {
  const int N = static_cast<int>(family.size());
  if (N == 0) fail(ErrorKind::InvalidParams, "empty function family");
  for (const PolyFn& f : family) {
    if (f.n() != params.n || f.cap() != family[0].cap()) {
      fail(ErrorKind::InvalidParams, "family must share dimension and cap");
    }
  }
  TypeExperiment out;
  out.enumerated = N <= 12;
  const long drawTotal = out.enumerated ? (1L << N) : draws;
  if (drawTotal <= 0) fail(ErrorKind::InvalidParams, "draws must be > 0");

  auto norm = [&](const PolyFn& f) {
    return hsp_norm(f, params, quad).value;
  };
  double sumSq = 0.0;       // accumulates ||sum eps_j f_j||^2
  double sumAffineP = 0.0;  // accumulates ||f_1 + sum_{j>=2} eps_j f_j||^p
  PolyFn affineMean = PolyFn::zero(params.n, family[0].cap());
  for (long d = 0; d < drawTotal; ++d) {
    PolyFn signedSum = PolyFn::zero(params.n, family[0].cap());
    PolyFn affine = family[0];
    for (int j = 0; j < N; ++j) {
      int s;
      if (out.enumerated) {
        s = (d >> j) & 1 ? 1 : -1;
      } else {
        s = RademacherDraw::sign(seed, static_cast<uint64_t>(d),
                                 static_cast<uint64_t>(j));
      }
      signedSum = signedSum.add(family[j].scale(double(s)));
      if (j >= 1) affine = affine.add(family[j].scale(double(s)));
    }
    const double ns = norm(signedSum);
    sumSq += ns * ns;
    sumAffineP += std::pow(norm(affine), params.p);
    affineMean = affineMean.add(affine);
  }
  affineMean = affineMean.scale(1.0 / double(drawTotal));
  out.lhs = std::sqrt(sumSq / double(drawTotal));
  double rhs = 0.0;
  for (const PolyFn& f : family) rhs += std::pow(norm(f), params.p);
  out.rhs = std::pow(rhs, 1.0 / params.p);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  out.avgLhs = std::pow(norm(affineMean), params.p);
  out.avgRhs = sumAffineP / double(drawTotal);
  out.avgInequalityHolds = out.avgLhs <= out.avgRhs * 1.02;
  return out;
}

DualBoundedReport dual_bounded_test(const PointSeq& seq,
                                    const SpaceParams& params, int degreeCap,
                                    const QuadratureSpec& quad) {
  const int N = static_cast<int>(seq.size());
  if (N == 0) fail(ErrorKind::InvalidParams, "dual bounded test needs points");
  DualBoundedReport report;
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXcd values = Eigen::VectorXcd::Zero(N);
    values(i) =
        kernel_norm_proxy(seq.points[i], params, params.pPrime());
    const MinNormInterpolant interp = min_norm_interpolant(
        seq, values, KernelConvention::Model, degreeCap);
    const double norm = hsp_norm(interp.g, params, quad).value;
    report.perPoint.push_back(norm);
    report.maxDualNorm = std::max(report.maxDualNorm, norm);
    report.rho.push_back(interp.g);
  }
  return report;
}

}  // namespace hsball
