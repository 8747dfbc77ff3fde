#include "hsball/dual_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hsball/boundary.hpp"
#include "hsball/kernels.hpp"
#include "hsball/rng.hpp"

namespace hsball {

namespace {

int group_index(int g, int N) {
  int m = ((g % N) + N) % N;  // 0 maps to the j = N member
  return m == 0 ? N - 1 : m - 1;
}

double sampled_sup(const PolyFn& f, int n, int samples, uint64_t seed) {
  Rng rng(seed);
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    sup = std::max(sup, std::abs(f.eval(ball_point(rng, n))));
  }
  return sup;
}

}  // namespace

const PolyFn& DualSystem::beta_group(int g) const {
  return beta[group_index(g, N)];
}

const PolyFn& DualSystem::gamma_group(int g) const {
  return gamma[group_index(g, N)];
}

DualSystem build_beta(const PointSeq& seq, const SpaceParams& params,
                      int degreeCap, uint64_t seed) {
  const int N = static_cast<int>(seq.size());
  if (N == 0) fail(ErrorKind::InvalidParams, "dual system needs points");
  DualSystem sys;
  sys.seq = seq;
  sys.params = params;
  sys.N = N;
  sys.degreeCap = degreeCap;
  sys.theta = std::exp(Complex(0.0, 2.0 * std::numbers::pi / N));

  const bool pickRegime =
      params.p == 2.0 && params.rho() <= 1.0 + 1e-12;
  QuadratureSpec quad;
  quad.mode = params.p == 2.0 ? QuadMode::ExactMoments : QuadMode::MonteCarlo;
  quad.sampleCount = 20000;
  quad.seed = seed;

  for (int j = 1; j <= N; ++j) {
    Eigen::VectorXcd values(N);
    for (int k = 1; k <= N; ++k) {
      values(k - 1) = std::pow(sys.theta, static_cast<double>(j) * k);
    }
    PolyFn betaJ = PolyFn::zero(params.n, degreeCap);
    if (N == 1) {
      // The constant is the minimal multiplier realization of a single value.
      betaJ = PolyFn::constant(params.n, degreeCap, values(0));
    } else {
      const MinNormInterpolant interp = min_norm_interpolant(
          seq, values, KernelConvention::Model, degreeCap);
      betaJ = interp.g;
    }
    for (int k = 0; k < N; ++k) {
      sys.maxCharacterResidual =
          std::max(sys.maxCharacterResidual,
                   std::abs(betaJ.eval(seq.points[k]) - values(k)));
    }
    const MultiplierEstimate est =
        multiplier_norm_estimate(betaJ, params, degreeCap, quad, seed + j);
    double cj = std::max(est.samplingLower,
                         sampled_sup(betaJ, params.n, 200, seed + 31 * j));
    if (std::isfinite(est.galerkinUpper)) {
      cj = std::max(cj, est.galerkinUpper);
    }
    sys.C_estimate = std::max(sys.C_estimate, cj);
    if (pickRegime) {
      sys.pickCertificate = std::max(
          sys.pickCertificate, pick_min_norm(seq, values, params).tMin);
    }
    sys.beta.push_back(std::move(betaJ));
  }
  gamma_dft(sys);
  return sys;
}

void gamma_dft(DualSystem& sys) {
  const int N = sys.N;
  sys.gamma.clear();
  for (int l = 1; l <= N; ++l) {
    PolyFn gammaL = PolyFn::zero(sys.params.n, sys.degreeCap);
    for (int j = 1; j <= N; ++j) {
      const Complex w =
          std::pow(sys.theta, -static_cast<double>(j) * l) / double(N);
      gammaL = gammaL.add(sys.beta[j - 1].scale(w));
    }
    sys.gamma.push_back(std::move(gammaL));
  }
}

const std::vector<PolyFn>& convolution_power(DualSystem& sys, int l,
                                             bool strict) {
  if (l < 1) fail(ErrorKind::InvalidParams, "convolution power needs l >= 1");
  if (sys.beta.empty()) {
    fail(ErrorKind::InvalidParams, "dual system has no beta functions");
  }
  if (auto it = sys.Q.find(l); it != sys.Q.end()) return it->second;
  const int N = sys.N;
  if (l == 1) {
    std::vector<PolyFn> q1;
    q1.reserve(N);
    for (int g = 0; g < N; ++g) q1.push_back(sys.beta_group(g));
    return sys.Q.emplace(1, std::move(q1)).first->second;
  }
  const std::vector<PolyFn>& prev = convolution_power(sys, l - 1, strict);
  std::vector<PolyFn> next;
  next.reserve(N);
  for (int k = 0; k < N; ++k) {
    PolyFn acc = PolyFn::zero(sys.params.n, sys.degreeCap);
    for (int j = 0; j < N; ++j) {
      // prev is group-indexed by array position, so the convolution shift
      // is a plain modulus; group_index would displace it by one per level.
      const int shift = ((k - j) % N + N) % N;
      acc = acc.add(sys.beta_group(j).mul(prev[shift], strict));
    }
    next.push_back(acc.scale(1.0 / N));
  }
  return sys.Q.emplace(l, std::move(next)).first->second;
}

Ha0Report ha0_bound_check(const DualSystem& sys, int l, int zSamples,
                          uint64_t seed) {
  if (l < 1) fail(ErrorKind::InvalidParams, "bound check needs l >= 1");
  if (sys.gamma.empty()) {
    fail(ErrorKind::InvalidParams, "dual system has no gamma functions");
  }
  Ha0Report report;
  Rng rng(seed);
  for (int i = 0; i < zSamples; ++i) {
    const Point z = ball_point(rng, sys.params.n);
    double sum = 0.0;
    for (const PolyFn& g : sys.gamma) {
      sum += std::pow(std::norm(g.eval(z)), l);
    }
    report.maxSum = std::max(report.maxSum, sum);
  }
  report.bound = std::pow(sys.C_estimate, 2.0 * l);
  report.pass = report.maxSum <= report.bound * 1.05;
  return report;
}

DominationReport domination_split(DualSystem& sys, const PolyFn& h, int l,
                                  int j, int zSamples, uint64_t seed) {
  if (j < 0) fail(ErrorKind::InvalidParams, "derivative order must be >= 0");
  const std::vector<PolyFn>& Q = convolution_power(sys, l);
  DominationReport report;
  report.H.reserve(sys.N);
  for (const PolyFn& q : Q) report.H.push_back(q.mul(h));
  std::vector<PolyFn> rhsDeriv;
  rhsDeriv.reserve(sys.N);
  for (const PolyFn& H : report.H) {
    rhsDeriv.push_back(H.radial_derivative(j));
  }
  std::vector<PolyFn> lhsDeriv;
  lhsDeriv.reserve(sys.N);
  for (const PolyFn& g : sys.gamma) {
    lhsDeriv.push_back(g.pow(l).mul(h).radial_derivative(j));
  }
  Rng rng(seed);
  report.minSlack = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (int i = 0; i < zSamples; ++i) {
    const Point z = ball_point(rng, sys.params.n);
    double rhs = 0.0;
    for (const PolyFn& d : rhsDeriv) rhs += std::abs(d.eval(z));
    rhs /= sys.N;
    scale = std::max(scale, rhs);
    for (const PolyFn& d : lhsDeriv) {
      report.minSlack = std::min(report.minSlack, rhs - std::abs(d.eval(z)));
    }
  }
  report.pass = report.minSlack >= -1e-12 * scale;
  return report;
}

}  // namespace hsball
