#include "hsball/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "hsball/rng.hpp"

namespace hsball {

namespace {

// d! / alpha! as a product of binomial coefficients; exact in double for
// every size reachable under the degree caps used here.
double multinomial(const MultiIndex& alpha) {
  double out = 1.0;
  int partial = 0;
  for (int a : alpha) {
    partial += a;
    out *= binomial(partial, a);
  }
  return out;
}

struct McAccumulator {
  double sum = 0.0;
  double sumSq = 0.0;
  long count = 0;

  void add(double x) {
    sum += x;
    sumSq += x * x;
    ++count;
  }

  double mean() const { return count > 0 ? sum / count : 0.0; }

  double stderrOfMean() const {
    if (count < 2) return 0.0;
    const double m = mean();
    double var = (sumSq / count - m * m) * (double(count) / (count - 1));
    var = std::max(var, 0.0);
    return std::sqrt(var / count);
  }
};

void check_quad(const QuadratureSpec& quad) {
  if (quad.sampleCount < 1000) {
    fail(ErrorKind::InvalidParams, "Monte Carlo needs at least 1000 samples");
  }
  if (quad.chunkSize < 1) {
    fail(ErrorKind::InvalidParams, "chunk size must be >= 1");
  }
}

// Runs the chunked fixed-order reduction over sphere samples.  The chunk
// boundaries pin the summation order independently of call-site batching.
template <typename Fn>
McAccumulator mc_sphere_reduce(int n, const QuadratureSpec& quad, Fn&& value) {
  check_quad(quad);
  Rng rng(quad.seed);
  McAccumulator total;
  long remaining = quad.sampleCount;
  while (remaining > 0) {
    const long take = std::min<long>(remaining, quad.chunkSize);
    McAccumulator chunk;
    for (long i = 0; i < take; ++i) {
      chunk.add(value(sphere_point(rng, n)));
    }
    total.sum += chunk.sum;
    total.sumSq += chunk.sumSq;
    total.count += chunk.count;
    remaining -= take;
  }
  return total;
}

}  // namespace

double monomial_moment(const MultiIndex& alpha, const MultiIndex& beta,
                       int n) {
  if (static_cast<int>(alpha.size()) != n ||
      static_cast<int>(beta.size()) != n) {
    fail(ErrorKind::InvalidParams, "multi-index length does not match n");
  }
  if (alpha != beta) return 0.0;
  return monomial_weight(alpha, n);
}

double monomial_weight(const MultiIndex& alpha, int n) {
  if (static_cast<int>(alpha.size()) != n) {
    fail(ErrorKind::InvalidParams, "multi-index length does not match n");
  }
  const int d = mi_degree(alpha);
  // (n-1)! alpha! / (n-1+d)! = 1 / (C(n-1+d, n-1) * (d! / alpha!)).
  return 1.0 / (binomial(n - 1 + d, n - 1) * multinomial(alpha));
}

double hs2_weight(const MultiIndex& alpha, const SpaceParams& params) {
  const double shift = std::pow(1.0 + mi_degree(alpha), 2.0 * params.s);
  return shift * monomial_weight(alpha, params.n);
}

Complex hs2_inner(const PolyFn& f, const PolyFn& g,
                  const SpaceParams& params) {
  if (f.n() != params.n || g.n() != params.n) {
    fail(ErrorKind::InvalidParams, "function dimension does not match params");
  }
  Complex out = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    const Complex cg = g.coeff(alpha);
    if (cg == Complex(0.0)) continue;
    out += hs2_weight(alpha, params) * c * std::conj(cg);
  }
  return out;
}

double hp_norm_exact2(const PolyFn& f) {
  double out = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    out += monomial_weight(alpha, f.n()) * std::norm(c);
  }
  return std::sqrt(out);
}

NormReport hp_norm_mc(const PolyFn& f, double p, const QuadratureSpec& quad) {
  if (!(p >= 1.0)) fail(ErrorKind::InvalidParams, "H^p norm needs p >= 1");
  NormReport report;
  report.mode = QuadMode::MonteCarlo;
  if (std::isinf(p)) {
    double sup = 0.0;
    mc_sphere_reduce(f.n(), quad, [&](const std::vector<Complex>& zeta) {
      sup = std::max(sup, std::abs(f.eval(zeta)));
      return 0.0;
    });
    report.value = sup;
    report.stderrEst = 0.0;
    return report;
  }
  const McAccumulator acc =
      mc_sphere_reduce(f.n(), quad, [&](const std::vector<Complex>& zeta) {
        return std::pow(std::abs(f.eval(zeta)), p);
      });
  const double mean = acc.mean();
  const double se = acc.stderrOfMean();
  if (mean > 0.0 && quad.relStderrTol > 0.0 && se / mean > quad.relStderrTol) {
    fail(ErrorKind::QuadratureUnderResolved,
         "relative stderr " + std::to_string(se / mean) +
             " exceeds tolerance " + std::to_string(quad.relStderrTol));
  }
  report.value = std::pow(mean, 1.0 / p);
  // Delta method: d/dm m^(1/p) = m^(1/p-1)/p.
  report.stderrEst =
      mean > 0.0 ? se * std::pow(mean, 1.0 / p - 1.0) / p : 0.0;
  return report;
}

NormReport hsp_norm(const PolyFn& f, const SpaceParams& params,
                    const QuadratureSpec& quad, NormFlavor flavor) {
  if (f.n() != params.n) {
    fail(ErrorKind::InvalidParams, "function dimension does not match params");
  }
  const bool exact = quad.mode == QuadMode::ExactMoments;
  if (exact && params.p != 2.0) {
    fail(ErrorKind::InvalidParams, "exact moments need p = 2; use MonteCarlo");
  }
  auto hpNorm = [&](const PolyFn& g) -> NormReport {
    if (exact) {
      NormReport r;
      r.value = hp_norm_exact2(g);
      r.stderrEst = 0.0;
      r.mode = QuadMode::ExactMoments;
      return r;
    }
    return hp_norm_mc(g, params.p, quad);
  };
  if (flavor == NormFlavor::FractionalShift) {
    NormReport report = hpNorm(f.bracket_shift(params.s));
    report.mode = quad.mode;
    return report;
  }
  const double sRounded = std::round(params.s);
  if (std::abs(params.s - sRounded) > 1e-12 || sRounded < 0.0) {
    fail(ErrorKind::InvalidParams,
         "max-over-derivatives flavor needs integer s >= 0");
  }
  const int order = static_cast<int>(sRounded);
  NormReport report;
  report.mode = quad.mode;
  report.value = 0.0;
  report.stderrEst = 0.0;
  for (int j = 0; j <= order; ++j) {
    const NormReport piece = hpNorm(f.radial_derivative(j));
    report.perJ.push_back(piece.value);
    if (piece.value > report.value) {
      report.value = piece.value;
      report.stderrEst = piece.stderrEst;
    }
  }
  return report;
}

MomentEstimate monomial_moment_mc(const MultiIndex& alpha,
                                  const MultiIndex& beta, int n,
                                  const QuadratureSpec& quad) {
  if (static_cast<int>(alpha.size()) != n ||
      static_cast<int>(beta.size()) != n) {
    fail(ErrorKind::InvalidParams, "multi-index length does not match n");
  }
  McAccumulator im;
  const McAccumulator re =
      mc_sphere_reduce(n, quad, [&](const std::vector<Complex>& zeta) {
        Complex term = 1.0;
        for (int t = 0; t < n; ++t) {
          for (int e = 0; e < alpha[t]; ++e) term *= zeta[t];
          for (int e = 0; e < beta[t]; ++e) term *= std::conj(zeta[t]);
        }
        im.add(term.imag());
        return term.real();
      });
  const double se = std::hypot(re.stderrOfMean(), im.stderrOfMean());
  return MomentEstimate{Complex(re.mean(), im.mean()), se};
}

}  // namespace hsball
