#include "hsball/moebius.hpp"

#include <cmath>

#include "hsball/kernels.hpp"

namespace hsball {

MoebiusMap MoebiusMap::make(Point mu, SpaceParams params) {
  if (mu.n() != params.n) {
    fail(ErrorKind::InvalidParams, "automorphism center dimension mismatch");
  }
  return MoebiusMap{std::move(mu), params};
}

Point apply_phi(const MoebiusMap& map, const Point& z) {
  const Point& mu = map.mu;
  const int n = mu.n();
  if (z.n() != n) fail(ErrorKind::InvalidParams, "dimension mismatch");
  const double mu2 = mu.norm2();
  if (mu2 == 0.0) {
    Point out = z;
    for (Complex& c : out.z) c = -c;
    return out;
  }
  const Complex w = herm_inner(z, mu);
  const double sMu = std::sqrt(1.0 - mu2);
  const Complex denom = Complex(1.0) - w;
  std::vector<Complex> coords(n);
  for (int t = 0; t < n; ++t) {
    const Complex proj = (w / mu2) * mu.z[t];
    const Complex rest = z.z[t] - proj;
    coords[t] = (mu.z[t] - proj - sMu * rest) / denom;
  }
  return Point::make(std::move(coords));
}

Complex eta(const MoebiusMap& map, const Point& a) {
  if (a.n() != map.mu.n()) {
    fail(ErrorKind::InvalidParams, "dimension mismatch");
  }
  const Complex w = Complex(1.0) - herm_inner(a, map.mu);
  const double rho = map.params.rho();
  return std::pow(w, rho) / std::pow(std::abs(w), rho);
}

AutomorphismChain AutomorphismChain::single(const MoebiusMap& map) {
  return AutomorphismChain{map.params, {map.mu}};
}

AutomorphismChain compose(const AutomorphismChain& outer,
                          const AutomorphismChain& inner) {
  if (outer.params.n != inner.params.n) {
    fail(ErrorKind::InvalidParams, "chain dimension mismatch");
  }
  AutomorphismChain out{inner.params, inner.factors};
  out.factors.insert(out.factors.end(), outer.factors.begin(),
                     outer.factors.end());
  return out;
}

Point apply(const AutomorphismChain& chain, const Point& z) {
  Point out = z;
  for (const Point& mu : chain.factors) {
    out = apply_phi(MoebiusMap{mu, chain.params}, out);
  }
  return out;
}

Complex eta(const AutomorphismChain& chain, const Point& a) {
  Complex out = 1.0;
  Point z = a;
  for (const Point& mu : chain.factors) {
    const MoebiusMap map{mu, chain.params};
    out *= eta(map, z);
    z = apply_phi(map, z);
  }
  return out;
}

namespace {

template <typename Mapper, typename Factor>
UnitaryCheck gram_check_impl(const PointSeq& seq, double rho, Mapper&& phi,
                             Factor&& etaAt) {
  const int N = static_cast<int>(seq.size());
  if (N == 0) fail(ErrorKind::InvalidParams, "unitary check needs points");
  std::vector<Point> mapped;
  std::vector<Complex> factors;
  mapped.reserve(N);
  factors.reserve(N);
  for (const Point& a : seq.points) {
    mapped.push_back(phi(a));
    factors.push_back(etaAt(a));
  }
  UnitaryCheck check;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const Complex lhs =
          factors[i] * std::conj(factors[j]) *
          normalized_kernel_inner(mapped[i], mapped[j], rho);
      const Complex rhs =
          normalized_kernel_inner(seq.points[i], seq.points[j], rho);
      check.maxResidual = std::max(check.maxResidual, std::abs(lhs - rhs));
    }
  }
  return check;
}

}  // namespace

UnitaryCheck unitary_gram_check(const MoebiusMap& map, const PointSeq& seq) {
  return gram_check_impl(
      seq, map.params.rho(), [&](const Point& a) { return apply_phi(map, a); },
      [&](const Point& a) { return eta(map, a); });
}

UnitaryCheck unitary_gram_check(const AutomorphismChain& chain,
                                const PointSeq& seq) {
  return gram_check_impl(
      seq, chain.params.rho(), [&](const Point& a) { return apply(chain, a); },
      [&](const Point& a) { return eta(chain, a); });
}

std::vector<PolyFn> phi_series(const MoebiusMap& map, int cap) {
  const Point& mu = map.mu;
  const int n = mu.n();
  const double mu2 = mu.norm2();
  std::vector<PolyFn> out;
  out.reserve(n);
  if (mu2 == 0.0) {
    for (int t = 0; t < n; ++t) {
      MultiIndex e(n, 0);
      e[t] = 1;
      out.push_back(PolyFn::monomial(n, cap, e, -1.0));
    }
    return out;
  }
  const double sMu = std::sqrt(1.0 - mu2);
  // w = <z, mu> as a linear form; the geometric series of 1/(1-w) truncated
  // at the cap is exact there because w has no constant term.
  PolyFn w = PolyFn::zero(n, cap);
  for (int t = 0; t < n; ++t) {
    MultiIndex e(n, 0);
    e[t] = 1;
    w.set_coeff(e, std::conj(mu.z[t]));
  }
  PolyFn geom = PolyFn::constant(n, cap, 1.0);
  PolyFn wPow = PolyFn::constant(n, cap, 1.0);
  for (int k = 1; k <= cap; ++k) {
    wPow = wPow.mul(w);
    geom = geom.add(wPow);
  }
  for (int t = 0; t < n; ++t) {
    PolyFn numer = PolyFn::constant(n, cap, mu.z[t]);
    numer = numer.sub(w.scale(mu.z[t] / mu2));  // P_mu z component
    MultiIndex e(n, 0);
    e[t] = 1;
    PolyFn rest = PolyFn::monomial(n, cap, e, 1.0);
    rest = rest.sub(w.scale(mu.z[t] / mu2));
    numer = numer.sub(rest.scale(sMu));
    PolyFn series = numer.mul(geom);
    series.set_truncated(true);
    out.push_back(std::move(series));
  }
  return out;
}

PolyFn compose_with_phi(const PolyFn& m, const MoebiusMap& map, bool strict) {
  const std::vector<PolyFn> phi = phi_series(map, m.cap());
  return m.compose(phi, strict);
}

}  // namespace hsball
