#pragma once

#include <vector>

#include "hsball/params.hpp"
#include "hsball/polyfn.hpp"

namespace hsball {

// The involutive automorphism of the ball exchanging mu and 0, realized by
// the orthogonal-projection formula
//   phi_mu(z) = (mu - P_mu z - s_mu Q_mu z) / (1 - <z, mu>),
// s_mu = sqrt(1-|mu|^2); for n = 1 it reduces to (mu - z)/(1 - conj(mu) z).
// Pinned by the exchange properties, the involution, and the two-point
// identity tested in the suite.
struct MoebiusMap {
  Point mu;
  SpaceParams params;

  static MoebiusMap make(Point mu, SpaceParams params);
};

Point apply_phi(const MoebiusMap& map, const Point& z);

// Unimodular automorphy factor eta(phi_mu, a) = (1 - <a,mu>)^rho / |1 - <a,mu>|^rho.
Complex eta(const MoebiusMap& map, const Point& a);

// Composition chain psi_k o ... o psi_1 of exchange maps.  The factor of a
// chain is the product of the factors along the chained points, which makes
// the chain rule hold by construction; the unitary Gram check below is the
// non-trivial identity.
struct AutomorphismChain {
  SpaceParams params;
  std::vector<Point> factors;  // applied right to left: factors[0] first

  static AutomorphismChain single(const MoebiusMap& map);
};

AutomorphismChain compose(const AutomorphismChain& outer,
                          const AutomorphismChain& inner);
Point apply(const AutomorphismChain& chain, const Point& z);
Complex eta(const AutomorphismChain& chain, const Point& a);

// max over pairs of | eta(a) conj(eta(b)) <e_{phi a}, e_{phi b}> - <e_a, e_b> |
// with the closed-form normalized model Gram.  The identity is exact
// analytically, so the residual is pure floating-point error.
struct UnitaryCheck {
  double maxResidual = 0.0;
};

UnitaryCheck unitary_gram_check(const MoebiusMap& map, const PointSeq& seq);
UnitaryCheck unitary_gram_check(const AutomorphismChain& chain,
                                const PointSeq& seq);

// Power series of the coordinates of phi_mu in the quotient ring: the
// denominator has constant term 1, so the series is exact up to the cap.
std::vector<PolyFn> phi_series(const MoebiusMap& map, int cap);

// m o phi_mu computed by composition in the quotient ring (exact up to the
// cap; the dropped tail is the documented approximation).
PolyFn compose_with_phi(const PolyFn& m, const MoebiusMap& map,
                        bool strict = false);

}  // namespace hsball
