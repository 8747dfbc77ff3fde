#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hsball/params.hpp"
#include "hsball/rng.hpp"
#include "test_support.hpp"

using namespace hsball;
using testsupport::close_abs;

TEST_CASE("conjugate exponent pairs") {
  CHECK(conjugate_exponent(2.0) == 2.0);
  CHECK(close_abs(conjugate_exponent(4.0), 4.0 / 3.0, 1e-15));
  CHECK(std::isinf(conjugate_exponent(1.0)));
  CHECK(conjugate_exponent(kInfExponent) == 1.0);
}

TEST_CASE("exponent table for (2, 0, 2)") {
  const auto params = SpaceParams::make(2, 0.0, 2.0);
  const Exponents e = derive_exponents(params);
  CHECK(e.pPrime == 2.0);
  CHECK(e.rho == 2.0);
  CHECK(close_abs(e.kernelNormExp_p, -1.0, 1e-15));
}

TEST_CASE("exponent table for (4, 1, 2)") {
  const auto params = SpaceParams::make(4, 1.0, 2.0);
  const Exponents e = derive_exponents(params);
  CHECK(close_abs(e.rho, 2.0, 1e-15));
  CHECK(close_abs(e.kernelNormExp_pPrime, -1.0, 1e-15));
}

TEST_CASE("log kernel case is rejected") {
  CHECK_THROWS_AS(SpaceParams::make(2, 1.0, 2.0), ToolkitError);
  try {
    SpaceParams::make(1, 0.5, 2.0);
    CHECK(false);
  } catch (const ToolkitError& e) {
    CHECK(e.kind() == ErrorKind::LogKernelCase);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SpaceParams::make(0, 0.0, 2.0), ToolkitError);
  CHECK_THROWS_AS(SpaceParams::make(1, -0.5, 2.0), ToolkitError);
  CHECK_THROWS_AS(SpaceParams::make(1, 0.0, 0.5), ToolkitError);
  // Soft bound s <= n/p: rejected without the override, admitted with it.
  CHECK_THROWS_AS(SpaceParams::make(1, 1.0, 2.0), ToolkitError);
  const auto overridden = SpaceParams::make(1, 1.0, 2.0, true);
  CHECK(overridden.spBoundViolated());
  CHECK_FALSE(SpaceParams::make(2, 0.5, 2.0).spBoundViolated());
}

TEST_CASE("p = 1 conjugate is the infinity marker") {
  const auto params = SpaceParams::make(2, 0.5, 1.0);
  CHECK(std::isinf(params.pPrime()));
  CHECK(close_abs(params.kernelExp(1.0), params.s, 1e-15));
  CHECK(close_abs(params.kernelExp(kInfExponent), params.s - params.n, 1e-15));
}

TEST_CASE("sobolev embedding exponent") {
  CHECK(close_abs(sobolev_embedding_q(SpaceParams::make(4, 1.0, 2.0)), 4.0,
                  1e-15));
  CHECK(close_abs(sobolev_embedding_q(SpaceParams::make(2, 0.0, 3.0)), 3.0,
                  1e-15));
  // sp = n boundary (struct-built; make() already rejects s = n/2).
  const SpaceParams boundary{2, 1.0, 2.0, false};
  CHECK_THROWS_AS(sobolev_embedding_q(boundary), ToolkitError);
}

TEST_CASE("kernel exponent identities over random parameters") {
  Rng rng(321);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 4);
    const double p = rng.uniform(1.0, 6.0);
    double s = rng.uniform(0.0, n / p);
    if (std::abs(s - 0.5 * n) < 1e-6) s *= 0.9;
    const auto params = SpaceParams::make(n, s, p);
    // 2 kernelExp(2) = 2s - n.
    CHECK(close_abs(2.0 * params.kernelExp(2.0), 2.0 * s - n, 1e-12));
    // -n/q = s - n/p for the embedding exponent q.
    if (s * p < n - 1e-9) {
      const double q = sobolev_embedding_q(params);
      CHECK(close_abs(-params.n / q, s - params.n / p, 1e-12));
    }
  }
}

TEST_CASE("points must lie inside the open ball") {
  CHECK_THROWS_AS(Point::make({Complex(1.0, 0.0)}), ToolkitError);
  CHECK_THROWS_AS(Point::make({Complex(0.8, 0.0), Complex(0.0, 0.7)}),
                  ToolkitError);
  const Point ok = Point::make({Complex(0.3, 0.4)});
  CHECK(close_abs(ok.norm(), 0.5, 1e-15));
}

TEST_CASE("point sequences require distinct points") {
  const auto params = SpaceParams::make(1, 0.0, 2.0);
  const Point origin = Point::make({Complex(0.0, 0.0)});
  CHECK_THROWS_AS(PointSeq::make(params, {origin, origin}), ToolkitError);
  const auto single = PointSeq::make(params, {origin});
  CHECK(single.size() == 1);
  CHECK(PointSeq::make(params, {}).size() == 0);
}

TEST_CASE("hermitian inner product") {
  const Point a = Point::make({Complex(0.5, 0.0), Complex(0.0, 0.5)});
  const Point b = Point::make({Complex(0.0, 0.5), Complex(0.5, 0.0)});
  // 0.5 conj(0.5i) + 0.5i conj(0.5) = -0.25i + 0.25i = 0.
  CHECK(std::abs(herm_inner(a, b)) <= 1e-15);
  CHECK(close_abs(herm_inner(a, a).real(), a.norm2(), 1e-15));
}
