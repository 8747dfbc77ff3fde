#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hsball/coeff_tables.hpp"
#include "hsball/rng.hpp"
#include "test_support.hpp"

using namespace hsball;

namespace {

using Rat = Rational;
using RatVec = std::vector<Rational>;

Rational ipow(const Rational& base, int e) {
  Rational out(1);
  for (int i = 0; i < e; ++i) out = out * base;
  return out;
}

PolyFn seeded_poly(Rng& rng, int n, int deg, int cap) {
  PolyFn f(n, cap);
  for (const auto& alpha : all_multi_indices(n, deg)) {
    f.set_coeff(alpha, 0.5 * rng.complex_normal());
  }
  return f;
}

// The delta branch stores length l+1; reading past the end means zero.
Rational padded(const RatVec& v, int q) {
  return q < static_cast<int>(v.size()) ? v[q] : Rational(0);
}

}  // namespace

TEST_CASE("rational arithmetic normalizes") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(1, -2) == Rat(-1, 2));
  CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
  CHECK(Rat(1, 2) - Rat(1, 2) == Rat(0));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(1, 2) / Rat(1, 8) == Rat(4));
  CHECK(Rat(-6, 10).to_double() == -0.6);
  CHECK_THROWS_AS(Rat(1, 0), ToolkitError);
}

TEST_CASE("exclusion coefficients for small powers are deltas") {
  // The l <= j branch stores a delta of length l+1.
  CHECK(exclusion_coeffs(2, 1) == RatVec{Rat(0), Rat(1)});
  CHECK(exclusion_coeffs(3, 0) == RatVec{Rat(1)});
  CHECK(exclusion_coeffs(2, 2) == RatVec{Rat(0), Rat(0), Rat(1)});
  CHECK(padded(exclusion_coeffs(2, 1), 2) == Rat(0));
  CHECK(padded(exclusion_coeffs(3, 0), 3) == Rat(0));
}

TEST_CASE("exclusion coefficients pinned values") {
  CHECK(exclusion_coeffs(1, 2) == RatVec{Rat(-1), Rat(2)});
  CHECK(exclusion_coeffs(1, 5) == RatVec{Rat(-4), Rat(5)});
  CHECK(exclusion_coeffs(2, 3) == RatVec{Rat(1), Rat(-3), Rat(3)});
  CHECK(exclusion_coeffs(2, 5) == RatVec{Rat(6), Rat(-15), Rat(10)});
}

TEST_CASE("exclusion paths agree exactly") {
  // The delta branch is shorter than the solver output; compare by value.
  for (int j = 0; j <= 5; ++j) {
    for (int l = 0; l <= 9; ++l) {
      const RatVec a = exclusion_coeffs(j, l);
      const RatVec b = exclusion_coeffs_solve(j, l);
      REQUIRE(b.size() == size_t(j + 1));
      REQUIRE(a.size() <= b.size());
      for (int q = 0; q <= j; ++q) CHECK(padded(a, q) == b[q]);
    }
  }
}

TEST_CASE("exclusion coefficients satisfy the symbol identity") {
  // sum_q A_q q^i = l^i for i = 0..j; i = 0 is the partition of unity.
  for (int j = 0; j <= 4; ++j) {
    for (int l = j + 1; l <= j + 5; ++l) {
      const RatVec A = exclusion_coeffs(j, l);
      for (int i = 0; i <= j; ++i) {
        Rational sum(0);
        for (int q = 0; q <= j; ++q) sum = sum + A[q] * ipow(Rat(q), i);
        CHECK(sum == ipow(Rat(l), i));
      }
    }
  }
}

TEST_CASE("exclusion coefficients are polynomial in the power") {
  // A_q(l) has degree <= j in l, so the (j+1)-th finite difference vanishes,
  // delta branch included.
  for (int j = 1; j <= 4; ++j) {
    for (int q = 0; q <= j; ++q) {
      for (int l0 = 0; l0 <= j + 2; ++l0) {
        Rational diff(0);
        long long sign = 1;
        for (int i = 0; i <= j + 1; ++i) {
          const Rational binom(sign *
                               static_cast<long long>(std::llround(
                                   binomial(j + 1, i))));
          diff = diff + binom * padded(exclusion_coeffs(j, l0 + i), q);
          sign = -sign;
        }
        CHECK(diff == Rat(0));
      }
    }
  }
}

TEST_CASE("inclusion coefficients") {
  CHECK(inclusion_coeffs(0) == RatVec{Rat(1)});
  CHECK(inclusion_coeffs(1) == RatVec{Rat(-1), Rat(1)});
  CHECK(inclusion_coeffs(2) == RatVec{Rat(1), Rat(-2), Rat(1)});
  for (int j = 0; j <= 5; ++j) {
    const RatVec rec = inclusion_coeffs(j);
    const RatVec closed = inclusion_coeffs_closed(j);
    REQUIRE(rec.size() == size_t(j + 1));
    for (int q = 0; q <= j; ++q) CHECK(rec[q] == closed[q]);
    CHECK(rec[j] == Rat(1));
  }
}

TEST_CASE("auxiliary table rows") {
  const auto rows22 = f_table(2, 2);
  REQUIRE(rows22.size() == 3);
  CHECK(rows22[0].alpha == RatVec{Rat(1)});
  CHECK(rows22[1].alpha == RatVec{Rat(-1), Rat(1)});
  CHECK(rows22[2].alpha == RatVec{Rat(1, 2), Rat(-1), Rat(1, 2)});

  const auto rows33 = f_table(3, 3);
  REQUIRE(rows33.size() == 4);
  CHECK(rows33[3].alpha ==
        RatVec{Rat(-1, 6), Rat(1, 2), Rat(-1, 2), Rat(1, 6)});
  for (const auto& row : rows33) {
    CHECK(row.j == 3);
    CHECK(row.alpha.size() == size_t(row.k + 1));
  }
}

TEST_CASE("recurrence evaluation matches the expansion") {
  Rng rng(111);
  const int cap = 12;
  for (int trial = 0; trial < 5; ++trial) {
    const PolyFn gamma = seeded_poly(rng, 1, 3, cap);
    const PolyFn h = seeded_poly(rng, 1, 3, cap);
    for (int j = 1; j <= 2; ++j) {
      const auto rows = f_table(j, j);
      for (const auto& row : rows) {
        const PolyFn direct = f_kj_eval(row.k, j, gamma, h);
        PolyFn expansion = PolyFn::zero(1, cap);
        for (int q = 0; q <= row.k; ++q) {
          PolyFn term = gamma.pow(q).mul(h).radial_derivative(j);
          term = gamma.pow(row.k - q).mul(term);
          expansion = expansion.add(term.scale(row.alpha[q].to_double()));
        }
        CHECK(max_coeff_diff(direct, expansion) <= 1e-12);
      }
    }
  }
}

TEST_CASE("exclusion identity on concrete polynomials") {
  Rng rng(112);
  const int cap = 10;
  for (int trial = 0; trial < 5; ++trial) {
    const PolyFn gamma = seeded_poly(rng, 1, 2, cap);
    const PolyFn h = seeded_poly(rng, 1, 2, cap);
    const int j = 2;
    const int l = 3;
    const RatVec A = exclusion_coeffs(j, l);
    const PolyFn lhs = gamma.pow(l).mul(h).radial_derivative(j);
    PolyFn rhs = PolyFn::zero(1, cap);
    for (int q = 0; q <= j; ++q) {
      const PolyFn inner = gamma.pow(q).mul(h).radial_derivative(j);
      rhs = rhs.add(gamma.pow(l - q).mul(inner).scale(A[q].to_double()));
    }
    CHECK(max_coeff_diff(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("inclusion identity is independent of the power") {
  Rng rng(113);
  const int cap = 12;
  for (int l = 1; l <= 3; ++l) {
    const PolyFn gamma = seeded_poly(rng, 1, 2, cap);
    const PolyFn h = seeded_poly(rng, 1, 2, cap);
    for (int j = 1; j <= 3; ++j) {
      const RatVec A = inclusion_coeffs(j);
      const PolyFn lhs = gamma.pow(l).radial_derivative(j).mul(h);
      PolyFn rhs = PolyFn::zero(1, cap);
      for (int q = 0; q <= j; ++q) {
        const PolyFn inner = gamma.pow(l).mul(h.radial_derivative(j - q));
        rhs = rhs.add(inner.radial_derivative(q).scale(A[q].to_double()));
      }
      CHECK(max_coeff_diff(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("table builder is consistent with the direct paths") {
  const CoeffTable table = build_coeff_table(3, 4);
  for (int j = 0; j <= 3; ++j) {
    for (int l = 0; l <= 4; ++l) {
      const auto it = table.exclusion.find({j, l});
      REQUIRE(it != table.exclusion.end());
      CHECK(it->second == exclusion_coeffs(j, l));
    }
    const auto inc = table.inclusion.find(j);
    REQUIRE(inc != table.inclusion.end());
    CHECK(inc->second == inclusion_coeffs(j));
  }
  for (const auto& [key, alpha] : table.recurrenceState) {
    const auto rows = f_table(key.second, key.first);
    CHECK(rows[key.first].alpha == alpha);
  }
}

TEST_CASE("randomized identity verification") {
  const VerifyReport rep = verify_identities(4, 5, 50, 2026);
  CHECK(rep.cases > 0);
  CHECK(rep.maxResidual <= 1e-10);
}
