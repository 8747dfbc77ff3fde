#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hsball/polyfn.hpp"

namespace hsball {

// Exact rational scalar for the coefficient tables.  Arithmetic guards
// against int64 overflow through 128-bit intermediates.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n);  // NOLINT: implicit integer promotion is intended
  Rational(long long n, long long d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const = default;

  double to_double() const;
};

// Coefficients of the identity (for l > j; trivially A_q = delta_{ql} when
// l <= j):
//   R^j(gamma^l h) = sum_{q=0}^{j} A_q gamma^{l-q} R^j(gamma^q h).
// Two independent computation paths:
//   exclusion_coeffs        - the F-table recurrence (A_q = sum_k
//                             falling(l,k) alpha^{(k)}_q),
//   exclusion_coeffs_solve  - the symbol identity l^i = sum_q A_q q^i,
//                             i = 0..j, solved in Lagrange form
//                             A_q = prod_{i != q} (l-i)/(q-i).
// Both are exact rationals and must agree exactly.
std::vector<Rational> exclusion_coeffs(int j, int l);
std::vector<Rational> exclusion_coeffs_solve(int j, int l);

// Coefficients of R^j(gamma^l) h = sum_{q=0}^{j} A_{j,q} R^q(gamma^l R^{j-q} h),
// independent of l.  Computed by the elimination recurrence
// A^{(j)}_q = A^{(j-1)}_{q-1} - A^{(j-1)}_q; the closed form
// A_{j,q} = (-1)^{j-q} C(j,q) is the independent cross-check.
std::vector<Rational> inclusion_coeffs(int j);
std::vector<Rational> inclusion_coeffs_closed(int j);

// Expansion state of the auxiliary functions F_{k,j} (k <= j) defined by the
// recurrence F_{0,1} = Rh, F_{1,1} = (R gamma) h,
//   F_{0,j+1} = R F_{0,j};  F_{k,j+1} = (R gamma) F_{k-1,j} + R F_{k,j};
//   F_{j+1,j+1} = (R gamma) F_{j,j},
// expanded over the basis {gamma^{k-q} R^j(gamma^q h)}_q:
//   F_{k,j} = sum_q alpha_q gamma^{k-q} R^j(gamma^q h).
// The triangular bootstrap k! F_{k,j} = R^j(gamma^k h) -
// sum_{i<k} falling(k,i) gamma^{k-i} F_{i,j} yields exact rationals.
struct FTableRow {
  int k = 0;
  int j = 0;
  std::vector<Rational> alpha;
};

std::vector<FTableRow> f_table(int j, int kMax);

// F_{k,j} evaluated on concrete polynomials through the defining recurrence
// (no expansion), for brute-force verification.
PolyFn f_kj_eval(int k, int j, const PolyFn& gamma, const PolyFn& h,
                 bool strict = false);

struct CoeffTable {
  std::map<std::pair<int, int>, std::vector<Rational>> exclusion;  // (j,l)
  std::map<int, std::vector<Rational>> inclusion;                  // j
  std::map<std::pair<int, int>, std::vector<Rational>> recurrenceState;  // (k,j)
};

CoeffTable build_coeff_table(int jMax, int lMax);

// Substitutes seeded random polynomials for gamma and h and checks both
// identities coefficientwise; the degree cap is chosen large enough that
// nothing truncates, so residuals are pure floating-point error.
struct VerifyReport {
  double maxResidual = 0.0;
  long cases = 0;
};

VerifyReport verify_identities(int jMax, int lMax, int trials, uint64_t seed);

}  // namespace hsball
