#include "hsball/coeff_tables.hpp"

#include <cmath>
#include <numeric>

#include "hsball/rng.hpp"

namespace hsball {

namespace {

long long checked_ll(__int128 v, const char* what) {
  if (v > static_cast<__int128>(9223372036854775807LL) ||
      v < -static_cast<__int128>(9223372036854775807LL)) {
    fail(ErrorKind::InvalidParams,
         std::string("rational overflow in ") + what);
  }
  return static_cast<long long>(v);
}

Rational normalized(__int128 num, __int128 den) {
  if (den == 0) fail(ErrorKind::InvalidParams, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;
  Rational out;
  out.num = checked_ll(num / a, "numerator");
  out.den = checked_ll(den / a, "denominator");
  return out;
}

long long falling(int l, int k) {
  long long out = 1;
  for (int i = 0; i < k; ++i) out *= l - i;
  return out;
}

long long factorial_ll(int n) {
  long long out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

// alpha^{(k)}_q = (-1)^{k-q} / (q! (k-q)!), the expansion of F_{k,j}.
Rational f_expansion_coeff(int k, int q) {
  const long long sign = (k - q) % 2 == 0 ? 1 : -1;
  return Rational(sign, factorial_ll(q) * factorial_ll(k - q));
}

}  // namespace

Rational::Rational(long long n) : num(n), den(1) {}

Rational::Rational(long long n, long long d) {
  *this = normalized(n, d);
}

Rational Rational::operator+(const Rational& o) const {
  return normalized(static_cast<__int128>(num) * o.den +
                        static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return normalized(static_cast<__int128>(num) * o.den -
                        static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return normalized(static_cast<__int128>(num) * o.num,
                    static_cast<__int128>(den) * o.den);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) fail(ErrorKind::InvalidParams, "division by zero rational");
  return normalized(static_cast<__int128>(num) * o.den,
                    static_cast<__int128>(den) * o.num);
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<Rational> exclusion_coeffs(int j, int l) {
  if (j < 0 || l < 0) fail(ErrorKind::InvalidParams, "need j, l >= 0");
  if (l <= j) {
    std::vector<Rational> out(l + 1, Rational(0));
    out[l] = Rational(1);
    return out;
  }
  std::vector<Rational> out(j + 1, Rational(0));
  for (int q = 0; q <= j; ++q) {
    Rational acc(0);
    for (int k = q; k <= j; ++k) {
      acc = acc + Rational(falling(l, k)) * f_expansion_coeff(k, q);
    }
    out[q] = acc;
  }
  return out;
}

std::vector<Rational> exclusion_coeffs_solve(int j, int l) {
  if (j < 0 || l < 0) fail(ErrorKind::InvalidParams, "need j, l >= 0");
  std::vector<Rational> out(j + 1, Rational(1));
  for (int q = 0; q <= j; ++q) {
    for (int i = 0; i <= j; ++i) {
      if (i == q) continue;
      out[q] = out[q] * Rational(l - i, q - i);
    }
  }
  return out;
}

std::vector<Rational> inclusion_coeffs(int j) {
  if (j < 0) fail(ErrorKind::InvalidParams, "need j >= 0");
  std::vector<Rational> row{Rational(1)};
  for (int step = 1; step <= j; ++step) {
    std::vector<Rational> next(step + 1, Rational(0));
    for (int q = 0; q <= step; ++q) {
      if (q >= 1) next[q] = next[q] + row[q - 1];
      if (q < step) next[q] = next[q] - row[q];
    }
    row = std::move(next);
  }
  return row;
}

std::vector<Rational> inclusion_coeffs_closed(int j) {
  if (j < 0) fail(ErrorKind::InvalidParams, "need j >= 0");
  std::vector<Rational> out;
  out.reserve(j + 1);
  for (int q = 0; q <= j; ++q) {
    const long long sign = (j - q) % 2 == 0 ? 1 : -1;
    out.push_back(Rational(sign * static_cast<long long>(binomial(j, q))));
  }
  return out;
}

std::vector<FTableRow> f_table(int j, int kMax) {
  if (j < 0 || kMax < 0) fail(ErrorKind::InvalidParams, "need j, kMax >= 0");
  const int top = std::min(kMax, j);
  // Bootstrap k! F_k = R^j(gamma^k h) - sum_{i<k} falling(k,i) gamma^{k-i} F_i
  // in the basis {gamma^{k-q} R^j(gamma^q h)}_q; multiplying by gamma powers
  // leaves the q-coefficients in place.
  std::vector<std::vector<Rational>> rows;
  for (int k = 0; k <= top; ++k) {
    std::vector<Rational> row(k + 1, Rational(0));
    row[k] = Rational(1);
    for (int i = 0; i < k; ++i) {
      const Rational scale(falling(k, i));
      for (int q = 0; q <= i; ++q) {
        row[q] = row[q] - scale * rows[i][q];
      }
    }
    const Rational inv(1, factorial_ll(k));
    for (Rational& r : row) r = r * inv;
    rows.push_back(std::move(row));
  }
  std::vector<FTableRow> out;
  for (int k = 0; k <= top; ++k) {
    out.push_back(FTableRow{k, j, rows[k]});
  }
  return out;
}

PolyFn f_kj_eval(int k, int j, const PolyFn& gamma, const PolyFn& h,
                 bool strict) {
  if (k < 0 || j < 0 || k > j) {
    fail(ErrorKind::InvalidParams, "F_{k,j} needs 0 <= k <= j");
  }
  const PolyFn rGamma = gamma.radial_derivative(1);
  // level jj holds F_{0..jj, jj}; advance to level j.
  std::vector<PolyFn> level{h};
  for (int jj = 0; jj < j; ++jj) {
    std::vector<PolyFn> next;
    next.reserve(jj + 2);
    next.push_back(level[0].radial_derivative(1));
    for (int kk = 1; kk <= jj; ++kk) {
      next.push_back(rGamma.mul(level[kk - 1], strict)
                         .add(level[kk].radial_derivative(1)));
    }
    next.push_back(rGamma.mul(level[jj], strict));
    level = std::move(next);
  }
  return level[k];
}

CoeffTable build_coeff_table(int jMax, int lMax) {
  CoeffTable table;
  for (int j = 0; j <= jMax; ++j) {
    table.inclusion[j] = inclusion_coeffs(j);
    for (int l = 0; l <= lMax; ++l) {
      table.exclusion[{j, l}] = exclusion_coeffs(j, l);
    }
    for (const FTableRow& row : f_table(j, j)) {
      table.recurrenceState[{row.k, row.j}] = row.alpha;
    }
  }
  return table;
}

VerifyReport verify_identities(int jMax, int lMax, int trials, uint64_t seed) {
  if (jMax < 0 || lMax < 0 || trials < 1) {
    fail(ErrorKind::InvalidParams, "need jMax, lMax >= 0 and trials >= 1");
  }
  VerifyReport report;
  const int degGamma = 2;
  const int degH = 2;
  const int cap = lMax * degGamma + degH + 1;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + trial % 2;
    Rng rng(seed, static_cast<uint64_t>(trial));
    PolyFn gamma = PolyFn::zero(n, cap);
    for (const MultiIndex& alpha : all_multi_indices(n, degGamma)) {
      gamma.set_coeff(alpha, rng.complex_normal());
    }
    PolyFn h = PolyFn::zero(n, cap);
    for (const MultiIndex& alpha : all_multi_indices(n, degH)) {
      h.set_coeff(alpha, rng.complex_normal());
    }
    for (int j = 0; j <= jMax; ++j) {
      for (int l = 0; l <= lMax; ++l) {
        const PolyFn gl = gamma.pow(l, true);
        // Exclusion: R^j(gamma^l h) vs sum_q A_q gamma^{l-q} R^j(gamma^q h).
        const PolyFn lhsEx = gl.mul(h, true).radial_derivative(j);
        const std::vector<Rational> ex = exclusion_coeffs(j, l);
        PolyFn rhsEx = PolyFn::zero(n, cap);
        for (int q = 0; q < static_cast<int>(ex.size()); ++q) {
          if (ex[q].num == 0) continue;
          const PolyFn term = gamma.pow(l - q, true).mul(
              gamma.pow(q, true).mul(h, true).radial_derivative(j), true);
          rhsEx = rhsEx.add(term.scale(ex[q].to_double()));
        }
        const double scaleEx = std::max(1.0, lhsEx.max_abs_coeff());
        report.maxResidual = std::max(
            report.maxResidual, max_coeff_diff(lhsEx, rhsEx) / scaleEx);
        ++report.cases;
        // Inclusion: R^j(gamma^l) h vs sum_q A_q R^q(gamma^l R^{j-q} h).
        const PolyFn lhsIn = gl.radial_derivative(j).mul(h, true);
        const std::vector<Rational> in = inclusion_coeffs(j);
        PolyFn rhsIn = PolyFn::zero(n, cap);
        for (int q = 0; q <= j; ++q) {
          if (in[q].num == 0) continue;
          const PolyFn term =
              gl.mul(h.radial_derivative(j - q), true).radial_derivative(q);
          rhsIn = rhsIn.add(term.scale(in[q].to_double()));
        }
        const double scaleIn = std::max(1.0, lhsIn.max_abs_coeff());
        report.maxResidual = std::max(
            report.maxResidual, max_coeff_diff(lhsIn, rhsIn) / scaleIn);
        ++report.cases;
      }
    }
  }
  return report;
}

}  // namespace hsball
