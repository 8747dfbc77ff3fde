#pragma once

#include <map>
#include <span>
#include <vector>

#include "hsball/params.hpp"

namespace hsball {

// Multi-index alpha in N^n.
using MultiIndex = std::vector<int>;

int mi_degree(const MultiIndex& alpha);

// Graded lexicographic order: total degree first, then lexicographic.
// Fixed once so that map iteration (and thus serialization) is byte-stable.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

using CoeffMap = std::map<MultiIndex, Complex, GradedLexLess>;

// Truncated holomorphic power series: finitely many monomial coefficients,
// all of degree <= cap.  Absent indices mean coefficient zero.  Products are
// computed in the quotient ring that forgets degrees above the cap; the
// `truncated` flag records that some operation actually dropped terms.
class PolyFn {
 public:
  PolyFn() = default;
  PolyFn(int n, int cap);

  static PolyFn zero(int n, int cap);
  static PolyFn constant(int n, int cap, Complex c);
  static PolyFn monomial(int n, int cap, MultiIndex alpha, Complex c);

  int n() const { return n_; }
  int cap() const { return cap_; }
  bool truncated() const { return truncated_; }
  void set_truncated(bool t) { truncated_ = t; }
  const CoeffMap& terms() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;  // -1 for the zero function

  Complex coeff(const MultiIndex& alpha) const;
  // Stores c at alpha (erases near-zero entries); alpha must satisfy the
  // length and cap invariants.
  void set_coeff(const MultiIndex& alpha, Complex c);

  Complex eval(std::span<const Complex> z) const;
  Complex eval(const Point& z) const;
  Complex eval(const std::vector<Complex>& z) const;

  PolyFn add(const PolyFn& g) const;
  PolyFn sub(const PolyFn& g) const;
  PolyFn scale(Complex c) const;
  // Product in the quotient ring; strict mode turns an actual truncation
  // into a DegreeOverflow error.
  PolyFn mul(const PolyFn& g, bool strict = false) const;
  PolyFn pow(int k, bool strict = false) const;

  // R^j f where R = sum_i z_i d/dz_i; diagonal on monomials with
  // R^j z^alpha = |alpha|^j z^alpha, hence exact.
  PolyFn radial_derivative(int j) const;

  // (I+R)^s f: coefficient at alpha multiplied by (1+|alpha|)^s; exact for
  // every real s because R is diagonal.
  PolyFn bracket_shift(double s) const;

  // f(phi_1(z), ..., phi_n(z)) in the quotient ring.
  PolyFn compose(const std::vector<PolyFn>& phi, bool strict = false) const;

  double max_abs_coeff() const;

  // Coefficients below this magnitude are erased after arithmetic to keep
  // the maps sparse.
  static double prune_threshold();
  static void set_prune_threshold(double t);

 private:
  void check_index(const MultiIndex& alpha) const;
  void check_compatible(const PolyFn& g) const;

  int n_ = 1;
  int cap_ = 0;
  CoeffMap coeffs_;
  bool truncated_ = false;
};

// R^j(fg) assembled from the product rule sum_k C(j,k) R^k f R^{j-k} g;
// equals radial_derivative(mul(f,g), j) exactly when nothing truncates.
PolyFn leibniz_rj(const PolyFn& f, const PolyFn& g, int j, bool strict = false);

// max_alpha |coeff_f(alpha) - coeff_g(alpha)|.
double max_coeff_diff(const PolyFn& f, const PolyFn& g);

double binomial(int n, int k);
double factorial(int n);

// All multi-indices of length n with degree <= maxDegree, graded-lex order.
std::vector<MultiIndex> all_multi_indices(int n, int maxDegree);

}  // namespace hsball
