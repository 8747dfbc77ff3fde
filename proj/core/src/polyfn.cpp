#include "hsball/polyfn.hpp"

#include <algorithm>
#include <cmath>

namespace hsball {

namespace {
double g_prune_threshold = 1e-15;
}

int mi_degree(const MultiIndex& alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = mi_degree(a);
  const int db = mi_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

PolyFn::PolyFn(int n, int cap) : n_(n), cap_(cap) {
  if (n < 1) fail(ErrorKind::InvalidParams, "PolyFn needs n >= 1");
  if (cap < 0) fail(ErrorKind::InvalidParams, "PolyFn needs cap >= 0");
}

PolyFn PolyFn::zero(int n, int cap) { return PolyFn(n, cap); }

PolyFn PolyFn::constant(int n, int cap, Complex c) {
  PolyFn f(n, cap);
  f.set_coeff(MultiIndex(n, 0), c);
  return f;
}

PolyFn PolyFn::monomial(int n, int cap, MultiIndex alpha, Complex c) {
  PolyFn f(n, cap);
  f.set_coeff(alpha, c);
  return f;
}

int PolyFn::degree() const {
  if (coeffs_.empty()) return -1;
  return mi_degree(coeffs_.rbegin()->first);
}

void PolyFn::check_index(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) {
    fail(ErrorKind::InvalidParams, "multi-index length does not match n");
  }
  for (int a : alpha) {
    if (a < 0) fail(ErrorKind::InvalidParams, "negative multi-index entry");
  }
  if (mi_degree(alpha) > cap_) {
    fail(ErrorKind::DegreeOverflow,
         "multi-index degree exceeds the cap " + std::to_string(cap_));
  }
}

void PolyFn::check_compatible(const PolyFn& g) const {
  if (g.n_ != n_ || g.cap_ != cap_) {
    fail(ErrorKind::InvalidParams,
         "operands must share dimension and degree cap");
  }
}

Complex PolyFn::coeff(const MultiIndex& alpha) const {
  const auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

void PolyFn::set_coeff(const MultiIndex& alpha, Complex c) {
  check_index(alpha);
  if (std::abs(c) < g_prune_threshold) {
    coeffs_.erase(alpha);
  } else {
    coeffs_[alpha] = c;
  }
}

Complex PolyFn::eval(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_) {
    fail(ErrorKind::InvalidParams, "evaluation point has wrong dimension");
  }
  // Power table up to the maximal exponent per coordinate.
  std::vector<int> maxExp(n_, 0);
  for (const auto& [alpha, c] : coeffs_) {
    for (int t = 0; t < n_; ++t) maxExp[t] = std::max(maxExp[t], alpha[t]);
  }
  std::vector<std::vector<Complex>> powers(n_);
  for (int t = 0; t < n_; ++t) {
    powers[t].resize(maxExp[t] + 1);
    powers[t][0] = 1.0;
    for (int e = 1; e <= maxExp[t]; ++e) powers[t][e] = powers[t][e - 1] * z[t];
  }
  Complex out = 0.0;
  for (const auto& [alpha, c] : coeffs_) {
    Complex term = c;
    for (int t = 0; t < n_; ++t) term *= powers[t][alpha[t]];
    out += term;
  }
  return out;
}

Complex PolyFn::eval(const Point& z) const {
  return eval(std::span<const Complex>(z.z));
}

Complex PolyFn::eval(const std::vector<Complex>& z) const {
  return eval(std::span<const Complex>(z));
}

PolyFn PolyFn::add(const PolyFn& g) const {
  check_compatible(g);
  PolyFn out = *this;
  out.truncated_ = truncated_ || g.truncated_;
  for (const auto& [alpha, c] : g.coeffs_) {
    out.set_coeff(alpha, out.coeff(alpha) + c);
  }
  return out;
}

PolyFn PolyFn::sub(const PolyFn& g) const { return add(g.scale(-1.0)); }

PolyFn PolyFn::scale(Complex c) const {
  PolyFn out(n_, cap_);
  out.truncated_ = truncated_;
  if (c == Complex(0.0)) return out;
  for (const auto& [alpha, v] : coeffs_) out.set_coeff(alpha, c * v);
  return out;
}

PolyFn PolyFn::mul(const PolyFn& g, bool strict) const {
  check_compatible(g);
  PolyFn out(n_, cap_);
  out.truncated_ = truncated_ || g.truncated_;
  bool dropped = false;
  MultiIndex gamma(n_);
  for (const auto& [alpha, ca] : coeffs_) {
    const int da = mi_degree(alpha);
    for (const auto& [beta, cb] : g.coeffs_) {
      if (da + mi_degree(beta) > cap_) {
        dropped = true;
        continue;
      }
      for (int t = 0; t < n_; ++t) gamma[t] = alpha[t] + beta[t];
      auto [it, inserted] = out.coeffs_.try_emplace(gamma, 0.0);
      it->second += ca * cb;
    }
  }
  // Prune in one pass (try_emplace bypassed the set_coeff filter).
  for (auto it = out.coeffs_.begin(); it != out.coeffs_.end();) {
    if (std::abs(it->second) < g_prune_threshold) {
      it = out.coeffs_.erase(it);
    } else {
      ++it;
    }
  }
  if (dropped) {
    if (strict) {
      fail(ErrorKind::DegreeOverflow,
           "product truncated above the degree cap in strict mode");
    }
    out.truncated_ = true;
  }
  return out;
}

PolyFn PolyFn::pow(int k, bool strict) const {
  if (k < 0) fail(ErrorKind::InvalidParams, "pow needs k >= 0");
  PolyFn out = PolyFn::constant(n_, cap_, 1.0);
  for (int i = 0; i < k; ++i) out = out.mul(*this, strict);
  return out;
}

PolyFn PolyFn::radial_derivative(int j) const {
  if (j < 0) fail(ErrorKind::InvalidParams, "derivative order must be >= 0");
  PolyFn out(n_, cap_);
  out.truncated_ = truncated_;
  for (const auto& [alpha, c] : coeffs_) {
    const double d = mi_degree(alpha);
    const double factor = std::pow(d, j);  // 0^0 = 1 keeps constants at j = 0
    out.set_coeff(alpha, c * factor);
  }
  return out;
}

PolyFn PolyFn::bracket_shift(double s) const {
  PolyFn out(n_, cap_);
  out.truncated_ = truncated_;
  for (const auto& [alpha, c] : coeffs_) {
    out.set_coeff(alpha, c * std::pow(1.0 + mi_degree(alpha), s));
  }
  return out;
}

PolyFn PolyFn::compose(const std::vector<PolyFn>& phi, bool strict) const {
  if (static_cast<int>(phi.size()) != n_) {
    fail(ErrorKind::InvalidParams, "composition needs one series per variable");
  }
  for (const PolyFn& component : phi) {
    if (component.n() != phi[0].n() || component.cap() != cap_) {
      fail(ErrorKind::InvalidParams,
           "composition components must share dimension and cap");
    }
  }
  const int m = phi[0].n();
  PolyFn out = PolyFn::zero(m, cap_);
  // Memoized coordinate powers.
  std::vector<std::vector<PolyFn>> powers(n_);
  auto power = [&](int t, int e) -> const PolyFn& {
    auto& table = powers[t];
    if (table.empty()) table.push_back(PolyFn::constant(m, cap_, 1.0));
    while (static_cast<int>(table.size()) <= e) {
      table.push_back(table.back().mul(phi[t], strict));
    }
    return table[e];
  };
  for (const auto& [alpha, c] : coeffs_) {
    PolyFn term = PolyFn::constant(m, cap_, c);
    for (int t = 0; t < n_; ++t) {
      if (alpha[t] > 0) term = term.mul(power(t, alpha[t]), strict);
    }
    out = out.add(term);
  }
  return out;
}

double PolyFn::max_abs_coeff() const {
  double out = 0.0;
  for (const auto& [alpha, c] : coeffs_) out = std::max(out, std::abs(c));
  return out;
}

double PolyFn::prune_threshold() { return g_prune_threshold; }

void PolyFn::set_prune_threshold(double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidParams, "threshold must be >= 0");
  g_prune_threshold = t;
}

PolyFn leibniz_rj(const PolyFn& f, const PolyFn& g, int j, bool strict) {
  if (j < 0) fail(ErrorKind::InvalidParams, "derivative order must be >= 0");
  PolyFn out = PolyFn::zero(f.n(), f.cap());
  for (int k = 0; k <= j; ++k) {
    const PolyFn term =
        f.radial_derivative(k).mul(g.radial_derivative(j - k), strict);
    out = out.add(term.scale(binomial(j, k)));
  }
  return out;
}

double max_coeff_diff(const PolyFn& f, const PolyFn& g) {
  double out = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    out = std::max(out, std::abs(c - g.coeff(alpha)));
  }
  for (const auto& [alpha, c] : g.terms()) {
    out = std::max(out, std::abs(c - f.coeff(alpha)));
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) {
    out = out * (n - k + i) / i;
  }
  return std::round(out);
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

namespace {
void enumerate_rec(int n, int slot, int remaining, MultiIndex& scratch,
                   std::vector<MultiIndex>& out) {
  if (slot == n - 1) {
    scratch[slot] = remaining;
    out.push_back(scratch);
    return;
  }
  for (int a = 0; a <= remaining; ++a) {
    scratch[slot] = a;
    enumerate_rec(n, slot + 1, remaining - a, scratch, out);
  }
}
}  // namespace

std::vector<MultiIndex> all_multi_indices(int n, int maxDegree) {
  if (n < 1 || maxDegree < 0) {
    fail(ErrorKind::InvalidParams, "need n >= 1 and maxDegree >= 0");
  }
  std::vector<MultiIndex> out;
  MultiIndex scratch(n, 0);
  for (int d = 0; d <= maxDegree; ++d) {
    std::vector<MultiIndex> layer;
    enumerate_rec(n, 0, d, scratch, layer);
    std::sort(layer.begin(), layer.end(), GradedLexLess{});
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

}  // namespace hsball
