#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "hsball/extension.hpp"
#include "hsball/kernels.hpp"
#include "hsball/rng.hpp"
#include "test_support.hpp"

using namespace hsball;
using testsupport::close_abs;

namespace {

const SpaceParams kDisk = SpaceParams::make(1, 0.0, 2.0);

Point radial(double r) { return Point::make({Complex(r, 0.0)}); }

DualSystem ready_system(const PointSeq& seq, const SpaceParams& params,
                        int cap) {
  DualSystem sys = build_beta(seq, params, cap);
  gamma_dft(sys);
  return sys;
}

// Linear witness m(z) = (z - b)/(a - b): m(a) = 1, m(b) = 0.  Disk only.
PolyFn linear_witness(Complex a, Complex b, int cap) {
  PolyFn w = PolyFn::constant(1, cap, -b / (a - b));
  w.set_coeff({1}, 1.0 / (a - b));
  return w;
}

Eigen::VectorXcd lam(std::vector<Complex> v) {
  Eigen::VectorXcd out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

double max_residual(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

QuadratureSpec mc_quad() {
  QuadratureSpec quad;
  quad.mode = QuadMode::MonteCarlo;
  quad.sampleCount = 20000;
  quad.seed = 611;
  quad.relStderrTol = 0.5;
  return quad;
}

}  // namespace

TEST_CASE("extension at the origin is the constant") {
  DualSystem sys =
      ready_system(PointSeq::make(kDisk, {radial(0.0)}), kDisk, 12);
  const auto rep = linear_extension(sys, lam({1.0}), 1, {});
  CHECK(rep.l == 1);
  CHECK(rep.f.degree() == 0);
  CHECK(std::abs(rep.f.coeff({0}) - Complex(1.0)) <= 1e-12);
  CHECK(max_residual(rep.valueResiduals) <= 1e-12);
  CHECK(close_abs(rep.normRatio, 1.0, 1e-10));
}

TEST_CASE("extension hits the proxy scaled targets") {
  const auto seq = PointSeq::make(
      kDisk, {radial(0.1), Point::make({Complex(0.0, 0.25)}),
              Point::make({Complex(-0.3, 0.05)})});
  DualSystem sys = ready_system(seq, kDisk, 20);
  const auto rep =
      linear_extension(sys, lam({1.0, Complex(0.5, -0.5), -0.25}), 3, {});
  CHECK(max_residual(rep.valueResiduals) <= 1e-8);
  CHECK(rep.normRatio > 0.0);

  // Target convention: f(a) = lambda_a ||k_a||_{p'} proxy.
  const Point& a = seq.points[1];
  const double proxy = kernel_norm_proxy(a, kDisk, kDisk.pPrime());
  CHECK(std::abs(rep.f.eval(a) - Complex(0.5, -0.5) * proxy) <= 1e-8);
}

TEST_CASE("zero data extends to zero") {
  DualSystem sys = ready_system(
      PointSeq::make(kDisk, {radial(0.1), radial(-0.2)}), kDisk, 12);
  const auto rep = linear_extension(sys, lam({0.0, 0.0}), 1, {});
  CHECK(rep.f.is_zero());
  CHECK(rep.normRatio == 0.0);
}

TEST_CASE("extension is linear and homogeneous in the data") {
  DualSystem sys = ready_system(
      PointSeq::make(kDisk, {radial(0.15), radial(-0.25)}), kDisk, 16);
  const auto l1 = lam({Complex(1.0, 0.5), -0.75});
  const auto l2 = lam({Complex(-0.25, 0.1), Complex(0.0, 1.0)});

  const PolyFn sum = linear_extension(sys, l1 + l2, 2, {}).f;
  const PolyFn parts =
      linear_extension(sys, l1, 2, {}).f.add(linear_extension(sys, l2, 2, {}).f);
  CHECK(max_coeff_diff(sum, parts) <= 1e-12);

  const Complex c(2.0, -1.0);
  const auto base = linear_extension(sys, l1, 2, {});
  const auto scaled = linear_extension(sys, c * l1, 2, {});
  CHECK(max_coeff_diff(scaled.f, base.f.scale(c)) <= 1e-10);
  CHECK(close_abs(scaled.normRatio, base.normRatio,
                  1e-9 * (1.0 + base.normRatio)));
}

TEST_CASE("default power clears the smoothness") {
  DualSystem flat =
      ready_system(PointSeq::make(kDisk, {radial(0.2)}), kDisk, 8);
  CHECK(linear_extension(flat, lam({1.0}), 0, {}).l == 1);

  const auto params = SpaceParams::make(3, 1.0, 2.0);
  const auto seq = PointSeq::make(
      params, {Point::make({Complex(0.2), Complex(0.0), Complex(0.0)}),
               Point::make({Complex(0.0), Complex(0.0, 0.25), Complex(0.1)})});
  DualSystem sys = ready_system(seq, params, 10);
  CHECK(linear_extension(sys, lam({1.0, -1.0}), 0, {}).l == 2);
  CHECK_THROWS_AS(linear_extension(sys, lam({1.0, -1.0}), 1, {}),
                  ToolkitError);
}

TEST_CASE("two singletons glue with an exact witness") {
  const Complex a(0.2, 0.0);
  const Complex b(-0.15, 0.1);
  DualSystem sys1 =
      ready_system(PointSeq::make(kDisk, {Point::make({a})}), kDisk, 16);
  DualSystem sys2 =
      ready_system(PointSeq::make(kDisk, {Point::make({b})}), kDisk, 16);
  std::map<std::pair<int, int>, PolyFn> witnesses;
  witnesses[{0, 0}] = linear_witness(a, b, 16);
  const auto rep = glue_union(sys1, sys2, witnesses, 2);
  CHECK(max_residual(rep.residualsS1) <= 1e-10);
  CHECK(max_residual(rep.residualsS2) <= 1e-10);
}

TEST_CASE("gluing against an empty set keeps the first multiplier") {
  DualSystem sys1 =
      ready_system(PointSeq::make(kDisk, {radial(0.2)}), kDisk, 12);
  DualSystem empty;
  empty.params = kDisk;
  empty.degreeCap = 12;
  const auto rep = glue_union(sys1, empty, {}, 2);
  CHECK(rep.m.is_zero());
  CHECK(rep.residualsS2.empty());

  PolyFn m1 = PolyFn::constant(1, 12, 0.3);
  m1.set_coeff({1}, 0.5);
  PolyFn m2 = PolyFn::constant(1, 12, -0.1);
  m2.set_coeff({2}, 0.25);
  CHECK(max_coeff_diff(combine_glued(rep.m, m1, m2), m1) == 0.0);
}

TEST_CASE("two plus two gluing") {
  const std::vector<Complex> s1{Complex(0.1, 0.0), Complex(-0.2, 0.0)};
  const std::vector<Complex> s2{Complex(0.0, 0.2), Complex(-0.15, -0.1)};
  DualSystem sys1 = ready_system(
      PointSeq::make(kDisk, {Point::make({s1[0]}), Point::make({s1[1]})}),
      kDisk, 16);
  DualSystem sys2 = ready_system(
      PointSeq::make(kDisk, {Point::make({s2[0]}), Point::make({s2[1]})}),
      kDisk, 16);
  std::map<std::pair<int, int>, PolyFn> witnesses;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      witnesses[{a, b}] = linear_witness(s1[a], s2[b], 16);
    }
  }
  const auto rep = glue_union(sys1, sys2, witnesses, 2);
  CHECK(max_residual(rep.residualsS1) <= 1e-7);
  CHECK(max_residual(rep.residualsS2) <= 1e-7);

  // The combination switches between the two multipliers across the sets.
  PolyFn m1 = PolyFn::constant(1, 16, 0.3);
  m1.set_coeff({1}, 0.5);
  PolyFn m2 = PolyFn::constant(1, 16, -0.1);
  m2.set_coeff({2}, 0.25);
  const PolyFn M = combine_glued(rep.m, m1, m2);
  for (const Complex& a : s1) {
    CHECK(std::abs(M.eval({a}) - m1.eval({a})) <= 1e-6);
  }
  for (const Complex& b : s2) {
    CHECK(std::abs(M.eval({b}) - m2.eval({b})) <= 1e-6);
  }
}

TEST_CASE("weighted interpolation at the origin") {
  const auto params = SpaceParams::make(1, 0.2, 3.0);
  const auto seq = PointSeq::make(params, {radial(0.0)});
  const auto dual = dual_bounded_test(seq, params, 12, mc_quad());
  const auto rep =
      weighted_interp(seq, dual.rho, lam({Complex(0.5, 0.5)}), 3.0, 6.0, 2.0);
  CHECK(max_residual(rep.valueResiduals) <= 1e-12);
  CHECK(close_abs(rep.gammaCompensation[0], 1.0, 1e-12));
}

TEST_CASE("weighted interpolation hits the weighted targets") {
  const auto params = SpaceParams::make(1, 0.2, 3.0);
  const auto seq = PointSeq::make(
      params, {radial(0.1), Point::make({Complex(0.0, 0.2)}), radial(-0.25)});
  const auto dual = dual_bounded_test(seq, params, 16, mc_quad());
  const Eigen::VectorXcd lambda =
      lam({1.0, Complex(0.3, -0.4), Complex(-0.2, 0.1)});
  const auto rep = weighted_interp(seq, dual.rho, lambda, 3.0, 6.0, 2.0);
  CHECK(max_residual(rep.valueResiduals) <= 1e-7);
  for (double g : rep.gammaCompensation) CHECK(close_abs(g, 1.0, 1e-12));

  // h(a) = lambda_a (1-|a|^2)^s ||k_a||_{r'}.
  const Point& a = seq.points[2];
  const Complex target = lambda(2) * std::pow(1.0 - a.norm2(), params.s) *
                         kernel_norm_proxy(a, params, conjugate_exponent(2.0));
  CHECK(std::abs(rep.h.eval(a) - target) <= 1e-7);
}

TEST_CASE("weighted interpolation without smoothness is unweighted") {
  // The dual family must be normalized at the same p the splitting uses.
  const auto params = SpaceParams::make(1, 0.0, 4.0);
  const auto seq = PointSeq::make(params, {radial(0.1), radial(-0.15)});
  const auto dual = dual_bounded_test(seq, params, 12, mc_quad());
  const Eigen::VectorXcd lambda = lam({0.8, Complex(0.0, -0.6)});
  const auto rep = weighted_interp(seq, dual.rho, lambda, 4.0, 4.0, 2.0);
  for (int i = 0; i < 2; ++i) {
    const Complex target =
        lambda(i) *
        kernel_norm_proxy(seq.points[i], params, conjugate_exponent(2.0));
    CHECK(std::abs(rep.h.eval(seq.points[i]) - target) <= 1e-8);
  }
  CHECK(max_residual(rep.valueResiduals) <= 1e-8);
}

TEST_CASE("splitting balances the three norms") {
  const auto params = SpaceParams::make(1, 0.2, 3.0);
  const auto seq = PointSeq::make(params, {radial(0.1), radial(-0.2)});
  const auto dual = dual_bounded_test(seq, params, 12, mc_quad());
  const double p = 3.0, q = 6.0, r = 2.0;
  const Eigen::VectorXcd lambda = lam({Complex(0.9, -1.2), Complex(-0.3, 0.4)});
  const auto rep = weighted_interp(seq, dual.rho, lambda, p, q, r);
  CHECK(close_abs(std::pow(rep.muNormP, p), std::pow(rep.lambdaNormR, r),
                  1e-12));
  CHECK(close_abs(std::pow(rep.nuNormQ, q), std::pow(rep.lambdaNormR, r),
                  1e-12));
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(rep.mu(i) * rep.nu(i) - lambda(i)) <= 1e-12);
  }
}

TEST_CASE("weighted interpolation validates the exponent relation") {
  const auto seq = PointSeq::make(kDisk, {radial(0.1)});
  const auto dual = dual_bounded_test(seq, kDisk, 8, {});
  CHECK_THROWS_AS(weighted_interp(seq, dual.rho, lam({1.0}), 4.0, 6.0, 2.0),
                  ToolkitError);
}

TEST_CASE("rademacher signs are deterministic") {
  int plus = 0;
  for (uint64_t d = 0; d < 10; ++d) {
    for (uint64_t j = 0; j < 10; ++j) {
      const int s = RademacherDraw::sign(7, d, j);
      CHECK((s == 1 || s == -1));
      CHECK(s == RademacherDraw::sign(7, d, j));
      if (s == 1) ++plus;
    }
  }
  CHECK(plus > 10);
  CHECK(plus < 90);
}

TEST_CASE("single function experiment has ratio one") {
  PolyFn f = PolyFn::constant(1, 8, 0.5);
  f.set_coeff({2}, Complex(0.0, 0.3));
  const auto out = rademacher_experiment({f}, kDisk, 16, 5, {});
  CHECK(out.enumerated);
  CHECK(close_abs(out.ratio, 1.0, 1e-12));
  CHECK(out.avgInequalityHolds);
}

TEST_CASE("orthonormal family has ratio one") {
  // n = 1, s = 0 monomials are orthonormal, so every sign pattern gives the
  // same norm and the type-2 ratio is exactly 1.
  std::vector<PolyFn> family;
  for (int k = 0; k < 6; ++k) {
    family.push_back(PolyFn::monomial(1, 8, {k}, 1.0));
  }
  const auto out = rademacher_experiment(family, kDisk, 64, 5, {});
  CHECK(out.enumerated);
  CHECK(close_abs(out.lhs, std::sqrt(6.0), 1e-10));
  CHECK(close_abs(out.ratio, 1.0, 1e-10));
  CHECK(out.avgLhs <= out.avgRhs * (1.0 + 1e-12));
}

TEST_CASE("large families fall back to monte carlo draws") {
  std::vector<PolyFn> family;
  for (int k = 0; k < 14; ++k) {
    family.push_back(PolyFn::monomial(1, 15, {k}, 1.0));
  }
  const auto out = rademacher_experiment(family, kDisk, 256, 5, {});
  CHECK(!out.enumerated);
  CHECK(close_abs(out.ratio, 1.0, 1e-10));
}

TEST_CASE("dual family normalization") {
  const auto seq = PointSeq::make(kDisk, {radial(0.3), radial(-0.4)});
  const auto rep = dual_bounded_test(seq, kDisk, 16, {});
  REQUIRE(rep.rho.size() == 2);
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const double want =
          (i == j)
              ? kernel_norm_proxy(seq.points[j], kDisk, kDisk.pPrime())
              : 0.0;
      CHECK(std::abs(rep.rho[j].eval(seq.points[i]) - Complex(want)) <= 1e-8);
    }
  }
}

TEST_CASE("dual norms degrade as points collide") {
  const auto single = dual_bounded_test(
      PointSeq::make(kDisk, {radial(0.4)}), kDisk, 16, {});
  CHECK(single.maxDualNorm > 0.9);
  CHECK(single.maxDualNorm < 1.1);

  const auto far = dual_bounded_test(
      PointSeq::make(kDisk, {radial(0.4), radial(-0.4)}), kDisk, 16, {});
  CHECK(far.maxDualNorm <= 2.0 * single.maxDualNorm);

  double prev = 0.0;
  for (double sep : {0.4, 0.2, 0.1}) {
    const auto rep = dual_bounded_test(
        PointSeq::make(kDisk, {radial(0.2), radial(0.2 + sep)}), kDisk, 16,
        {});
    CHECK(rep.maxDualNorm > prev);
    prev = rep.maxDualNorm;
  }
}
