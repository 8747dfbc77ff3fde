#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hsball/dual_system.hpp"
#include "hsball/rng.hpp"
#include "test_support.hpp"

using namespace hsball;
using testsupport::close_abs;

namespace {

const SpaceParams kDisk = SpaceParams::make(1, 0.0, 2.0);

Point radial(double r) { return Point::make({Complex(r, 0.0)}); }

DualSystem pair_system(double r1 = 0.0, double r2 = 0.5, int cap = 12) {
  const auto seq = PointSeq::make(kDisk, {radial(r1), radial(r2)});
  DualSystem sys = build_beta(seq, kDisk, cap);
  gamma_dft(sys);
  return sys;
}

DualSystem triple_system(int cap = 12) {
  const auto seq = PointSeq::make(
      kDisk, {radial(0.3), Point::make({Complex(0.0, 0.4)}),
              Point::make({Complex(-0.35, 0.1)})});
  DualSystem sys = build_beta(seq, kDisk, cap);
  gamma_dft(sys);
  return sys;
}

}  // namespace

TEST_CASE("single point system is trivial") {
  const auto seq = PointSeq::make(kDisk, {radial(0.3)});
  DualSystem sys = build_beta(seq, kDisk, 8);
  gamma_dft(sys);
  REQUIRE(sys.N == 1);
  CHECK(std::abs(sys.theta - Complex(1.0)) <= 1e-15);
  CHECK(sys.beta[0].degree() == 0);
  CHECK(std::abs(sys.beta[0].coeff({0}) - Complex(1.0)) <= 1e-14);
  CHECK(max_coeff_diff(sys.gamma[0], sys.beta[0]) <= 1e-14);
  CHECK(close_abs(sys.C_estimate, 1.0, 1e-10));
  const auto& Q3 = convolution_power(sys, 3);
  CHECK(max_coeff_diff(Q3[0], sys.beta[0]) <= 1e-12);
}

TEST_CASE("empty sequences are rejected") {
  const auto seq = PointSeq::make(kDisk, {});
  CHECK_THROWS_AS(build_beta(seq, kDisk, 8), ToolkitError);
}

TEST_CASE("characters of the two point system") {
  DualSystem sys = pair_system();
  REQUIRE(sys.N == 2);
  CHECK(std::abs(sys.theta - Complex(-1.0)) <= 1e-12);

  // beta_j(a_k) = theta^{jk}.
  CHECK(std::abs(sys.beta[0].eval(radial(0.0)) - Complex(-1.0)) <= 1e-9);
  CHECK(std::abs(sys.beta[0].eval(radial(0.5)) - Complex(1.0)) <= 1e-9);
  CHECK(std::abs(sys.beta[1].eval(radial(0.0)) - Complex(1.0)) <= 1e-9);
  CHECK(std::abs(sys.beta[1].eval(radial(0.5)) - Complex(1.0)) <= 1e-9);
  CHECK(sys.maxCharacterResidual <= 1e-8);

  // gamma_l(a_k) = delta_{lk}.
  CHECK(std::abs(sys.gamma[0].eval(radial(0.0)) - Complex(1.0)) <= 1e-9);
  CHECK(std::abs(sys.gamma[0].eval(radial(0.5))) <= 1e-9);
  CHECK(std::abs(sys.gamma[1].eval(radial(0.5)) - Complex(1.0)) <= 1e-9);
  CHECK(std::abs(sys.gamma[1].eval(radial(0.0))) <= 1e-9);
}

TEST_CASE("delta property on a three point system") {
  DualSystem sys = triple_system();
  REQUIRE(sys.N == 3);
  for (int l = 1; l <= 3; ++l) {
    for (int k = 1; k <= 3; ++k) {
      const Complex v = sys.gamma[l - 1].eval(sys.seq.points[k - 1]);
      const Complex want = (l == k) ? Complex(1.0) : Complex(0.0);
      CHECK(std::abs(v - want) <= 1e-9);
    }
  }
}

TEST_CASE("group indexing wraps modulo N") {
  DualSystem sys = triple_system();
  CHECK(max_coeff_diff(sys.beta_group(0), sys.beta[2]) == 0.0);
  CHECK(max_coeff_diff(sys.beta_group(4), sys.beta[0]) == 0.0);
  CHECK(max_coeff_diff(sys.gamma_group(2), sys.gamma[1]) == 0.0);
}

TEST_CASE("discrete plancherel identity") {
  DualSystem sys = triple_system();
  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const Point z = ball_point(rng, 1, 0.9);
    double lhs = 0.0;
    double rhs = 0.0;
    for (int i = 0; i < sys.N; ++i) {
      lhs += std::norm(sys.gamma[i].eval(z));
      rhs += std::norm(sys.beta[i].eval(z));
    }
    CHECK(close_abs(lhs, rhs / sys.N, 1e-10 * (1.0 + rhs)));
  }
}

TEST_CASE("plancherel identity for radial derivatives") {
  DualSystem sys = pair_system();
  Rng rng(102);
  for (int j = 0; j <= 2; ++j) {
    std::vector<PolyFn> dBeta;
    std::vector<PolyFn> dGamma;
    for (int i = 0; i < sys.N; ++i) {
      dBeta.push_back(sys.beta[i].radial_derivative(j));
      dGamma.push_back(sys.gamma[i].radial_derivative(j));
    }
    for (int t = 0; t < 25; ++t) {
      const Point z = ball_point(rng, 1, 0.9);
      double lhs = 0.0;
      double rhs = 0.0;
      for (int i = 0; i < sys.N; ++i) {
        lhs += std::norm(dGamma[i].eval(z));
        rhs += std::norm(dBeta[i].eval(z));
      }
      CHECK(close_abs(lhs, rhs / sys.N, 1e-9 * (1.0 + rhs)));
    }
  }
}

TEST_CASE("convolution powers transform to gamma powers") {
  // Truncation to the cap is an algebra quotient, so the convolution
  // theorem holds exactly coefficientwise.
  DualSystem sys = pair_system(0.05, 0.1, 10);
  for (int l = 1; l <= 3; ++l) {
    const auto& Ql = convolution_power(sys, l);
    REQUIRE(static_cast<int>(Ql.size()) == sys.N);
    for (int a = 1; a <= sys.N; ++a) {
      PolyFn hat = PolyFn::zero(1, 10);
      for (int k = 0; k < sys.N; ++k) {
        const Complex w = std::polar(
            1.0, -2.0 * std::numbers::pi * double(k * a) / double(sys.N));
        hat = hat.add(Ql[k].scale(w / double(sys.N)));
      }
      PolyFn gpow = PolyFn::constant(1, 10, 1.0);
      for (int i = 0; i < l; ++i) gpow = gpow.mul(sys.gamma[a - 1]);
      CHECK(max_coeff_diff(hat, gpow) <= 1e-10);
    }
  }
}

TEST_CASE("first convolution power is the character family") {
  DualSystem sys = triple_system();
  const auto& Q1 = convolution_power(sys, 1);
  for (int g = 0; g < sys.N; ++g) {
    CHECK(max_coeff_diff(Q1[g], sys.beta_group(g)) <= 1e-14);
  }
}

TEST_CASE("strict convolution reports truncation") {
  DualSystem sys = pair_system();
  CHECK_THROWS_AS(convolution_power(sys, 2, true), ToolkitError);
}

TEST_CASE("node sums of the dual family are one") {
  DualSystem sys = triple_system();
  for (int l = 1; l <= 3; ++l) {
    for (int k = 0; k < sys.N; ++k) {
      double sum = 0.0;
      for (int a = 0; a < sys.N; ++a) {
        sum += std::pow(std::norm(sys.gamma[a].eval(sys.seq.points[k])),
                        double(l));
      }
      CHECK(close_abs(sum, 1.0, 1e-8));
    }
  }
}

TEST_CASE("sampled bound check on the dual family") {
  DualSystem sys = triple_system();
  const Ha0Report rep = ha0_bound_check(sys, 2, 1000, 77);
  CHECK(rep.bound >= 1.0 - 1e-9);
  CHECK(rep.pass);
  CHECK(rep.maxSum <= rep.bound * (1.0 + 1e-9));
}

TEST_CASE("domination split") {
  DualSystem sys = pair_system();
  PolyFn h = PolyFn::constant(1, 12, 1.0);
  h.set_coeff({1}, Complex(0.5, 0.25));
  h.set_coeff({3}, -0.125);

  const DominationReport rep = domination_split(sys, h, 2, 1, 400, 31);
  CHECK(rep.pass);
  CHECK(rep.minSlack >= -1e-12);
  REQUIRE(static_cast<int>(rep.H.size()) == sys.N);

  const PolyFn zero = PolyFn::zero(1, 12);
  const DominationReport zrep = domination_split(sys, zero, 2, 1, 50, 31);
  CHECK(zrep.pass);
  CHECK(close_abs(zrep.minSlack, 0.0, 1e-15));
}

TEST_CASE("single point domination is an equality") {
  const auto seq = PointSeq::make(kDisk, {radial(0.2)});
  DualSystem sys = build_beta(seq, kDisk, 8);
  gamma_dft(sys);
  PolyFn h = PolyFn::constant(1, 8, 1.0);
  h.set_coeff({2}, 0.5);
  const DominationReport rep = domination_split(sys, h, 2, 1, 100, 13);
  CHECK(rep.pass);
  CHECK(std::abs(rep.minSlack) <= 1e-12);
}

TEST_CASE("character residual stays small on random configurations") {
  Rng rng(103);
  for (int t = 0; t < 5; ++t) {
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(ball_point(rng, 1, 0.5));
    PointSeq seq = PointSeq::make(kDisk, pts);
    DualSystem sys = build_beta(seq, kDisk, 12);
    CHECK(sys.maxCharacterResidual <= 1e-8);
  }
}
