// Microbenchmarks for the hot paths: quotient-ring products, Gram assembly,
// Monte Carlo norms, dual-system construction, rational tables.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <vector>

#include "hsball/hsball.hpp"

namespace {

using namespace hsball;

PolyFn dense_poly(uint64_t seed, int n, int deg, int cap) {
  Rng rng(seed);
  PolyFn f(n, cap);
  for (const auto& alpha : all_multi_indices(n, deg)) {
    f.set_coeff(alpha, rng.complex_normal());
  }
  return f;
}

PointSeq disc_seq(const SpaceParams& params, size_t count) {
  std::vector<Point> pts;
  Rng rng(31);
  for (size_t i = 0; i < count; ++i) {
    pts.push_back(ball_point(rng, params.n, 0.5));
  }
  return PointSeq::make(params, pts);
}

void BM_PolyMul(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int cap = static_cast<int>(state.range(1));
  const PolyFn f = dense_poly(1, n, cap / 2, cap);
  const PolyFn g = dense_poly(2, n, cap / 2, cap);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.mul(g));
  }
}
BENCHMARK(BM_PolyMul)->Args({1, 16})->Args({2, 12})->Args({3, 8});

void BM_GramExact(benchmark::State& state) {
  const SpaceParams params = SpaceParams::make(2, 0.5, 2.0);
  const PointSeq seq = disc_seq(params, static_cast<size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram(seq, KernelConvention::Exact, 12));
  }
}
BENCHMARK(BM_GramExact)->Arg(4)->Arg(8);

void BM_McNorm(benchmark::State& state) {
  const SpaceParams params = SpaceParams::make(1, 0.2, 3.0);
  const PolyFn f = dense_poly(3, 1, 8, 12);
  QuadratureSpec quad;
  quad.mode = QuadMode::MonteCarlo;
  quad.sampleCount = state.range(0);
  quad.relStderrTol = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsp_norm(f, params, quad));
  }
}
BENCHMARK(BM_McNorm)->Arg(10000)->Arg(50000);

void BM_DualSystem(benchmark::State& state) {
  const SpaceParams params = SpaceParams::make(1, 0.0, 2.0);
  const PointSeq seq = disc_seq(params, static_cast<size_t>(state.range(0)));
  for (auto _ : state) {
    DualSystem sys = build_beta(seq, params, 12);
    gamma_dft(sys);
    benchmark::DoNotOptimize(sys);
  }
}
BENCHMARK(BM_DualSystem)->Arg(3)->Arg(6);

void BM_CoeffTable(benchmark::State& state) {
  const int jMax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_coeff_table(jMax, 8));
  }
}
BENCHMARK(BM_CoeffTable)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
