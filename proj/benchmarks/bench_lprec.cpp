#include <benchmark/benchmark.h>

#include <vector>

#include "lprec/decode.hpp"
#include "lprec/ensembles.hpp"
#include "lprec/metrics.hpp"
#include "lprec/pconvex.hpp"
#include "lprec/rip.hpp"
#include "lprec/rng.hpp"
#include "lprec/types.hpp"

namespace {

using namespace lprec;

Vector random_vector(Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.next_gaussian();
  return v;
}

void BM_Quasinorm(benchmark::State& state) {
  const Vector v = random_vector(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quasinorm(v, 0.5));
  }
}
BENCHMARK(BM_Quasinorm)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SmoothedGradient(benchmark::State& state) {
  const Vector v = random_vector(state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smoothed_gradient(v, 1e-3, 0.5));
  }
}
BENCHMARK(BM_SmoothedGradient)->Arg(100)->Arg(1000)->Arg(10000);

void BM_AffineProject(benchmark::State& state) {
  const Index M = state.range(0);
  const Index N = 3 * M;
  const MeasurementMatrix A = gen_gaussian(M, N, 3);
  const AffineProjector proj(A);
  const Vector b = A.entries * random_vector(N, 4);
  const Vector z = random_vector(N, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(proj.project(z, b));
  }
}
BENCHMARK(BM_AffineProject)->Arg(25)->Arg(50)->Arg(100);

void BM_DecodeLp(benchmark::State& state) {
  const Index M = state.range(0);
  const Index N = 2 * M;
  const MeasurementMatrix A = gen_gaussian(M, N, 6);
  const Vector x = gen_sparse_signal(N, M / 5, 7);
  const Vector b = A.entries * x;
  SolveOptions opts;
  opts.p = 0.5;
  opts.eps_min = 1e-6;
  opts.max_inner = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_lp(A, b, opts));
  }
}
BENCHMARK(BM_DecodeLp)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RipMc(benchmark::State& state) {
  const MeasurementMatrix A = gen_gaussian(20, 60, 8);
  const std::uint64_t trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rip_delta_mc(A, 4, trials, 9, 1));
  }
}
BENCHMARK(BM_RipMc)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BalanceSigns(benchmark::State& state) {
  const Index n = state.range(0);
  std::vector<Vector> pts;
  for (Index i = 0; i < n; ++i) pts.push_back(random_vector(32, 10 + i));
  for (auto _ : state) {
    benchmark::DoNotOptimize(balance_signs(pts));
  }
}
BENCHMARK(BM_BalanceSigns)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
