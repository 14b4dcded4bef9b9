#include <benchmark/benchmark.h>

#include "momentkit/charfn.hpp"
#include "momentkit/density.hpp"
#include "momentkit/fourier.hpp"
#include "momentkit/hausdorff.hpp"
#include "momentkit/linear_solvers.hpp"
#include "momentkit/named_sequences.hpp"
#include "momentkit/richter.hpp"

using namespace momentkit;

static MomentSequence chi01(int D) { return moments_from_density(DensitySpec::indicator(Box::cube(1, 0, 1)), D); }

static void BM_HausdorffSumExact(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto s = chi01(d);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_sum(s, d));
}
BENCHMARK(BM_HausdorffSumExact)->Arg(16)->Arg(64)->Arg(256);

static void BM_HausdorffSumFloating(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto s = chi01(d).to_floating();
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_sum(s, d));
}
BENCHMARK(BM_HausdorffSumFloating)->Arg(16)->Arg(64)->Arg(256);

static void BM_SignedHausdorff2d(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto s = moments_from_density(DensitySpec::indicator(Box::cube(2, 0, 1)), 2 * d);
  HausdorffOptions opts;
  opts.full_orthant = true;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(signed_hausdorff_test(s, d, opts));
}
BENCHMARK(BM_SignedHausdorff2d)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_CharEval(benchmark::State& state) {
  const CharSeries c(gaussian_cf_sequence(1, static_cast<int>(state.range(0))));
  const double z[] = {2.5};
  for (auto _ : state) benchmark::DoNotOptimize(char_eval(c, z));
}
BENCHMARK(BM_CharEval)->Arg(80)->Arg(160);

static void BM_CharEvalAdaptive(benchmark::State& state) {
  const auto s = gaussian_cf_sequence(1, 160);
  const double z[] = {static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(char_eval_adaptive(s, z, 1e-10));
}
BENCHMARK(BM_CharEvalAdaptive)->Arg(1)->Arg(2)->Arg(3);

static void BM_ReconstructGaussian(benchmark::State& state) {
  const auto s = gaussian_cf_sequence(1, 80);
  const auto grid = linear_grid(-4.0, 4.0, 0.1);
  ReconstructionOptions opts;
  opts.R = 3.0;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_density(s, grid, opts));
}
BENCHMARK(BM_ReconstructGaussian)->Unit(benchmark::kMicrosecond);

static void BM_LevyDirac(benchmark::State& state) {
  const auto s = dirac_sequence({1}, 700);
  LevyOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(levy_interval_mass(s, 0.5, 1.5, static_cast<double>(state.range(0)), opts));
}
BENCHMARK(BM_LevyDirac)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_SimplexOnGrid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseRows A(3, std::vector<double>(n));
  std::vector<double> cost(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    A[0][i] = 1.0;
    A[1][i] = x;
    A[2][i] = x * x;
  }
  const std::vector<double> b{1.0, 0.5, 1.0 / 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(simplex_solve(A, b, cost));
}
BENCHMARK(BM_SimplexOnGrid)->Arg(51)->Arg(201)->Arg(801);

static void BM_AtomicDecompose(benchmark::State& state) {
  const auto L = discontinuous_example();
  const auto grid = make_candidate_grid(L);
  for (auto _ : state) benchmark::DoNotOptimize(atomic_decompose(L, grid));
}
BENCHMARK(BM_AtomicDecompose)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
