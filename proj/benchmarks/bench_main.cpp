#include <benchmark/benchmark.h>

#include "almostsq/almost_square.hpp"
#include "almostsq/exact_arith.hpp"
#include "almostsq/exp_sums.hpp"
#include "almostsq/gap_experiments.hpp"

using namespace almostsq;

static void BM_Isqrt(benchmark::State& state) {
  const BigNat m = pow10(static_cast<unsigned>(state.range(0))) + BigNat(12345);
  for (auto _ : state) benchmark::DoNotOptimize(isqrt(m));
}
BENCHMARK(BM_Isqrt)->Arg(18)->Arg(60)->Arg(400);

static void BM_SqrtDistLt(benchmark::State& state) {
  const BigNat m = pow10(40) + BigNat(987654321);
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_dist_lt(m, BigNat(1), BigNat(1000)));
}
BENCHMARK(BM_SqrtDistLt);

static void BM_BruteForceNearest(benchmark::State& state) {
  const BigNat x(static_cast<std::uint64_t>(state.range(0)) + 7);
  const SearchWindow w = search_window(x, Rational(1, 4), Rational(2));
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_nearest(x, w, workers));
}
BENCHMARK(BM_BruteForceNearest)->Args({1'000'000, 1})->Args({100'000'000, 1})->Args({100'000'000, 4});

static void BM_DSearch(benchmark::State& state) {
  const BigNat x(static_cast<std::uint64_t>(state.range(0)) + 7);
  const BigNat d_hi(static_cast<std::uint64_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(d_search(x, BigNat(0), d_hi));
}
BENCHMARK(BM_DSearch)->Args({100'000'000, 200})->Args({1'000'000'000'000, 2000});

static void BM_GaussSum(benchmark::State& state) {
  const auto q = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_sum(1, 0, q));
}
BENCHMARK(BM_GaussSum)->Arg(301)->Arg(100'003);

static void BM_SalieSum(benchmark::State& state) {
  const auto q = static_cast<std::int64_t>(state.range(0));
  const ExpSumQuery query{1, q, static_cast<double>(q), static_cast<double>(q), 0.3, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(salie_sum(query));
}
BENCHMARK(BM_SalieSum)->Arg(199)->Arg(1009);

static void BM_TwoSquaresSieve(benchmark::State& state) {
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(two_squares_sieve(10'000'000, workers));
}
BENCHMARK(BM_TwoSquaresSieve)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_MultTableCount(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mult_table_count(n));
}
BENCHMARK(BM_MultTableCount)->Arg(100)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
