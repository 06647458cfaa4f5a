#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "xg/constructions.hpp"
#include "xg/exact.hpp"
#include "xg/game.hpp"
#include "xg/rng.hpp"
#include "xg/search.hpp"

namespace {

xg::XorGame random_game(int n, std::uint64_t seed) {
  xg::Rng rng(seed);
  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n);
  for (auto& s : f) s = static_cast<std::int8_t>(rng.sign());
  std::vector<double> pi(static_cast<std::size_t>(n) * n,
                         1.0 / (static_cast<double>(n) * n));
  return xg::XorGame::build(n, std::move(f), std::move(pi));
}

void bm_classical_value(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const xg::XorGame g = random_game(n, 7);
  xg::ExactOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(xg::classical_value(g, opt).value);
  state.SetComplexityN(n);
}

void bm_block_value_table(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const xg::XorGame g = random_game(n, 11);
  xg::ExactOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(xg::block_value_table(g, opt).value.size());
}

void bm_one_way_dp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int c = static_cast<int>(state.range(1));
  const xg::XorGame g = random_game(n, 13);
  xg::ExactOptions opt;
  opt.threads = 1;
  const xg::BlockValueTable table = xg::block_value_table(g, opt);
  for (auto _ : state) benchmark::DoNotOptimize(xg::one_way_value(g, c, table, opt).value);
}

void bm_hill_climb(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const xg::XorGame g = random_game(n, 17);
  xg::SearchParams params;
  params.restarts = 8;
  params.seed = 5;
  params.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(xg::hill_climb_classical(g, params).value);
}

void bm_sample_stable(benchmark::State& state) {
  const std::int64_t count = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(xg::sample_stable(1.5, count, 23).size());
  state.SetItemsProcessed(state.iterations() * count);
}

void bm_apply_embedding(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  const xg::EmbeddingSpec emb = xg::stable_embedding(64, rows, 1.5, 29, 1);
  std::vector<double> x(64);
  xg::Rng rng(31);
  for (auto& v : x) v = rng.gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(xg::apply_embedding(emb, x)[0]);
}

}  // namespace

BENCHMARK(bm_classical_value)->DenseRange(10, 20, 2)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNLogN);
BENCHMARK(bm_block_value_table)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_one_way_dp)->Args({12, 1})->Args({12, 2})->Args({12, 3})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_hill_climb)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sample_stable)->Arg(100000);
BENCHMARK(bm_apply_embedding)->Arg(1024)->Arg(8192);

BENCHMARK_MAIN();
