#include <benchmark/benchmark.h>

#include <random>

#include "hecke/discdyn.hpp"
#include "hecke/padic.hpp"
#include "hecke/qform.hpp"
#include "hecke/ssgraph.hpp"

namespace {

using namespace hecke;

void BM_BuildSSGraph(benchmark::State& state) {
  const auto p = static_cast<ssgraph::u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ssgraph::build_ssgraph(p, 3, 1));
}
BENCHMARK(BM_BuildSSGraph)->Arg(11)->Arg(23)->Arg(37)->Unit(benchmark::kMillisecond);

void BM_BuildSSGraphLevel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ssgraph::build_ssgraph(11, 3, 4));
}
BENCHMARK(BM_BuildSSGraphLevel)->Unit(benchmark::kMillisecond);

void BM_WalkCharPoly(benchmark::State& state) {
  const auto g = ssgraph::build_ssgraph(11, 3, 1);
  const auto walks = ssgraph::closed_walks(g, 0, 3);
  for (auto _ : state)
    for (const auto& w : walks) benchmark::DoNotOptimize(ssgraph::walk_char_poly(g, 0, w));
  state.SetItemsProcessed(static_cast<long>(state.iterations() * walks.size()));
}
BENCHMARK(BM_WalkCharPoly)->Unit(benchmark::kMillisecond);

void BM_Log1pExp(benchmark::State& state) {
  const int precision = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const auto t = padic::Zp::random(5, precision, rng) * 5;
  for (auto _ : state) benchmark::DoNotOptimize(padic::exp(padic::log1p(t)));
}
BENCHMARK(BM_Log1pExp)->Arg(24)->Arg(64)->Arg(128);

void BM_MobiusApply(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const auto x = padic::Wq::random(11, 24, rng).scaled(padic::Zp::from_int(11, 24, 11));
  const auto w = discdyn::transitivity_witness(x, 5);
  const auto w0 = padic::Wq::from_ints(11, 24, 0, 11);
  for (auto _ : state) benchmark::DoNotOptimize(discdyn::mobius_apply(w.gamma, w0));
}
BENCHMARK(BM_MobiusApply);

void BM_RandomWalk(benchmark::State& state) {
  const auto g = ssgraph::build_ssgraph(11, 5, 1);
  const auto gens = discdyn::hecke_generators(g, 2, 24);
  const auto x0 = padic::Wq::from_ints(11, 24, 0, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(discdyn::random_walk(gens, x0, static_cast<std::uint64_t>(state.range(0)), 1));
}
BENCHMARK(BM_RandomWalk)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_ClassGroup(benchmark::State& state) {
  const mpz_class disc(-state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qform::class_group(disc));
}
BENCHMARK(BM_ClassGroup)->Arg(23)->Arg(40'028)->Arg(400'004)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
