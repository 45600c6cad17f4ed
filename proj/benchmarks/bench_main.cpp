#include <benchmark/benchmark.h>

#include <numbers>

#include "bellforge/catalog.hpp"
#include "bellforge/csderive.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/qviolation.hpp"

using namespace bellforge;

namespace {

void BM_EnumerateRoots(benchmark::State& state) {
  const auto p = catalog::mabk(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lhv::enumerate_roots(p));
  state.SetItemsProcessed(state.iterations() * (std::int64_t(1) << (2 * state.range(0))));
}
BENCHMARK(BM_EnumerateRoots)->DenseRange(2, 5);

void BM_EnumerateRootsNaive(benchmark::State& state) {
  const auto p = to_extended(catalog::i42());
  for (auto _ : state) benchmark::DoNotOptimize(lhv::enumerate_roots_naive(p));
}
BENCHMARK(BM_EnumerateRootsNaive);

void BM_EnumerateRootsGray(benchmark::State& state) {
  const auto p = catalog::i42();
  for (auto _ : state) benchmark::DoNotOptimize(lhv::enumerate_roots(p));
}
BENCHMARK(BM_EnumerateRootsGray);

void BM_IsTight(benchmark::State& state) {
  const auto p = catalog::i42();
  for (auto _ : state) benchmark::DoNotOptimize(lhv::is_tight(p, 1));
}
BENCHMARK(BM_IsTight)->Unit(benchmark::kMillisecond);

void BM_Multiply(benchmark::State& state) {
  const auto p = to_extended(catalog::mabk(4));
  for (auto _ : state) benchmark::DoNotOptimize(multiply(p, p));
}
BENCHMARK(BM_Multiply);

void BM_BuildConstraints(benchmark::State& state) {
  const auto a = derive::Ansatz::full(Scenario(2, 2));
  for (auto _ : state) benchmark::DoNotOptimize(derive::build_constraints(a));
}
BENCHMARK(BM_BuildConstraints);

void BM_Seesaw(benchmark::State& state) {
  const auto p = catalog::i42();
  const auto psi = quantum::ghz(4, std::numbers::pi / 4);
  quantum::SeesawOptions o;
  o.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quantum::seesaw_settings(p, psi, o));
}
BENCHMARK(BM_Seesaw)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SeesawGlobal(benchmark::State& state) {
  quantum::SeesawOptions o;
  o.restarts = 5;
  for (auto _ : state) benchmark::DoNotOptimize(quantum::seesaw_global(catalog::i33(), o));
}
BENCHMARK(BM_SeesawGlobal)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
