#include <benchmark/benchmark.h>

#include "retra/cog.hpp"
#include "retra/homology.hpp"

using namespace retra;

namespace {

PermGroup z2() { return PermGroup(2, {Perm::from_cycles("(0 1)", 2)}); }

std::vector<PermGroup> z2_sides(int dim) { return std::vector<PermGroup>(static_cast<std::size_t>(dim) + 1, z2()); }

void BM_DihedralRetraProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(retra_product(1, z2_sides(1), n).ext.top().order());
}
BENCHMARK(BM_DihedralRetraProduct)->DenseRange(1, 5);

void BM_TriangleRetraProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(retra_product(2, z2_sides(2), n).ext.top().order());
}
BENCHMARK(BM_TriangleRetraProduct)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_TriangleDevelopmentLargeness(benchmark::State& state) {
  RetraProduct rp = retra_product(2, z2_sides(2), 2);
  Development d = development(rp.ext);
  for (auto _ : state) benchmark::DoNotOptimize(is_k_large(d.complex, 6).holds);
}
BENCHMARK(BM_TriangleDevelopmentLargeness)->Unit(benchmark::kMillisecond);

void BM_DevelopmentBetti(benchmark::State& state) {
  RetraProduct rp = retra_product(2, z2_sides(2), static_cast<int>(state.range(0)));
  Development d = development(rp.ext);
  for (auto _ : state) benchmark::DoNotOptimize(reduced_betti(d.complex, 2));
}
BENCHMARK(BM_DevelopmentBetti)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_SchreierSims(benchmark::State& state) {
  RetraProduct rp = retra_product(2, z2_sides(2), 2);
  const PermGroup& top = rp.ext.top();
  for (auto _ : state) benchmark::DoNotOptimize(PermGroup(top.degree(), top.generators()).order());
}
BENCHMARK(BM_SchreierSims)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
