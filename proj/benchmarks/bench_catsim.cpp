#include <benchmark/benchmark.h>

#include "catsim/fockoracle.hpp"
#include "catsim/measure.hpp"
#include "catsim/metrology.hpp"
#include "catsim/optics.hpp"
#include "catsim/qgates.hpp"

using namespace catsim;

namespace {

// Two GHZ cats side by side: 4 terms over 2N modes.
CoherentSuperposition wide_state(int N) {
  auto s = ghz_cat(2.0, N);
  return tensor(s, s);
}

void BM_InnerProduct(benchmark::State& st) {
  const auto s = wide_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(inner_product(s, s));
}
BENCHMARK(BM_InnerProduct)->Arg(1)->Arg(4)->Arg(16);

void BM_GramMatrix(benchmark::State& st) {
  auto s = cat(1.5, 1);
  for (int k = 1; k < st.range(0); ++k) s = tensor(s, cat(1.0 + 0.1 * k, 1));
  for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(s));
  st.counters["terms"] = static_cast<double>(s.terms().size());
}
BENCHMARK(BM_GramMatrix)->DenseRange(1, 5);

void BM_Beamsplitter(benchmark::State& st) {
  const auto s = bell_cat_resource(2.0);
  for (auto _ : st) benchmark::DoNotOptimize(beamsplitter(s, {0, 1, 0.3}));
}
BENCHMARK(BM_Beamsplitter);

void BM_BellOutcomes(benchmark::State& st) {
  const auto s = bell_cat(static_cast<double>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(bell_outcomes(s, 0, 1));
}
BENCHMARK(BM_BellOutcomes)->Arg(1)->Arg(2)->Arg(3);

void BM_ToFock(benchmark::State& st) {
  const auto s = bell_cat(static_cast<double>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(fock::to_fock(s));
}
BENCHMARK(BM_ToFock)->Arg(1)->Arg(2)->Arg(3);

void BM_FockBeamsplitter(benchmark::State& st) {
  const auto v = fock::to_fock(bell_cat(static_cast<double>(st.range(0)), 1));
  for (auto _ : st) benchmark::DoNotOptimize(fock::fock_beamsplitter(v, 0, 1, 0.3));
}
BENCHMARK(BM_FockBeamsplitter)->Arg(1)->Arg(2)->Arg(3);

void BM_EntanglingChannel(benchmark::State& st) {
  const double a = 2.5;
  for (auto _ : st) benchmark::DoNotOptimize(entangling_channel(a, 0.01 / (a * a)));
}
BENCHMARK(BM_EntanglingChannel)->Unit(benchmark::kMillisecond);

void BM_WeakForceParity(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(weak_force_parity(3.0, N, 0.05));
}
BENCHMARK(BM_WeakForceParity)->Arg(1)->Arg(4)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
