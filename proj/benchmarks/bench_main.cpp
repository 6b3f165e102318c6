#include "equidist/certifier.hpp"
#include "equidist/diophantine.hpp"
#include "equidist/discrepancy.hpp"
#include "equidist/weyl.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace equidist;

namespace {

std::vector<double> uniform_points(std::size_t m) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(0, 1);
  std::vector<double> v(m);
  for (double& x : v) x = dist(rng);
  return v;
}

void BM_DiscrepancyFast(benchmark::State& state) {
  const auto v = uniform_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extreme_discrepancy(v).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscrepancyFast)->RangeMultiplier(10)->Range(100, 1000000);

void BM_DiscrepancyOracle(benchmark::State& state) {
  const auto v = uniform_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extreme_discrepancy_oracle(v).value);
}
BENCHMARK(BM_DiscrepancyOracle)->RangeMultiplier(4)->Range(16, 1024);

void BM_DiscrepancyStreamed(benchmark::State& state) {
  const auto seq = make_sequence(SequenceSpec::quadratic("0.490082", "9e-13"));
  StreamOptions opts;
  opts.memory_points = std::size_t{1} << 20;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extreme_discrepancy_streamed(sequence_points(*seq, 1, 1, n), opts).value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscrepancyStreamed)->Arg(1 << 20)->Arg(1 << 23)->Unit(benchmark::kMillisecond);

void BM_GenerateFractionalPower(benchmark::State& state) {
  const auto seq = make_sequence(SequenceSpec::power(1.5));
  for (auto _ : state) benchmark::DoNotOptimize(generate_fractional(*seq, 1, state.range(0)).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateFractionalPower)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Convergents(benchmark::State& state) {
  const auto theta = RealExpr::parse("pi");
  for (auto _ : state) benchmark::DoNotOptimize(convergents(theta, Index(1) << 50).size());
}
BENCHMARK(BM_Convergents);

void BM_SelectConvergent(benchmark::State& state) {
  const auto theta = RealExpr::parse("sqrt2");
  for (auto _ : state) benchmark::DoNotOptimize(select_convergent(theta, 0.05).q);
}
BENCHMARK(BM_SelectConvergent);

void BM_WeylProfile(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_profile(SequenceSpec::log(), 4, {1000, 10000, 100000}).size());
  }
}
BENCHMARK(BM_WeylProfile)->Unit(benchmark::kMillisecond);

void BM_BuildSegmentCase1(benchmark::State& state) {
  const Index n = Index(1000000000000000LL) * Index(10000000000000000LL);
  const auto seq = make_sequence(SequenceSpec::power(1.5));
  for (auto _ : state) benchmark::DoNotOptimize(build_segment(*seq, n, 0.05).measured_D);
}
BENCHMARK(BM_BuildSegmentCase1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
