#include <benchmark/benchmark.h>

#include "crn/parser.hpp"
#include "crn/stoch.hpp"

namespace {

// Square network on the simplex x_A + x_B = n: a path of n + 1 states.
void BM_StationarySquare(benchmark::State& state) {
  auto sys = crn::parse_network(
      "3A <-> 2A + B : 2, 1\n2A + B <-> 3B : 2, 1\n3B <-> A + 2B : 2, 1\nA + 2B <-> 3A : 2, 1\n");
  const auto n = state.range(0);
  auto comp = crn::communicating_class(sys, crn::DiscreteState{{n, 0}}, crn::Box::cube(2, n));
  for (auto _ : state) benchmark::DoNotOptimize(crn::stationary_distribution(sys, comp));
  state.counters["states"] = static_cast<double>(comp.states.size());
}
BENCHMARK(BM_StationarySquare)->RangeMultiplier(4)->Range(64, 16384)->Unit(benchmark::kMillisecond);

// Two open species on a box: banded elimination in two dimensions.
void BM_StationaryOpenBox(benchmark::State& state) {
  auto sys = crn::parse_network("0 <-> A : 3, 1\n0 <-> B : 2, 1\nA <-> B : 1, 1\n");
  const auto n = state.range(0);
  const auto box = crn::Box::cube(2, n);
  auto comp = crn::communicating_class(sys, crn::DiscreteState{{0, 0}}, box);
  crn::StationaryOptions opts;
  opts.allow_truncated = true;
  for (auto _ : state) benchmark::DoNotOptimize(crn::stationary_distribution(sys, comp, opts));
  state.counters["states"] = static_cast<double>(comp.states.size());
}
BENCHMARK(BM_StationaryOpenBox)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_CommunicatingClass(benchmark::State& state) {
  auto sys = crn::parse_network("0 <-> A : 3, 1\n0 <-> B : 2, 1\nA <-> B : 1, 1\n");
  const auto n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crn::communicating_class(sys, crn::DiscreteState{{0, 0}}, crn::Box::cube(2, n)));
  }
}
BENCHMARK(BM_CommunicatingClass)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

}  // namespace
