#include <benchmark/benchmark.h>

#include "crn/parser.hpp"
#include "crn/ssa.hpp"

namespace {

void BM_OccupancyPoisson(benchmark::State& state) {
  auto sys = crn::parse_network("0 <-> A : 1, 1\n");
  crn::SsaConfig cfg;
  cfg.seed = 7;
  cfg.t_end = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(crn::occupancy_measure(sys, crn::DiscreteState{{0}}, cfg));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));  // about two jumps per unit time
}
BENCHMARK(BM_OccupancyPoisson)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_PooledReplicas(benchmark::State& state) {
  auto sys = crn::parse_network(
      "3A <-> 2A + B : 2, 1\n2A + B <-> 3B : 2, 1\n3B <-> A + 2B : 2, 1\nA + 2B <-> 3A : 2, 1\n");
  crn::SsaConfig cfg;
  cfg.seed = 11;
  cfg.t_end = 10.0;
  const auto replicas = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(crn::pooled_occupancy(sys, crn::DiscreteState{{10, 10}}, cfg, replicas));
  }
}
BENCHMARK(BM_PooledReplicas)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
