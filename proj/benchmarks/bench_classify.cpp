#include <benchmark/benchmark.h>

#include <string>

#include "crn/detbal.hpp"
#include "crn/graph.hpp"
#include "crn/parser.hpp"
#include "crn/stoch.hpp"

namespace {

// Complete graph on the complexes kA + (n-k)B, k = 0..n.
crn::MassActionSystem complete_network(int n) {
  auto complex = [&](int k) {
    std::string s;
    if (k > 0) s += (k > 1 ? std::to_string(k) : "") + "A";
    if (n - k > 0) s += std::string(k > 0 ? " + " : "") + (n - k > 1 ? std::to_string(n - k) : "") + "B";
    return s;
  };
  std::string text;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) text += complex(i) + " <-> " + complex(j) + " : 1, 2\n";
  }
  return crn::parse_network(text);
}

void BM_SimpleCycles(benchmark::State& state) {
  auto sys = complete_network(static_cast<int>(state.range(0)));
  std::size_t count = 0;
  for (auto _ : state) {
    auto cycles = crn::simple_cycles(sys.network());
    count = cycles.size();
    benchmark::DoNotOptimize(cycles);
  }
  state.counters["cycles"] = static_cast<double>(count);
}
BENCHMARK(BM_SimpleCycles)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_ClassifyState(benchmark::State& state) {
  auto sys = complete_network(static_cast<int>(state.range(0)));
  const auto structure = crn::BalanceStructure::of(sys.network());
  const crn::DetState c{{1.3, 0.7}};
  for (auto _ : state) benchmark::DoNotOptimize(crn::classify_state(sys, structure, c));
}
BENCHMARK(BM_ClassifyState)->DenseRange(3, 6);

void BM_ClassifyMeasure(benchmark::State& state) {
  auto sys = crn::parse_network(
      "3A <-> 2A + B : 2, 1\n2A + B <-> 3B : 2, 1\n3B <-> A + 2B : 2, 1\nA + 2B <-> 3A : 2, 1\n");
  const auto n = state.range(0);
  auto comp = crn::communicating_class(sys, crn::DiscreteState{{n, 0}}, crn::Box::cube(2, n));
  const auto pi = crn::stationary_distribution(sys, comp);
  for (auto _ : state) benchmark::DoNotOptimize(crn::classify_exact_measure(sys, pi));
}
BENCHMARK(BM_ClassifyMeasure)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_SolveComplexBalanced(benchmark::State& state) {
  auto sys = complete_network(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(crn::solve_complex_balanced(sys));
}
BENCHMARK(BM_SolveComplexBalanced)->DenseRange(3, 6);

void BM_SolveRvb(benchmark::State& state) {
  auto sys = crn::parse_network("0 <-> A : 6, 11\n2A <-> 3A : 6, 1\n");
  for (auto _ : state) benchmark::DoNotOptimize(crn::solve_rvb(sys));
}
BENCHMARK(BM_SolveRvb)->Unit(benchmark::kMillisecond);

}  // namespace
