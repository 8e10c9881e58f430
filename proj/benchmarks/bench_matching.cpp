#include <benchmark/benchmark.h>

#include <random>

#include "tripmatch/matching.hpp"

using namespace tripmatch;

namespace {

std::vector<WeightedEdge> random_edges(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> w(-10.0, 2.0);
  std::vector<WeightedEdge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (keep(rng)) edges.push_back({a, b, w(rng)});
    }
  }
  return edges;
}

void BM_ExactMatching(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto edges = random_edges(n, 0.3, 42);
  for (auto _ : state) benchmark::DoNotOptimize(exact_matching(std::size_t(n), edges).weight);
  state.counters["edges"] = double(edges.size());
}
BENCHMARK(BM_ExactMatching)->DenseRange(4, 16, 4)->Unit(benchmark::kMicrosecond);

}  // namespace
