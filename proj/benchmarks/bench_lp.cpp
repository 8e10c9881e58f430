#include <benchmark/benchmark.h>

#include "tripmatch/fluid.hpp"
#include "tripmatch/harness/generators.hpp"
#include "tripmatch/pricing.hpp"

using namespace tripmatch;

namespace {

FluidInstance line_instance(int L, int T) {
  FluidParams p;
  p.waiting_window = T;
  return make_fluid_instance(harness::gen_example1(L, L / 2, 0.1).geometry, p);
}

FluidInstance grid_instance(int n, int T) {
  harness::Example2Options o;
  o.type_count = n;
  o.trip_length = 40;
  o.edge_length = 4;
  FluidParams p;
  p.waiting_window = T;
  return make_fluid_instance(harness::gen_example2(o).geometry, p);
}

void BM_SolveCbLine(benchmark::State& state) {
  const auto inst = line_instance(int(state.range(0)), int(state.range(1)));
  const auto layout = std::make_shared<const CbLayout>(inst);
  const std::vector<double> lambda(inst.type_count(), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cb(inst, layout, lambda).cost);
  state.counters["vars"] = double(layout->variable_count());
}
BENCHMARK(BM_SolveCbLine)->Args({40, 0})->Args({40, 5})->Args({100, 0})->Args({100, 5})->Unit(benchmark::kMillisecond);

void BM_SolveCbGrid(benchmark::State& state) {
  const auto inst = grid_instance(int(state.range(0)), 5);
  const auto layout = std::make_shared<const CbLayout>(inst);
  const std::vector<double> lambda(inst.type_count(), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cb(inst, layout, lambda).cost);
  state.counters["vars"] = double(layout->variable_count());
}
BENCHMARK(BM_SolveCbGrid)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PriceLine(benchmark::State& state) {
  const auto inst = line_instance(40, int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mm_optimize(inst).profit);
}
BENCHMARK(BM_PriceLine)->Arg(0)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
