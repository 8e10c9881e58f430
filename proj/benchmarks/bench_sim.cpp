#include <benchmark/benchmark.h>

#include "tripmatch/harness/generators.hpp"
#include "tripmatch/pricing.hpp"
#include "tripmatch/sim.hpp"

using namespace tripmatch;

namespace {

void BM_SimulateLine(benchmark::State& state) {
  const auto policy = static_cast<PolicyKind>(state.range(0));
  FluidParams base;
  base.waiting_window = 5;
  const auto inst = make_fluid_instance(harness::gen_example1(40, 20, 0.1).geometry,
                                        params_for_policy(policy, base));
  const auto priced = mm_optimize(inst);
  const DualTables duals = DualTables::from_solution(priced.solution);
  SimulationConfig cfg;
  cfg.policy = policy;
  cfg.periods = 100'000;
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(inst, priced.lambda, duals, cfg).summary.size());
  }
  state.SetItemsProcessed(state.iterations() * cfg.periods);
  state.SetLabel(to_string(policy));
}
BENCHMARK(BM_SimulateLine)
    ->Arg(int(PolicyKind::kPreTrip))
    ->Arg(int(PolicyKind::kOnTrip))
    ->Arg(int(PolicyKind::kCombined))
    ->Unit(benchmark::kMillisecond);

}  // namespace
