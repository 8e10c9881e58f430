#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tripmatch/fluid.hpp"
#include "tripmatch/metrics.hpp"
#include "tripmatch/policy.hpp"

namespace tripmatch {

struct SimulationConfig {
  PolicyKind policy = PolicyKind::kCombined;
  std::int64_t periods = 100000;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  double period_minutes = 1.0;  // reporting only
  bool record_events = false;
  PolicyOptions policy_options;
  unsigned threads = 0;  // 0 picks the hardware concurrency
};

// Outcome of one period's random draw.
struct ArrivalDraw {
  int type = -1;  // -1: nobody requested
  bool converted = false;
};

struct SystemState {
  std::int64_t period = 0;
  std::vector<ActiveRider> riders;  // ascending clock
};

// One replication. The instance's compat table and T define the state space;
// the policy picks the matching rule: on_trip uses the single-arrival rule,
// pre_trip and combined solve the per-period matching problem.
class Simulator {
 public:
  Simulator(const FluidInstance& instance, std::span<const double> lambda, DualTables duals,
            PolicyKind policy, const PolicyOptions& options = {}, bool record_events = false);

  ArrivalDraw draw(std::mt19937_64& rng) const;

  // Arrival and conversion, matching, then the clock advance.
  void advance_period(const ArrivalDraw& draw);

  // Accounts for riders still active; call once after the last period.
  void finish();

  const SystemState& state() const noexcept { return state_; }
  const RunTotals& totals() const noexcept { return totals_; }
  const EventLog& log() const noexcept { return log_; }

 private:
  void record(const Event& e);
  void match(std::size_t earlier, std::size_t later);
  void apply_matching(std::optional<std::size_t> arrival_index);
  void check_distinct_clocks() const;

  const FluidInstance& instance_;
  std::vector<double> lambda_;
  std::vector<double> cumulative_;  // cumulative arrival probabilities
  std::vector<double> prices_;
  std::vector<double> fares_;
  DualTables duals_;
  PolicyKind policy_;
  PolicyOptions options_;
  bool record_events_;
  int window_ = 0;
  SystemState state_;
  RunTotals totals_;
  EventLog log_;
  std::vector<char> removed_;
  mutable std::vector<char> clock_seen_;
};

struct ReplicationResult {
  RunMetrics metrics;
  EventLog log;  // empty unless events were recorded
};

struct SimulationResult {
  std::vector<ReplicationResult> replications;
  std::vector<MetricStat> summary;

  std::vector<RunMetrics> runs() const;
};

// Replication r draws from mt19937_64 seeded with seed_seq{seed, r}.
SimulationResult run_simulation(const FluidInstance& instance, std::span<const double> lambda,
                                const DualTables& duals, const SimulationConfig& config);

}  // namespace tripmatch
