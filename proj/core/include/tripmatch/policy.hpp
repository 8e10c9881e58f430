#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tripmatch/fluid.hpp"
#include "tripmatch/matching.hpp"

namespace tripmatch {

enum class PolicyKind { kPreTrip, kOnTrip, kCombined };

const char* to_string(PolicyKind kind);
// Accepts pre_trip, on_trip, combined. Throws InvalidArgument otherwise.
PolicyKind parse_policy(const std::string& name);

// Fluid flags for a policy: pre-trip disables on-trip states, on-trip forces
// T = 0, combined keeps both.
FluidParams params_for_policy(PolicyKind kind, FluidParams base);

// gamma per type and xi per state, with xi(i, -T) = gamma_i.
class DualTables {
 public:
  DualTables() = default;
  // xi[i] holds clocks -T .. l_i - 1; xi[i][0] must equal gamma[i].
  DualTables(int waiting_window, std::vector<double> gamma, std::vector<std::vector<double>> xi);

  static DualTables from_solution(const FluidSolution& solution);

  int waiting_window() const noexcept { return window_; }
  std::size_t type_count() const noexcept { return gamma_.size(); }
  double gamma(int type) const { return gamma_.at(static_cast<std::size_t>(type)); }
  double xi(int type, int clock) const;

 private:
  int window_ = 0;
  std::vector<double> gamma_;
  std::vector<std::vector<double>> xi_;
};

struct ActiveRider {
  int type = 0;
  int clock = 0;
  std::int64_t arrival_period = 0;
};

struct PolicyOptions {
  // Generalised costs up to this value count as profitable.
  double decision_tol = 1e-7;
  std::size_t max_matching_riders = 64;
};

struct OnTripChoice {
  std::size_t rider = 0;  // index into the active list
  double cost = 0.0;      // c l - xi
};

// Single-arrival rule: the cheapest compatible occupied state, kept when
// gamma_i covers its generalised cost. Ties go to the smaller clock, then the
// smaller type. nullopt means ride solo.
std::optional<OnTripChoice> on_trip_decide(const DualTables& duals, const CompatTable& compat,
                                           double cost_per_unit,
                                           std::span<const ActiveRider> riders, int new_type,
                                           const PolicyOptions& options = {});

struct PairDecision {
  std::size_t earlier = 0;  // rider with the smaller clock (the newer one)
  std::size_t later = 0;
  double cost = 0.0;
};

// Candidate pairs (u < v) with u <= 0 <= v, compatibility of the earlier
// rider's type with the later state, and their generalised costs, ordered by
// cost, then later clock, then later type.
std::vector<PairDecision> candidate_pairs(const DualTables& duals, const CompatTable& compat,
                                          double cost_per_unit,
                                          std::span<const ActiveRider> riders);

// Minimum generalised-cost matching among the active riders.
std::vector<PairDecision> combined_decide(const DualTables& duals, const CompatTable& compat,
                                          double cost_per_unit,
                                          std::span<const ActiveRider> riders,
                                          const PolicyOptions& options = {});

}  // namespace tripmatch
