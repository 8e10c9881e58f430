#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "tripmatch/compat.hpp"
#include "tripmatch/lp.hpp"
#include "tripmatch/netgraph.hpp"
#include "tripmatch/wtp.hpp"

namespace tripmatch {

struct FluidParams {
  double cost_per_unit = 0.7;  // c
  int waiting_window = 0;      // T
  bool enable_pre_trip = true;
  bool enable_on_trip = true;
  bool enable_ratio_constraints = true;
  FareConvention fare = FareConvention::kPerMile;
  std::size_t max_compat_entries = 50'000'000;
};

// Rider types, cost parameters and the compatibility table they induce.
struct FluidInstance {
  std::shared_ptr<const TripGeometry> geometry;
  FluidParams params;
  std::shared_ptr<const CompatTable> compat;

  std::size_t type_count() const { return geometry->type_count(); }
  // Fare paid by a converted type-i rider quoted conversion lambda.
  double fare(int i, double lambda) const;
  // Lambda_i * lambda * fare, finite at lambda = 0.
  double expected_revenue(int i, double lambda) const;
  // Throws InvalidArgument when c <= 0, T < 0, or T > 0 without pre-trip.
  void validate() const;
};

// Validates the parameters and builds the compatibility table.
FluidInstance make_fluid_instance(std::shared_ptr<const TripGeometry> geometry, FluidParams params);

struct MatchVar {
  int new_type = 0;
  int existing_type = 0;
  int clock = 0;
  int shared_length = 0;
};

// Variable and row numbering of CB(lambda); depends only on the instance.
// LP variables: y for every state (j,u), -T <= u <= l_j - 1, then x for every
// match var. Rows: one demand row per type, one flow row per state with
// u > -T, then one ratio row per match var when ratio rows are enabled.
class CbLayout {
 public:
  explicit CbLayout(const FluidInstance& instance);

  int waiting_window() const noexcept { return window_; }
  std::size_t type_count() const noexcept { return state_base_.size(); }
  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t state_index(int type, int clock) const;
  int max_clock(int type) const { return max_clock_.at(static_cast<std::size_t>(type)); }

  std::span<const MatchVar> match_vars() const noexcept { return match_vars_; }
  // Match vars whose existing rider is in state (j,u), ordered by new type.
  std::span<const std::size_t> matches_at(int type, int clock) const;
  // Match vars whose new rider has type i.
  std::span<const std::size_t> matches_of_new_type(int type) const;

  std::size_t variable_count() const noexcept { return state_count_ + match_vars_.size(); }
  std::size_t y_var(int type, int clock) const { return state_index(type, clock); }
  std::size_t x_var(std::size_t match) const noexcept { return state_count_ + match; }

  bool has_ratio_rows() const noexcept { return ratio_rows_; }
  std::size_t demand_row(int type) const noexcept { return static_cast<std::size_t>(type); }
  std::size_t flow_row(int type, int clock) const;  // clock > -T
  std::size_t ratio_row(std::size_t match) const noexcept { return ratio_base_ + match; }
  std::size_t row_count() const noexcept { return ratio_base_ + (ratio_rows_ ? match_vars_.size() : 0); }

 private:
  int window_ = 0;
  bool ratio_rows_ = true;
  std::vector<std::size_t> state_base_;  // index of (j, -T)
  std::vector<int> max_clock_;
  std::size_t state_count_ = 0;
  std::vector<MatchVar> match_vars_;
  std::vector<std::size_t> state_match_offsets_;  // per state, into state_matches_
  std::vector<std::size_t> state_matches_;
  std::vector<std::vector<std::size_t>> by_new_type_;
  std::vector<std::size_t> flow_base_;  // row of (j, -T + 1)
  std::size_t ratio_base_ = 0;
};

struct FluidSolution {
  std::shared_ptr<const CbLayout> layout;
  std::vector<double> lambda;
  double cost = 0.0;  // C(lambda)
  std::vector<double> y;      // per state
  std::vector<double> x;      // per match var
  std::vector<double> gamma;  // per type, demand-row duals
  std::vector<double> xi;     // per state, flow-row duals; xi(j,-T) = gamma_j
  std::vector<double> eta;    // per match var, ratio-row duals (>= 0)
  std::size_t iterations = 0;

  double y_at(int type, int clock) const { return y.at(layout->state_index(type, clock)); }
  double xi_at(int type, int clock) const { return xi.at(layout->state_index(type, clock)); }
};

// CB(lambda) as a minimisation LP. Throws InvalidArgument when lambda has the
// wrong size or leaves [0,1], and Error when the compat table is missing.
LinearProgram build_cb(const FluidInstance& instance, std::span<const double> lambda);
LinearProgram build_cb(const FluidInstance& instance, const CbLayout& layout,
                       std::span<const double> lambda);

FluidSolution solve_cb(const FluidInstance& instance, std::span<const double> lambda,
                       const SimplexOptions& options = {});
FluidSolution solve_cb(const FluidInstance& instance, std::shared_ptr<const CbLayout> layout,
                       std::span<const double> lambda, const SimplexOptions& options = {});

// Envelope gradient of C at the solved lambda.
std::vector<double> cost_gradient(const FluidSolution& solution, const FluidInstance& instance);

// Revenue minus C(lambda).
double fluid_profit(const FluidInstance& instance, std::span<const double> lambda);
double fluid_profit(const FluidInstance& instance, const FluidSolution& solution);

// name,value,dual for every variable and row.
void write_solution_csv(const FluidSolution& solution, const FluidInstance& instance,
                        std::ostream& out);

}  // namespace tripmatch
