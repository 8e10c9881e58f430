#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tripmatch/error.hpp"
#include "tripmatch/fluid.hpp"

namespace tripmatch {

struct PricingConfig {
  // Starting conversion per type; empty uses default_initial_lambda.
  std::vector<double> initial_lambda;
  double tolerance = 1e-6;  // stop when the profit gain drops below this
  std::size_t max_iterations = 200;
  // Halvings of the step toward the surrogate maximiser before giving up.
  std::size_t max_backtracks = 12;
  // Extra runs from uniformly random starts; the best run is returned.
  std::size_t restarts = 0;
  std::uint64_t seed = 1;
  // Relative spread of restart profits above which results are flagged.
  double restart_tolerance = 1e-3;
  SimplexOptions lp;
};

struct PricingIterate {
  std::size_t iteration = 0;
  double profit = 0.0;
  std::vector<double> lambda;
};

struct PricingResult {
  std::vector<double> lambda;
  std::vector<double> prices;  // quoted price per type at lambda
  double profit = 0.0;         // fluid profit g at lambda
  std::vector<PricingIterate> trace;  // of the returned run
  std::vector<double> run_profits;    // first entry is the configured start
  bool restarts_consistent = true;
  FluidSolution solution;  // CB at lambda
};

// Raised when an LP solve fails mid-run; carries the trace so far.
class PricingFailure : public Error {
 public:
  PricingFailure(const std::string& what, std::vector<PricingIterate> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<PricingIterate>& trace() const noexcept { return trace_; }

 private:
  std::vector<PricingIterate> trace_;
};

// Maximiser over [0,1]^N of sum_i Lambda_i lambda_i fare_i(lambda_i) -
// grad . lambda. Closed form for linear price curves, golden-section search
// otherwise. Coordinates with Lambda_i = 0 are 0.
std::vector<double> surrogate_argmax(const FluidInstance& instance, std::span<const double> grad);

// Surrogate maximiser against the all-solo cost gradient Lambda_i c l_i;
// (1 - c) / 2 for uniform [0,1] WTP under per-mile fares.
std::vector<double> default_initial_lambda(const FluidInstance& instance);

PricingResult mm_optimize(const FluidInstance& instance, const PricingConfig& config = {});

// iteration,profit,lambda_0,...
void write_trace_csv(const PricingResult& result, std::ostream& out);

}  // namespace tripmatch
