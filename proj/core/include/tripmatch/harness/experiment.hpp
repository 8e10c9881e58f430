#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tripmatch/harness/config.hpp"
#include "tripmatch/sim.hpp"

namespace tripmatch::harness {

struct PointSpec {
  PolicyKind policy = PolicyKind::kCombined;
  int window = 0;  // T
  double cost = 0.7;
};

// policy x T x c; the on-trip policy ignores T and appears once per c.
std::vector<PointSpec> expand_points(const ExperimentConfig& config);

std::shared_ptr<const TripGeometry> build_geometry(const InstanceSpec& spec, const WtpModel& wtp);

// Fluid instance for one grid point.
FluidInstance make_point_instance(std::shared_ptr<const TripGeometry> geometry,
                                  const ExperimentConfig& config, const PointSpec& point);

// 0.1 / sum of arrival probabilities, or the configured value.
double period_minutes_for(const TripGeometry& geometry, const ExperimentConfig& config);

PricingResult price_point(const FluidInstance& instance, const ExperimentConfig& config);

SimulationResult simulate_point(const FluidInstance& instance, const FluidSolution& solution,
                                const ExperimentConfig& config, const PointSpec& point,
                                double period_minutes);

struct PointResult {
  PointSpec spec;
  std::shared_ptr<const FluidInstance> instance;
  PricingResult pricing;
  SimulationResult simulation;
  double period_minutes = 1.0;
};

// Prices with MM unless lambda is given, then simulates.
PointResult run_point(std::shared_ptr<const TripGeometry> geometry, const ExperimentConfig& config,
                      const PointSpec& point,
                      const std::optional<std::vector<double>>& lambda = std::nullopt);

struct SweepRow {
  std::optional<double> delta;
  std::optional<int> type_count;
  std::optional<std::uint64_t> instance_seed;
  PointSpec spec;
  double fluid_profit = 0.0;
  std::vector<double> lambda;
  std::vector<MetricStat> summary;
};

// Called after each point with a label unique within the sweep.
using PointSink = std::function<void(const std::string& label, const PointResult& result)>;

// grid: every point on the configured instance. delta: Example 1 with
// l = round(L (1 - delta)) for each delta. types: Example 2 for each type
// count and instance seed. Points run one after another; replications
// inside a point use the configured thread count.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const PointSink& sink = {});

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

// JSON documents written by the CLI.
std::string pricing_json(const std::vector<std::pair<PointSpec, PricingResult>>& points);
// Lambda stored for `point` in a pricing document; throws ConfigError when absent.
std::vector<double> lambda_from_pricing_json(const std::string& json_text, const PointSpec& point);
std::string metrics_json(const PointResult& result);

std::string point_label(const PointSpec& point);

}  // namespace tripmatch::harness
