#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tripmatch/fluid.hpp"
#include "tripmatch/policy.hpp"
#include "tripmatch/pricing.hpp"

namespace tripmatch::harness {

enum class InstanceKind { kExample1, kExample2, kFiles };

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kExample1;
  double total_arrival = 0.1;
  // example1
  int L = 100;
  int l = 50;
  // example2
  int type_count = 10;
  int rows = 10;
  int cols = 10;
  int edge_length = 10;
  int trip_length = 100;
  std::uint64_t instance_seed = 1;
  // files (resolved against the config's directory)
  std::string network_path;
  std::string types_path;
};

enum class SweepKind { kGrid, kDelta, kTypes };

struct SweepSpec {
  SweepKind kind = SweepKind::kGrid;
  std::vector<double> deltas{0.0, 0.25, 0.5, 0.75, 0.95};
  std::vector<int> type_counts{1, 5, 10};
  std::vector<std::uint64_t> instance_seeds{1, 2, 3};
};

struct ExperimentConfig {
  InstanceSpec instance;
  std::vector<PolicyKind> policies{PolicyKind::kCombined};
  std::vector<int> windows{0};
  std::vector<double> costs{0.7};
  WtpModel wtp = WtpModel::uniform();
  FareConvention fare = FareConvention::kPerMile;
  bool ratio_constraints = true;
  std::int64_t periods = 100000;
  std::size_t replications = 5;
  std::uint64_t seed = 1;
  std::optional<double> period_minutes;  // default 0.1 / sum of arrival probabilities
  PricingConfig pricing;
  std::string pricing_file;  // lambda from an earlier `price` run
  bool record_events = false;
  double decision_tol = 1e-7;
  std::size_t max_matching_riders = 64;
  unsigned threads = 0;
  SweepSpec sweep;
};

// Parses and validates a JSON config. Unknown keys, wrong types and
// out-of-range values raise ConfigError naming the key. Relative file paths
// are resolved against base_dir.
ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Complete JSON echo of a config, including defaults.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace tripmatch::harness
