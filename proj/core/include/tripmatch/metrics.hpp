#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tripmatch {

enum class EventKind { kArrival, kMatch, kSoloCompletion, kActiveAtHorizon };

const char* to_string(EventKind kind);

// One flat record per event; fields not used by a kind stay zero.
struct Event {
  std::int64_t period = 0;
  EventKind kind = EventKind::kArrival;
  int type = 0;  // arrival, completion, horizon; new (earlier) rider of a match
  int clock = 0;  // clock of the rider at match time / at the horizon
  bool converted = false;
  double price = 0.0;  // quoted price
  double fare = 0.0;   // collected fare when converted
  int length = 0;      // solo trip length l_i of `type`
  // Match fields: the later-state rider and the route.
  int other_type = 0;
  int other_clock = 0;
  int other_length = 0;
  int shared_length = 0;
  int new_onboard = 0;
  int existing_onboard = 0;
  int overlap = 0;
};

using EventLog = std::vector<Event>;

enum DeltaBin { kDeltaLow = 0, kDeltaMid = 1, kDeltaHigh = 2 };

// Sufficient statistics of one run. Integer distances keep replay exact.
struct RunTotals {
  std::int64_t periods = 0;
  std::int64_t arrivals = 0;
  std::int64_t priced_arrivals = 0;  // arrivals with a finite quoted price
  double quoted_price_sum = 0.0;
  std::int64_t conversions = 0;
  double paid_price_sum = 0.0;
  double revenue = 0.0;
  std::int64_t distance = 0;  // total vehicle distance in motion
  std::int64_t converted_length = 0;
  std::int64_t matches = 0;
  std::int64_t on_trip_matches = 0;
  std::int64_t solo_completions = 0;
  std::int64_t active_at_horizon = 0;
  std::int64_t matched_length = 0;  // sum of l over matched riders
  std::int64_t matched_onboard = 0;  // sum of onboard distance over matched riders
  // [pre-trip, on-trip][DeltaBin]
  std::array<std::array<std::int64_t, 3>, 2> delta_histogram{};

  void add_arrival(const Event& e);
  void add_match(const Event& e);
  void add_solo_completion(const Event& e);
  void add_active_at_horizon(const Event& e);
  friend bool operator==(const RunTotals&, const RunTotals&) = default;
};

// Delta = 1 - overlap / (pre-match distance of the moving rider + shared length).
DeltaBin delta_bin(const Event& match);

// Rebuild totals from a complete log; periods must be supplied separately.
// Distance is recomputed as l per solo completion, max(0, v) + shared
// length per match, and max(0, u) per rider active at the horizon.
RunTotals totals_from_log(const EventLog& log, std::int64_t periods);

struct RunMetrics {
  std::int64_t periods = 0;
  double profit = 0.0;
  double profit_per_period = 0.0;
  double profit_per_minute = 0.0;
  std::optional<double> quoted_price;
  std::optional<double> payment;
  double throughput_per_minute = 0.0;
  std::optional<double> match_rate;
  std::optional<double> on_trip_match_portion;
  std::optional<double> cost_efficiency;
  std::optional<double> detour_rate;
  RunTotals totals;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

// period_minutes converts per-period figures to per-minute ones.
RunMetrics compute_metrics(const RunTotals& totals, double cost_per_unit, double period_minutes);
RunMetrics compute_metrics(const EventLog& log, std::int64_t periods, double cost_per_unit,
                           double period_minutes);

struct MetricStat {
  std::string name;
  double mean = 0.0;
  double standard_error = 0.0;  // across replications; 0 with one sample
  std::size_t samples = 0;      // replications where the metric exists
};

// Names, in output order, of the per-replication metrics.
const std::vector<std::string>& metric_names();
std::optional<double> metric_value(const RunMetrics& m, const std::string& name);

std::vector<MetricStat> summarize(const std::vector<RunMetrics>& runs);
const MetricStat& find_stat(const std::vector<MetricStat>& stats, const std::string& name);

// One row per replication plus a summary row of means and one of SEs.
void write_metrics_csv(const std::vector<RunMetrics>& runs, std::ostream& out);
void write_events_csv(const EventLog& log, std::ostream& out);

}  // namespace tripmatch
