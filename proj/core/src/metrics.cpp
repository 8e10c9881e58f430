#include "tripmatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tripmatch/error.hpp"

namespace tripmatch {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kArrival:
      return "arrival";
    case EventKind::kMatch:
      return "match";
    case EventKind::kSoloCompletion:
      return "solo_completion";
    case EventKind::kActiveAtHorizon:
      return "active_at_horizon";
  }
  return "unknown";
}

void RunTotals::add_arrival(const Event& e) {
  ++arrivals;
  if (std::isfinite(e.price)) {
    ++priced_arrivals;
    quoted_price_sum += e.price;
  }
  if (e.converted) {
    ++conversions;
    paid_price_sum += e.price;
    revenue += e.fare;
    converted_length += e.length;
  }
}

void RunTotals::add_match(const Event& e) {
  ++matches;
  const bool on_trip = e.other_clock >= 1;
  if (on_trip) ++on_trip_matches;
  matched_length += e.length + e.other_length;
  matched_onboard += e.new_onboard + e.existing_onboard;
  ++delta_histogram[on_trip ? 1 : 0][delta_bin(e)];
}

void RunTotals::add_solo_completion(const Event&) { ++solo_completions; }

void RunTotals::add_active_at_horizon(const Event&) { ++active_at_horizon; }

DeltaBin delta_bin(const Event& match) {
  const int total = std::max(0, match.other_clock) + match.shared_length;
  if (total <= 0) return kDeltaLow;
  // Compare 1 - overlap/total against thirds without rounding.
  const long excess = 3L * (total - match.overlap);
  if (excess < total) return kDeltaLow;
  if (excess < 2L * total) return kDeltaMid;
  return kDeltaHigh;
}

RunTotals totals_from_log(const EventLog& log, std::int64_t periods) {
  RunTotals t;
  t.periods = periods;
  for (const Event& e : log) {
    switch (e.kind) {
      case EventKind::kArrival:
        t.add_arrival(e);
        break;
      case EventKind::kMatch:
        t.add_match(e);
        t.distance += std::max(0, e.other_clock) + e.shared_length;
        break;
      case EventKind::kSoloCompletion:
        t.add_solo_completion(e);
        t.distance += e.length;
        break;
      case EventKind::kActiveAtHorizon:
        t.add_active_at_horizon(e);
        t.distance += std::max(0, e.clock);
        break;
    }
  }
  return t;
}

RunMetrics compute_metrics(const RunTotals& t, double cost_per_unit, double period_minutes) {
  if (!(period_minutes > 0.0)) throw InvalidArgument("period length must be positive");
  RunMetrics m;
  m.periods = t.periods;
  m.totals = t;
  m.profit = t.revenue - cost_per_unit * static_cast<double>(t.distance);
  if (t.periods > 0) {
    m.profit_per_period = m.profit / static_cast<double>(t.periods);
    m.profit_per_minute = m.profit_per_period / period_minutes;
    m.throughput_per_minute =
        static_cast<double>(t.conversions) / (static_cast<double>(t.periods) * period_minutes);
  }
  if (t.priced_arrivals > 0) m.quoted_price = t.quoted_price_sum / static_cast<double>(t.priced_arrivals);
  if (t.conversions > 0) {
    m.payment = t.paid_price_sum / static_cast<double>(t.conversions);
    m.match_rate = 2.0 * static_cast<double>(t.matches) / static_cast<double>(t.conversions);
  }
  if (t.matches > 0) {
    m.on_trip_match_portion =
        static_cast<double>(t.on_trip_matches) / static_cast<double>(t.matches);
  }
  if (t.converted_length > 0) {
    m.cost_efficiency =
        1.0 - static_cast<double>(t.distance) / static_cast<double>(t.converted_length);
  }
  if (t.matched_length > 0) {
    m.detour_rate = static_cast<double>(t.matched_onboard - t.matched_length) /
                    static_cast<double>(t.matched_length);
  }
  return m;
}

RunMetrics compute_metrics(const EventLog& log, std::int64_t periods, double cost_per_unit,
                           double period_minutes) {
  return compute_metrics(totals_from_log(log, periods), cost_per_unit, period_minutes);
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{
      "profit_per_period", "profit_per_minute", "quoted_price",      "payment",
      "throughput_per_minute", "match_rate",    "on_trip_match_portion", "cost_efficiency",
      "detour_rate"};
  return names;
}

std::optional<double> metric_value(const RunMetrics& m, const std::string& name) {
  if (name == "profit_per_period") return m.profit_per_period;
  if (name == "profit_per_minute") return m.profit_per_minute;
  if (name == "quoted_price") return m.quoted_price;
  if (name == "payment") return m.payment;
  if (name == "throughput_per_minute") return m.throughput_per_minute;
  if (name == "match_rate") return m.match_rate;
  if (name == "on_trip_match_portion") return m.on_trip_match_portion;
  if (name == "cost_efficiency") return m.cost_efficiency;
  if (name == "detour_rate") return m.detour_rate;
  throw InvalidArgument("unknown metric '" + name + "'");
}

std::vector<MetricStat> summarize(const std::vector<RunMetrics>& runs) {
  std::vector<MetricStat> out;
  for (const std::string& name : metric_names()) {
    std::vector<double> xs;
    for (const RunMetrics& r : runs) {
      if (auto v = metric_value(r, name)) xs.push_back(*v);
    }
    MetricStat s;
    s.name = name;
    s.samples = xs.size();
    if (!xs.empty()) {
      double sum = 0.0;
      for (double x : xs) sum += x;
      s.mean = sum / static_cast<double>(xs.size());
      if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.standard_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                                     static_cast<double>(xs.size()));
      }
    }
    out.push_back(s);
  }
  return out;
}

const MetricStat& find_stat(const std::vector<MetricStat>& stats, const std::string& name) {
  for (const MetricStat& s : stats) {
    if (s.name == name) return s;
  }
  throw InvalidArgument("unknown metric '" + name + "'");
}

void write_metrics_csv(const std::vector<RunMetrics>& runs, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "row,periods";
  for (const std::string& name : metric_names()) out << ',' << name;
  out << ",conversions,matches,solo_completions,active_at_horizon,distance,revenue\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const RunMetrics& m = runs[r];
    out << r << ',' << m.periods;
    for (const std::string& name : metric_names()) {
      out << ',';
      if (auto v = metric_value(m, name)) out << *v;
    }
    const RunTotals& t = m.totals;
    out << ',' << t.conversions << ',' << t.matches << ',' << t.solo_completions << ','
        << t.active_at_horizon << ',' << t.distance << ',' << t.revenue << '\n';
  }
  const auto stats = summarize(runs);
  out << "mean,";
  for (const MetricStat& s : stats) {
    out << ',';
    if (s.samples > 0) out << s.mean;
  }
  out << ",,,,,,\n";
  out << "se,";
  for (const MetricStat& s : stats) {
    out << ',';
    if (s.samples > 0) out << s.standard_error;
  }
  out << ",,,,,,\n";
  out.precision(old_precision);
}

void write_events_csv(const EventLog& log, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "period,kind,type,clock,converted,price,fare,length,other_type,other_clock,"
         "other_length,shared_length,new_onboard,existing_onboard,overlap\n";
  for (const Event& e : log) {
    out << e.period << ',' << to_string(e.kind) << ',' << e.type << ',' << e.clock << ','
        << (e.converted ? 1 : 0) << ',' << e.price << ',' << e.fare << ',' << e.length << ','
        << e.other_type << ',' << e.other_clock << ',' << e.other_length << ','
        << e.shared_length << ',' << e.new_onboard << ',' << e.existing_onboard << ','
        << e.overlap << '\n';
  }
  out.precision(old_precision);
}

}  // namespace tripmatch
