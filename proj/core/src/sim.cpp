#include "tripmatch/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tripmatch/error.hpp"

namespace tripmatch {

Simulator::Simulator(const FluidInstance& instance, std::span<const double> lambda,
                     DualTables duals, PolicyKind policy, const PolicyOptions& options,
                     bool record_events)
    : instance_(instance),
      lambda_(lambda.begin(), lambda.end()),
      duals_(std::move(duals)),
      policy_(policy),
      options_(options),
      record_events_(record_events) {
  instance_.validate();
  if (!instance_.compat) throw Error("fluid instance has no compatibility table");
  const std::size_t n = instance_.type_count();
  if (lambda_.size() != n) throw InvalidArgument("lambda size does not match the type count");
  window_ = instance_.params.waiting_window;
  if (duals_.type_count() != n || duals_.waiting_window() != window_) {
    throw InvalidArgument("dual tables do not match the instance");
  }
  if (policy_ == PolicyKind::kOnTrip && window_ != 0) {
    throw InvalidArgument("the on-trip rule needs a zero waiting window");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int it = static_cast<int>(i);
    if (!(lambda_[i] >= 0.0 && lambda_[i] <= 1.0)) throw InvalidArgument("lambda outside [0, 1]");
    acc += instance_.geometry->type(it).arrival_prob;
    cumulative_.push_back(acc);
    prices_.push_back(instance_.geometry->type(it).wtp.price(lambda_[i]));
    fares_.push_back(lambda_[i] > 0.0 ? instance_.fare(it, lambda_[i]) : 0.0);
  }
  clock_seen_.assign(static_cast<std::size_t>(instance_.geometry->max_length() + window_ + 1), 0);
}

ArrivalDraw Simulator::draw(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = unit(rng);
  const double b = unit(rng);
  ArrivalDraw d;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), a);
  if (it != cumulative_.end()) {
    d.type = static_cast<int>(it - cumulative_.begin());
    d.converted = b < lambda_[static_cast<std::size_t>(d.type)];
  }
  return d;
}

void Simulator::record(const Event& e) {
  if (record_events_) log_.push_back(e);
}

void Simulator::match(std::size_t earlier, std::size_t later) {
  const ActiveRider& e = state_.riders[earlier];
  const ActiveRider& l = state_.riders[later];
  const SharedTrip trip = instance_.geometry->shared_trip(e.type, l.type, l.clock);
  Event ev;
  ev.period = state_.period;
  ev.kind = EventKind::kMatch;
  ev.type = e.type;
  ev.clock = e.clock;
  ev.length = instance_.geometry->length(e.type);
  ev.other_type = l.type;
  ev.other_clock = l.clock;
  ev.other_length = instance_.geometry->length(l.type);
  ev.shared_length = trip.length;
  ev.new_onboard = trip.new_onboard;
  ev.existing_onboard = trip.existing_onboard;
  ev.overlap = trip.overlap;
  totals_.add_match(ev);
  totals_.distance += trip.length;
  record(ev);
  removed_[earlier] = 1;
  removed_[later] = 1;
}

void Simulator::apply_matching(std::optional<std::size_t> arrival_index) {
  const auto& riders = state_.riders;
  removed_.assign(riders.size(), 0);
  const double c = instance_.params.cost_per_unit;
  if (policy_ == PolicyKind::kOnTrip) {
    if (!arrival_index) return;
    const ActiveRider& a = riders[*arrival_index];
    const auto choice = on_trip_decide(duals_, *instance_.compat, c, riders, a.type, options_);
    if (choice) match(*arrival_index, choice->rider);
  } else {
    bool anyone_waiting = false;
    for (const ActiveRider& r : riders) anyone_waiting = anyone_waiting || r.clock <= 0;
    if (!anyone_waiting) return;
    for (const PairDecision& p : combined_decide(duals_, *instance_.compat, c, riders, options_)) {
      match(p.earlier, p.later);
    }
  }
  std::size_t keep = 0;
  for (std::size_t r = 0; r < riders.size(); ++r) {
    if (!removed_[r]) state_.riders[keep++] = state_.riders[r];
  }
  state_.riders.resize(keep);
}

void Simulator::check_distinct_clocks() const {
  for (const ActiveRider& r : state_.riders) {
    char& seen = clock_seen_[static_cast<std::size_t>(r.clock + window_)];
    if (seen) {
      std::fill(clock_seen_.begin(), clock_seen_.end(), 0);
      throw Error("two active riders share clock " + std::to_string(r.clock));
    }
    seen = 1;
  }
  for (const ActiveRider& r : state_.riders) clock_seen_[static_cast<std::size_t>(r.clock + window_)] = 0;
}

void Simulator::advance_period(const ArrivalDraw& d) {
  std::optional<std::size_t> arrival_index;
  if (d.type >= 0) {
    const auto i = static_cast<std::size_t>(d.type);
    Event ev;
    ev.period = state_.period;
    ev.kind = EventKind::kArrival;
    ev.type = d.type;
    ev.converted = d.converted;
    ev.price = prices_[i];
    ev.length = instance_.geometry->length(d.type);
    if (d.converted) ev.fare = fares_[i];
    totals_.add_arrival(ev);
    record(ev);
    if (d.converted) {
      // The newcomer has the smallest clock, so it goes first.
      state_.riders.insert(state_.riders.begin(), ActiveRider{d.type, -window_, state_.period});
      arrival_index = 0;
    }
  }
  check_distinct_clocks();
  if (!state_.riders.empty()) apply_matching(arrival_index);

  std::size_t keep = 0;
  for (ActiveRider r : state_.riders) {
    if (r.clock >= 0) ++totals_.distance;
    ++r.clock;
    if (r.clock >= instance_.geometry->length(r.type)) {
      Event ev;
      ev.period = state_.period;
      ev.kind = EventKind::kSoloCompletion;
      ev.type = r.type;
      ev.clock = r.clock;
      ev.length = instance_.geometry->length(r.type);
      ev.price = prices_[static_cast<std::size_t>(r.type)];
      ev.fare = fares_[static_cast<std::size_t>(r.type)];
      totals_.add_solo_completion(ev);
      record(ev);
    } else {
      state_.riders[keep++] = r;
    }
  }
  state_.riders.resize(keep);
  ++state_.period;
  totals_.periods = state_.period;
}

void Simulator::finish() {
  for (const ActiveRider& r : state_.riders) {
    Event ev;
    ev.period = state_.period;
    ev.kind = EventKind::kActiveAtHorizon;
    ev.type = r.type;
    ev.clock = r.clock;
    ev.length = instance_.geometry->length(r.type);
    totals_.add_active_at_horizon(ev);
    record(ev);
  }
  state_.riders.clear();
}

std::vector<RunMetrics> SimulationResult::runs() const {
  std::vector<RunMetrics> out;
  for (const auto& r : replications) out.push_back(r.metrics);
  return out;
}

SimulationResult run_simulation(const FluidInstance& instance, std::span<const double> lambda,
                                const DualTables& duals, const SimulationConfig& config) {
  if (config.periods < 1) throw InvalidArgument("periods must be >= 1");
  if (config.replications < 1) throw InvalidArgument("replications must be >= 1");
  SimulationResult result;
  result.replications.resize(config.replications);

  auto run_one = [&](std::size_t rep) {
    Simulator sim(instance, lambda, duals, config.policy, config.policy_options,
                  config.record_events);
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(rep)};
    std::mt19937_64 rng(seq);
    for (std::int64_t t = 0; t < config.periods; ++t) sim.advance_period(sim.draw(rng));
    sim.finish();
    ReplicationResult& out = result.replications[rep];
    out.metrics = compute_metrics(sim.totals(), instance.params.cost_per_unit, config.period_minutes);
    if (config.record_events) out.log = sim.log();
  };

  unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.replications)));
  if (threads == 1) {
    for (std::size_t r = 0; r < config.replications; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < config.replications; r = next++) {
          try {
            run_one(r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  result.summary = summarize(result.runs());
  return result;
}

}  // namespace tripmatch
