#include "tripmatch/harness/experiment.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tripmatch/error.hpp"
#include "tripmatch/harness/generators.hpp"
#include "tripmatch/harness/io.hpp"

namespace tripmatch::harness {

using nlohmann::json;

std::vector<PointSpec> expand_points(const ExperimentConfig& config) {
  std::vector<PointSpec> out;
  for (PolicyKind p : config.policies) {
    for (double c : config.costs) {
      if (p == PolicyKind::kOnTrip) {
        out.push_back({p, 0, c});
        continue;
      }
      for (int T : config.windows) out.push_back({p, T, c});
    }
  }
  return out;
}

std::shared_ptr<const TripGeometry> build_geometry(const InstanceSpec& spec, const WtpModel& wtp) {
  switch (spec.kind) {
    case InstanceKind::kExample1:
      return gen_example1(spec.L, spec.l, spec.total_arrival, wtp).geometry;
    case InstanceKind::kExample2: {
      Example2Options o;
      o.type_count = spec.type_count;
      o.rows = spec.rows;
      o.cols = spec.cols;
      o.edge_length = spec.edge_length;
      o.trip_length = spec.trip_length;
      o.total_arrival = spec.total_arrival;
      o.seed = spec.instance_seed;
      o.wtp = wtp;
      return gen_example2(o).geometry;
    }
    case InstanceKind::kFiles: {
      auto network = std::make_shared<const RoadNetwork>(read_network_file(spec.network_path));
      return std::make_shared<const TripGeometry>(network, read_types_file(spec.types_path, wtp));
    }
  }
  throw Error("unknown instance kind");
}

FluidInstance make_point_instance(std::shared_ptr<const TripGeometry> geometry,
                                  const ExperimentConfig& config, const PointSpec& point) {
  FluidParams base;
  base.cost_per_unit = point.cost;
  base.waiting_window = point.window;
  base.enable_ratio_constraints = config.ratio_constraints;
  base.fare = config.fare;
  return make_fluid_instance(std::move(geometry), params_for_policy(point.policy, base));
}

double period_minutes_for(const TripGeometry& geometry, const ExperimentConfig& config) {
  if (config.period_minutes) return *config.period_minutes;
  const double total = geometry.total_arrival_prob();
  return total > 0.0 ? 0.1 / total : 1.0;
}

PricingResult price_point(const FluidInstance& instance, const ExperimentConfig& config) {
  return mm_optimize(instance, config.pricing);
}

SimulationResult simulate_point(const FluidInstance& instance, const FluidSolution& solution,
                                const ExperimentConfig& config, const PointSpec& point,
                                double period_minutes) {
  SimulationConfig sc;
  sc.policy = point.policy;
  sc.periods = config.periods;
  sc.replications = config.replications;
  sc.seed = config.seed;
  sc.period_minutes = period_minutes;
  sc.record_events = config.record_events;
  sc.policy_options.decision_tol = config.decision_tol;
  sc.policy_options.max_matching_riders = config.max_matching_riders;
  sc.threads = config.threads;
  return run_simulation(instance, solution.lambda, DualTables::from_solution(solution), sc);
}

PointResult run_point(std::shared_ptr<const TripGeometry> geometry, const ExperimentConfig& config,
                      const PointSpec& point, const std::optional<std::vector<double>>& lambda) {
  PointResult res;
  res.spec = point;
  res.period_minutes = period_minutes_for(*geometry, config);
  res.instance = std::make_shared<const FluidInstance>(make_point_instance(geometry, config, point));
  const FluidInstance& inst = *res.instance;
  if (lambda) {
    res.pricing.lambda = *lambda;
    res.pricing.solution = solve_cb(inst, *lambda, config.pricing.lp);
    res.pricing.profit = fluid_profit(inst, res.pricing.solution);
    for (std::size_t i = 0; i < lambda->size(); ++i) {
      res.pricing.prices.push_back(geometry->type(static_cast<int>(i)).wtp.price((*lambda)[i]));
    }
    res.pricing.trace.push_back({0, res.pricing.profit, *lambda});
    res.pricing.run_profits.push_back(res.pricing.profit);
  } else {
    res.pricing = price_point(inst, config);
  }
  res.simulation = simulate_point(inst, res.pricing.solution, config, point, res.period_minutes);
  return res;
}

std::string point_label(const PointSpec& point) {
  std::ostringstream s;
  s << to_string(point.policy) << "_T" << point.window << "_c" << point.cost;
  return s.str();
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const PointSink& sink) {
  struct Variant {
    InstanceSpec spec;
    std::optional<double> delta;
    std::optional<int> type_count;
    std::optional<std::uint64_t> seed;
  };
  std::vector<Variant> variants;
  switch (config.sweep.kind) {
    case SweepKind::kGrid:
      variants.push_back({config.instance, std::nullopt, std::nullopt, std::nullopt});
      break;
    case SweepKind::kDelta:
      if (config.instance.kind != InstanceKind::kExample1) {
        throw ConfigError("sweep.kind", "delta sweeps need an example1 instance");
      }
      for (double d : config.sweep.deltas) {
        Variant v{config.instance, d, std::nullopt, std::nullopt};
        v.spec.l = std::max(1, static_cast<int>(std::lround(config.instance.L * (1.0 - d))));
        variants.push_back(v);
      }
      break;
    case SweepKind::kTypes:
      if (config.instance.kind != InstanceKind::kExample2) {
        throw ConfigError("sweep.kind", "types sweeps need an example2 instance");
      }
      for (int n : config.sweep.type_counts) {
        for (std::uint64_t seed : config.sweep.instance_seeds) {
          Variant v{config.instance, std::nullopt, n, seed};
          v.spec.type_count = n;
          v.spec.instance_seed = seed;
          variants.push_back(v);
        }
      }
      break;
  }

  std::vector<SweepRow> rows;
  for (const Variant& v : variants) {
    const auto geometry = build_geometry(v.spec, config.wtp);
    for (const PointSpec& p : expand_points(config)) {
      const PointResult r = run_point(geometry, config, p);
      if (sink) {
        std::ostringstream s;
        s << point_label(p);
        if (v.delta) s << "_delta" << *v.delta;
        if (v.type_count) s << "_N" << *v.type_count << "_seed" << *v.seed;
        sink(s.str(), r);
      }
      SweepRow row;
      row.delta = v.delta;
      row.type_count = v.type_count;
      row.instance_seed = v.seed;
      row.spec = p;
      row.fluid_profit = r.pricing.profit;
      row.lambda = r.pricing.lambda;
      row.summary = r.simulation.summary;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "policy,T,c,delta,N,instance_seed,fluid_profit,mean_lambda";
  for (const std::string& name : metric_names()) out << ',' << name << ',' << name << "_se";
  out << '\n';
  for (const SweepRow& r : rows) {
    double mean_lambda = 0.0;
    for (double l : r.lambda) mean_lambda += l;
    if (!r.lambda.empty()) mean_lambda /= static_cast<double>(r.lambda.size());
    out << to_string(r.spec.policy) << ',' << r.spec.window << ',' << r.spec.cost << ',';
    if (r.delta) out << *r.delta;
    out << ',';
    if (r.type_count) out << *r.type_count;
    out << ',';
    if (r.instance_seed) out << *r.instance_seed;
    out << ',' << r.fluid_profit << ',' << mean_lambda;
    for (const MetricStat& s : r.summary) {
      out << ',';
      if (s.samples > 0) out << s.mean;
      out << ',';
      if (s.samples > 0) out << s.standard_error;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

namespace {

json spec_json(const PointSpec& p) {
  return {{"policy", to_string(p.policy)}, {"T", p.window}, {"c", p.cost}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string pricing_json(const std::vector<std::pair<PointSpec, PricingResult>>& points) {
  json arr = json::array();
  for (const auto& [spec, r] : points) {
    json j = spec_json(spec);
    j["lambda"] = r.lambda;
    json prices = json::array();
    for (double p : r.prices) prices.push_back(std::isfinite(p) ? json(p) : json(nullptr));
    j["prices"] = prices;
    j["fluid_profit"] = r.profit;
    j["iterations"] = r.trace.empty() ? 0 : r.trace.back().iteration;
    j["run_profits"] = r.run_profits;
    j["restarts_consistent"] = r.restarts_consistent;
    arr.push_back(j);
  }
  return json{{"points", arr}}.dump(2) + "\n";
}

std::vector<double> lambda_from_pricing_json(const std::string& json_text, const PointSpec& point) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("pricing_file", std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("points") || !j["points"].is_array()) {
    throw ConfigError("pricing_file", "expected a 'points' array");
  }
  for (const json& p : j["points"]) {
    try {
      if (p.at("policy").get<std::string>() == to_string(point.policy) &&
          p.at("T").get<int>() == point.window && p.at("c").get<double>() == point.cost) {
        return p.at("lambda").get<std::vector<double>>();
      }
    } catch (const json::exception& e) {
      throw ConfigError("pricing_file", std::string("malformed point: ") + e.what());
    }
  }
  throw ConfigError("pricing_file", "no lambda stored for " + point_label(point));
}

std::string metrics_json(const PointResult& r) {
  json j = spec_json(r.spec);
  j["lambda"] = r.pricing.lambda;
  j["fluid_profit"] = r.pricing.profit;
  j["period_minutes"] = r.period_minutes;
  json reps = json::array();
  for (const auto& rep : r.simulation.replications) {
    const RunMetrics& m = rep.metrics;
    json x;
    for (const std::string& name : metric_names()) x[name] = optional_number(metric_value(m, name));
    x["periods"] = m.periods;
    x["conversions"] = m.totals.conversions;
    x["matches"] = m.totals.matches;
    x["solo_completions"] = m.totals.solo_completions;
    x["active_at_horizon"] = m.totals.active_at_horizon;
    x["distance"] = m.totals.distance;
    x["revenue"] = m.totals.revenue;
    x["delta_histogram"] = {{"pre_trip", m.totals.delta_histogram[0]},
                            {"on_trip", m.totals.delta_histogram[1]}};
    reps.push_back(x);
  }
  j["replications"] = reps;
  json summary;
  for (const MetricStat& s : r.simulation.summary) {
    summary[s.name] = {{"mean", s.samples > 0 ? json(s.mean) : json(nullptr)},
                       {"se", s.samples > 0 ? json(s.standard_error) : json(nullptr)},
                       {"samples", s.samples}};
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

}  // namespace tripmatch::harness
