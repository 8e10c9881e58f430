#include "tripmatch/harness/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tripmatch/error.hpp"
#include "tripmatch/harness/experiment.hpp"
#include "tripmatch/harness/generators.hpp"
#include "tripmatch/harness/ingest.hpp"
#include "tripmatch/harness/io.hpp"

namespace tripmatch::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::int64_t> periods;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config) {
  auto* c = cmd->add_option("--config", f.config, "experiment config (JSON)");
  if (needs_config) c->required();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "simulation seed override");
  cmd->add_option("--replications", f.replications, "replication count override")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--periods", f.periods, "periods per replication override")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
}

ExperimentConfig load_with_overrides(const CommonFlags& f) {
  ExperimentConfig cfg = load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.replications) cfg.replications = *f.replications;
  if (f.periods) cfg.periods = *f.periods;
  if (f.threads) cfg.threads = *f.threads;
  return cfg;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

template <class Writer>
void write_with(const std::string& path, Writer&& writer) {
  std::ostringstream s;
  writer(s);
  write_text_file(path, s.str());
}

// One point writes straight into `out`; several get a subdirectory each.
std::string point_dir(const std::string& out, const PointSpec& p, std::size_t point_count) {
  return point_count == 1 ? out : path_in(out, point_label(p));
}

std::vector<double> parse_lambda_list(const std::string& text, std::size_t types) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--lambda", "not a number: '" + item + "'");
    }
  }
  if (out.size() == 1 && types > 1) out.assign(types, out[0]);
  if (out.size() != types) {
    throw ConfigError("--lambda", "expected " + std::to_string(types) + " values");
  }
  return out;
}

std::optional<std::vector<double>> stored_lambda(const ExperimentConfig& cfg,
                                                 const std::string& pricing_flag,
                                                 const PointSpec& p) {
  const std::string path = pricing_flag.empty() ? cfg.pricing_file : pricing_flag;
  if (path.empty()) return std::nullopt;
  std::string body;
  try {
    body = read_text_file(path);
  } catch (const InvalidArgument& e) {
    throw ConfigError(pricing_flag.empty() ? "pricing_file" : "--pricing", e.what());
  }
  return lambda_from_pricing_json(body, p);
}

void write_pricing_outputs(const std::string& dir, const FluidInstance& inst,
                           const PointSpec& p, const PricingResult& r) {
  write_text_file(path_in(dir, "pricing.json"), pricing_json({{p, r}}));
  write_with(path_in(dir, "trace.csv"), [&](std::ostream& o) { write_trace_csv(r, o); });
  write_with(path_in(dir, "fluid_solution.csv"),
             [&](std::ostream& o) { write_solution_csv(r.solution, inst, o); });
}

void write_point_outputs(const std::string& dir, const ExperimentConfig& cfg,
                         const PointResult& r) {
  write_pricing_outputs(dir, *r.instance, r.spec, r.pricing);
  write_with(path_in(dir, "metrics.csv"),
             [&](std::ostream& o) { write_metrics_csv(r.simulation.runs(), o); });
  write_text_file(path_in(dir, "metrics.json"), metrics_json(r));
  if (cfg.record_events) {
    for (std::size_t k = 0; k < r.simulation.replications.size(); ++k) {
      write_with(path_in(dir, "events_" + std::to_string(k) + ".csv"),
                 [&](std::ostream& o) { write_events_csv(r.simulation.replications[k].log, o); });
    }
  }
}

// ---- gen ----

struct GenFlags {
  int example = 1;
  int L = 100;
  int l = 50;
  int N = 10;
  int rows = 10;
  int cols = 10;
  int edge_length = 10;
  double total_arrival = 0.1;
  std::uint64_t seed = 1;
  std::string out = "out";
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.instance.total_arrival = f.total_arrival;
  if (f.example == 1) {
    cfg.instance.kind = InstanceKind::kExample1;
    cfg.instance.L = f.L;
    cfg.instance.l = f.l;
  } else {
    cfg.instance.kind = InstanceKind::kExample2;
    cfg.instance.type_count = f.N;
    cfg.instance.rows = f.rows;
    cfg.instance.cols = f.cols;
    cfg.instance.edge_length = f.edge_length;
    cfg.instance.trip_length = f.L;
    cfg.instance.instance_seed = f.seed;
  }
  // Round-trip through the parser so the written config is known to load.
  const std::string text = config_to_json(cfg);
  cfg = parse_config(text, f.out);
  const auto geometry = build_geometry(cfg.instance, cfg.wtp);
  make_fluid_instance(geometry, FluidParams{}).validate();

  write_with(path_in(f.out, "network.txt"),
             [&](std::ostream& o) { write_network(geometry->network(), o); });
  write_with(path_in(f.out, "types.txt"), [&](std::ostream& o) {
    write_types({geometry->types().begin(), geometry->types().end()}, o);
  });
  write_text_file(path_in(f.out, "config.json"), text);
  write_text_file(path_in(f.out, "config.used.json"), text);
  out << "wrote " << geometry->type_count() << " types on " << geometry->network().node_count()
      << " nodes to " << f.out << "\n";
  return 0;
}

// ---- solve-fluid ----

int cmd_solve_fluid(const CommonFlags& f, const std::string& lambda_text,
                    const std::string& pricing_flag, const std::string& lp_file, std::ostream& out) {
  const ExperimentConfig cfg = load_with_overrides(f);
  write_text_file(path_in(f.out, "config.used.json"), config_to_json(cfg));
  const auto geometry = build_geometry(cfg.instance, cfg.wtp);
  const auto points = expand_points(cfg);
  json summary = json::array();
  for (const PointSpec& p : points) {
    const FluidInstance inst = make_point_instance(geometry, cfg, p);
    std::vector<double> lambda;
    if (!lambda_text.empty()) {
      lambda = parse_lambda_list(lambda_text, geometry->type_count());
    } else if (auto stored = stored_lambda(cfg, pricing_flag, p)) {
      lambda = *stored;
    } else {
      lambda = default_initial_lambda(inst);
    }
    const FluidSolution sol = solve_cb(inst, lambda, cfg.pricing.lp);
    const std::string dir = point_dir(f.out, p, points.size());
    write_with(path_in(dir, "fluid_solution.csv"),
               [&](std::ostream& o) { write_solution_csv(sol, inst, o); });
    if (!lp_file.empty()) {
      write_with(path_in(dir, lp_file),
                 [&](std::ostream& o) { write_lp_format(build_cb(inst, lambda), o); });
    }
    const double g = fluid_profit(inst, sol);
    summary.push_back({{"policy", to_string(p.policy)},
                       {"T", p.window},
                       {"c", p.cost},
                       {"lambda", lambda},
                       {"cost", sol.cost},
                       {"fluid_profit", g},
                       {"gamma", sol.gamma},
                       {"gradient", cost_gradient(sol, inst)},
                       {"iterations", sol.iterations}});
    out << point_label(p) << ": C=" << sol.cost << " g=" << g << "\n";
  }
  write_text_file(path_in(f.out, "fluid.json"), summary.dump(2) + "\n");
  return 0;
}

// ---- price ----

int cmd_price(const CommonFlags& f, std::ostream& out) {
  const ExperimentConfig cfg = load_with_overrides(f);
  write_text_file(path_in(f.out, "config.used.json"), config_to_json(cfg));
  const auto geometry = build_geometry(cfg.instance, cfg.wtp);
  const auto points = expand_points(cfg);
  std::vector<std::pair<PointSpec, PricingResult>> all;
  for (const PointSpec& p : points) {
    const FluidInstance inst = make_point_instance(geometry, cfg, p);
    PricingResult r = price_point(inst, cfg);
    write_pricing_outputs(point_dir(f.out, p, points.size()), inst, p, r);
    out << point_label(p) << ": g=" << r.profit << " iterations="
        << (r.trace.empty() ? 0 : r.trace.back().iteration) << "\n";
    if (!r.restarts_consistent) out << "  warning: restarts disagree on the optimum\n";
    all.emplace_back(p, std::move(r));
  }
  write_text_file(path_in(f.out, "pricing.json"), pricing_json(all));
  return 0;
}

// ---- simulate ----

int cmd_simulate(const CommonFlags& f, bool events, const std::string& pricing_flag,
                 std::ostream& out) {
  ExperimentConfig cfg = load_with_overrides(f);
  if (events) cfg.record_events = true;
  if (!pricing_flag.empty()) cfg.pricing_file = fs::absolute(pricing_flag).string();
  write_text_file(path_in(f.out, "config.used.json"), config_to_json(cfg));
  const auto geometry = build_geometry(cfg.instance, cfg.wtp);
  const auto points = expand_points(cfg);
  std::vector<std::pair<PointSpec, PricingResult>> all;
  for (const PointSpec& p : points) {
    const PointResult r = run_point(geometry, cfg, p, stored_lambda(cfg, "", p));
    write_point_outputs(point_dir(f.out, p, points.size()), cfg, r);
    const MetricStat& profit = find_stat(r.simulation.summary, "profit_per_period");
    out << point_label(p) << ": g=" << r.pricing.profit;
    out << " simulated=" << profit.mean << " se=" << profit.standard_error;
    out << "\n";
    all.emplace_back(p, r.pricing);
  }
  if (points.size() > 1) write_text_file(path_in(f.out, "pricing.json"), pricing_json(all));
  return 0;
}

// ---- sweep ----

int cmd_sweep(const CommonFlags& f, std::ostream& out) {
  const ExperimentConfig cfg = load_with_overrides(f);
  write_text_file(path_in(f.out, "config.used.json"), config_to_json(cfg));
  const auto rows = run_sweep(cfg, [&](const std::string& label, const PointResult& r) {
    write_point_outputs(path_in(path_in(f.out, "points"), label), cfg, r);
    const MetricStat& profit = find_stat(r.simulation.summary, "profit_per_period");
    out << label << ": g=" << r.pricing.profit;
    out << " simulated=" << profit.mean << " se=" << profit.standard_error;
    out << std::endl;
  });
  write_with(path_in(f.out, "sweep.csv"), [&](std::ostream& o) { write_sweep_csv(rows, o); });
  return 0;
}

// ---- ingest ----

struct IngestFlags {
  std::string trips;
  std::string zones;
  std::size_t k = 1;
  double scale = 1.0;
  int grid_cells = 20;
  std::optional<double> period_minutes;
  std::string window_start;
  std::string window_end;
  std::uint64_t seed = 1;
  std::string out = "out";
};

int cmd_ingest(const IngestFlags& f, std::ostream& out) {
  IngestOptions o;
  o.clusters_per_zone = f.k;
  o.scale_factor = f.scale;
  o.grid_cells = f.grid_cells;
  o.period_minutes = f.period_minutes;
  o.seed = f.seed;
  try {
    if (!f.window_start.empty()) o.window_start = parse_iso8601(f.window_start);
    if (!f.window_end.empty()) o.window_end = parse_iso8601(f.window_end);
  } catch (const InvalidArgument& e) {
    throw ConfigError(f.window_start.empty() ? "--window-end" : "--window-start", e.what());
  }
  const IngestResult r =
      ingest_trips(read_trips_csv_file(f.trips), read_zones_file(f.zones), o);
  for (const std::string& w : r.warnings) out << "warning: " << w << "\n";

  write_with(path_in(f.out, "network.txt"), [&](std::ostream& s) { write_network(*r.network, s); });
  write_with(path_in(f.out, "types.txt"), [&](std::ostream& s) { write_types(r.types, s); });

  ExperimentConfig cfg;
  cfg.instance.kind = InstanceKind::kFiles;
  cfg.instance.network_path = "network.txt";
  cfg.instance.types_path = "types.txt";
  cfg.period_minutes = r.period_minutes;
  const std::string text = config_to_json(cfg);
  write_text_file(path_in(f.out, "config.json"), text);
  write_text_file(path_in(f.out, "config.used.json"), text);

  json report;
  report["period_minutes"] = r.period_minutes;
  report["window_periods"] = r.window_periods;
  report["warnings"] = r.warnings;
  json types = json::array();
  for (std::size_t i = 0; i < r.types.size(); ++i) {
    types.push_back({{"id", r.types[i].id},
                     {"origin", r.types[i].origin},
                     {"destination", r.types[i].destination},
                     {"arrival_prob", r.types[i].arrival_prob},
                     {"zone", r.type_zone[i]},
                     {"trips", r.type_counts[i]},
                     {"dropoff_centroid", {r.dropoff_centroids[i].x, r.dropoff_centroids[i].y}}});
  }
  report["types"] = types;
  write_text_file(path_in(f.out, "ingest.json"), report.dump(2) + "\n");
  out << "wrote " << r.types.size() << " types on " << r.network->node_count() << " nodes to "
      << f.out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ride-pooling pricing and matching experiments"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a builtin instance and its config");
  gen_cmd->add_option("--example", gen.example, "1 = line, 2 = grid")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  gen_cmd->add_option("--L", gen.L, "line length (1) or trip length (2)")->capture_default_str();
  gen_cmd->add_option("--l", gen.l, "short trip length (1)")->capture_default_str();
  gen_cmd->add_option("--N", gen.N, "type count (2)")->capture_default_str();
  gen_cmd->add_option("--rows", gen.rows)->capture_default_str();
  gen_cmd->add_option("--cols", gen.cols)->capture_default_str();
  gen_cmd->add_option("--edge-length", gen.edge_length)->capture_default_str();
  gen_cmd->add_option("--total-arrival", gen.total_arrival)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "instance seed (2)")->capture_default_str();
  gen_cmd->add_option("--out", gen.out)->capture_default_str();

  CommonFlags fluid_flags;
  std::string fluid_lambda;
  std::string fluid_pricing;
  std::string lp_file;
  auto* fluid_cmd = app.add_subcommand("solve-fluid", "solve CB at a fixed conversion vector");
  add_common(fluid_cmd, fluid_flags, true);
  fluid_cmd->add_option("--lambda", fluid_lambda, "comma-separated conversion probabilities");
  fluid_cmd->add_option("--pricing", fluid_pricing, "pricing.json from an earlier run");
  fluid_cmd->add_option("--lp-file", lp_file, "also write the LP in CPLEX format");

  CommonFlags price_flags;
  auto* price_cmd = app.add_subcommand("price", "optimise prices");
  add_common(price_cmd, price_flags, true);

  CommonFlags sim_flags;
  bool events = false;
  std::string sim_pricing;
  auto* sim_cmd = app.add_subcommand("simulate", "price (or load prices) and simulate");
  add_common(sim_cmd, sim_flags, true);
  sim_cmd->add_flag("--events", events, "write per-replication event logs");
  sim_cmd->add_option("--pricing", sim_pricing, "pricing.json from an earlier run");

  CommonFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the configured grid");
  add_common(sweep_cmd, sweep_flags, true);

  IngestFlags ing;
  auto* ingest_cmd = app.add_subcommand("ingest", "build an instance from trip records");
  ingest_cmd->add_option("--trips", ing.trips, "trip CSV")->required();
  ingest_cmd->add_option("--zones", ing.zones, "zone polygons")->required();
  ingest_cmd->add_option("--k", ing.k, "dropoff clusters per zone")->capture_default_str();
  ingest_cmd->add_option("--scale", ing.scale, "arrival probability multiplier")
      ->capture_default_str();
  ingest_cmd->add_option("--grid-cells", ing.grid_cells)->capture_default_str();
  ingest_cmd->add_option("--period-minutes", ing.period_minutes);
  ingest_cmd->add_option("--window-start", ing.window_start, "ISO-8601");
  ingest_cmd->add_option("--window-end", ing.window_end, "ISO-8601");
  ingest_cmd->add_option("--seed", ing.seed, "k-means seed")->capture_default_str();
  ingest_cmd->add_option("--out", ing.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*fluid_cmd) return cmd_solve_fluid(fluid_flags, fluid_lambda, fluid_pricing, lp_file, out);
    if (*price_cmd) return cmd_price(price_flags, out);
    if (*sim_cmd) return cmd_simulate(sim_flags, events, sim_pricing, out);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, out);
    if (*ingest_cmd) return cmd_ingest(ing, out);
  } catch (const ConfigError& e) {
    err << "config error at '" << e.key() << "': " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace tripmatch::harness
