#include "tripmatch/harness/config.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "json.hpp"
#include "tripmatch/error.hpp"
#include "tripmatch/harness/io.hpp"

namespace tripmatch::harness {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& prefix, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(join(prefix, key), "unknown key");
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& key, std::int64_t min) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min) throw ConfigError(key, "must be >= " + std::to_string(min));
  return x;
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

// A scalar or a non-empty array of them.
template <typename T, typename Fn>
std::vector<T> list_of(const json& v, const std::string& key, const Fn& one) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(key, "list must not be empty");
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(one(v[k], key + "[" + std::to_string(k) + "]"));
  } else {
    out.push_back(one(v, key));
  }
  return out;
}

std::string resolve(const std::string& base, const std::string& path) {
  const std::filesystem::path p(path);
  // Absolute, so the echoed config stays valid from any directory.
  if (p.is_absolute()) return p.lexically_normal().string();
  const std::filesystem::path b = base.empty() ? std::filesystem::path(".") : std::filesystem::path(base);
  return std::filesystem::absolute(b / p).lexically_normal().string();
}

void parse_instance(const json& j, InstanceSpec& s, const std::string& base) {
  const std::string pre = "instance";
  check_keys(j, pre, {"kind", "total_arrival", "L", "l", "N", "rows", "cols", "edge_length", "seed",
                      "network", "types"});
  if (!j.contains("kind")) throw ConfigError("instance.kind", "missing");
  const std::string kind = text(j["kind"], "instance.kind");
  if (kind == "example1") {
    s.kind = InstanceKind::kExample1;
  } else if (kind == "example2") {
    s.kind = InstanceKind::kExample2;
  } else if (kind == "files") {
    s.kind = InstanceKind::kFiles;
  } else {
    throw ConfigError("instance.kind", "expected example1, example2 or files");
  }
  if (j.contains("total_arrival")) {
    s.total_arrival = number(j["total_arrival"], "instance.total_arrival");
    if (!(s.total_arrival > 0.0 && s.total_arrival <= 1.0)) {
      throw ConfigError("instance.total_arrival", "must lie in (0, 1]");
    }
  }
  auto int_key = [&](const char* key, int& out, int min) {
    if (j.contains(key)) out = static_cast<int>(integer(j[key], join(pre, key), min));
  };
  int_key("L", s.L, 1);
  int_key("l", s.l, 1);
  int_key("N", s.type_count, 1);
  int_key("rows", s.rows, 1);
  int_key("cols", s.cols, 1);
  int_key("edge_length", s.edge_length, 1);
  if (s.kind == InstanceKind::kExample2) {
    // For grids, L is the trip length.
    s.trip_length = j.contains("L") ? s.L : s.trip_length;
  }
  if (j.contains("seed")) s.instance_seed = static_cast<std::uint64_t>(integer(j["seed"], "instance.seed", 0));
  if (s.kind == InstanceKind::kExample1 && s.l > s.L) throw ConfigError("instance.l", "must be <= L");
  if (s.kind == InstanceKind::kFiles) {
    if (!j.contains("network")) throw ConfigError("instance.network", "missing");
    if (!j.contains("types")) throw ConfigError("instance.types", "missing");
    s.network_path = resolve(base, text(j["network"], "instance.network"));
    s.types_path = resolve(base, text(j["types"], "instance.types"));
  }
}

WtpModel parse_wtp(const json& j) {
  check_keys(j, "wtp", {"kind", "low", "high", "mean"});
  const std::string kind = j.contains("kind") ? text(j["kind"], "wtp.kind") : "uniform";
  try {
    if (kind == "uniform") {
      return WtpModel::uniform(j.contains("low") ? number(j["low"], "wtp.low") : 0.0,
                               j.contains("high") ? number(j["high"], "wtp.high") : 1.0);
    }
    if (kind == "exponential") {
      if (!j.contains("mean")) throw ConfigError("wtp.mean", "missing");
      return WtpModel::exponential(number(j["mean"], "wtp.mean"));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError("wtp", e.what());
  }
  throw ConfigError("wtp.kind", "expected uniform or exponential");
}

void parse_pricing(const json& j, PricingConfig& p) {
  check_keys(j, "pricing", {"tolerance", "max_iterations", "max_backtracks", "restarts", "seed",
                            "initial_lambda", "restart_tolerance"});
  if (j.contains("tolerance")) {
    p.tolerance = number(j["tolerance"], "pricing.tolerance");
    if (!(p.tolerance > 0.0)) throw ConfigError("pricing.tolerance", "must be positive");
  }
  if (j.contains("max_iterations")) {
    p.max_iterations = static_cast<std::size_t>(integer(j["max_iterations"], "pricing.max_iterations", 0));
  }
  if (j.contains("max_backtracks")) {
    p.max_backtracks = static_cast<std::size_t>(integer(j["max_backtracks"], "pricing.max_backtracks", 0));
  }
  if (j.contains("restarts")) {
    p.restarts = static_cast<std::size_t>(integer(j["restarts"], "pricing.restarts", 0));
  }
  if (j.contains("seed")) p.seed = static_cast<std::uint64_t>(integer(j["seed"], "pricing.seed", 0));
  if (j.contains("restart_tolerance")) {
    p.restart_tolerance = number(j["restart_tolerance"], "pricing.restart_tolerance");
  }
  if (j.contains("initial_lambda")) {
    p.initial_lambda = list_of<double>(j["initial_lambda"], "pricing.initial_lambda",
                                       [](const json& v, const std::string& key) {
                                         const double x = number(v, key);
                                         if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
                                         return x;
                                       });
  }
}

void parse_sweep(const json& j, SweepSpec& s) {
  check_keys(j, "sweep", {"kind", "deltas", "type_counts", "seeds"});
  if (j.contains("kind")) {
    const std::string kind = text(j["kind"], "sweep.kind");
    if (kind == "grid") {
      s.kind = SweepKind::kGrid;
    } else if (kind == "delta") {
      s.kind = SweepKind::kDelta;
    } else if (kind == "types") {
      s.kind = SweepKind::kTypes;
    } else {
      throw ConfigError("sweep.kind", "expected grid, delta or types");
    }
  }
  if (j.contains("deltas")) {
    s.deltas = list_of<double>(j["deltas"], "sweep.deltas", [](const json& v, const std::string& key) {
      const double x = number(v, key);
      if (!(x >= 0.0 && x < 1.0)) throw ConfigError(key, "must lie in [0, 1)");
      return x;
    });
  }
  if (j.contains("type_counts")) {
    s.type_counts = list_of<int>(j["type_counts"], "sweep.type_counts",
                                 [](const json& v, const std::string& key) {
                                   return static_cast<int>(integer(v, key, 1));
                                 });
  }
  if (j.contains("seeds")) {
    s.instance_seeds = list_of<std::uint64_t>(j["seeds"], "sweep.seeds",
                                              [](const json& v, const std::string& key) {
                                                return static_cast<std::uint64_t>(integer(v, key, 0));
                                              });
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "", {"instance", "policy", "T", "c", "wtp", "fare", "ratio_constraints", "periods",
                     "replications", "seed", "period_minutes", "pricing", "pricing_file",
                     "record_events", "decision_tol", "max_matching_riders", "threads", "sweep"});
  ExperimentConfig cfg;
  if (j.contains("instance")) parse_instance(j["instance"], cfg.instance, base_dir);
  if (j.contains("policy")) {
    cfg.policies = list_of<PolicyKind>(j["policy"], "policy", [](const json& v, const std::string& key) {
      try {
        return parse_policy(text(v, key));
      } catch (const InvalidArgument& e) {
        throw ConfigError(key, e.what());
      }
    });
  }
  if (j.contains("T")) {
    cfg.windows = list_of<int>(j["T"], "T", [](const json& v, const std::string& key) {
      return static_cast<int>(integer(v, key, 0));
    });
  }
  if (j.contains("c")) {
    cfg.costs = list_of<double>(j["c"], "c", [](const json& v, const std::string& key) {
      const double x = number(v, key);
      if (!(x > 0.0)) throw ConfigError(key, "must be positive");
      return x;
    });
  }
  if (j.contains("wtp")) cfg.wtp = parse_wtp(j["wtp"]);
  if (j.contains("fare")) {
    const std::string f = text(j["fare"], "fare");
    if (f == "per_mile") {
      cfg.fare = FareConvention::kPerMile;
    } else if (f == "per_trip") {
      cfg.fare = FareConvention::kPerTrip;
    } else {
      throw ConfigError("fare", "expected per_mile or per_trip");
    }
  }
  if (j.contains("ratio_constraints")) cfg.ratio_constraints = boolean(j["ratio_constraints"], "ratio_constraints");
  if (j.contains("periods")) cfg.periods = integer(j["periods"], "periods", 1);
  if (j.contains("replications")) {
    cfg.replications = static_cast<std::size_t>(integer(j["replications"], "replications", 1));
  }
  if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(integer(j["seed"], "seed", 0));
  if (j.contains("period_minutes")) {
    const double m = number(j["period_minutes"], "period_minutes");
    if (!(m > 0.0)) throw ConfigError("period_minutes", "must be positive");
    cfg.period_minutes = m;
  }
  if (j.contains("pricing")) parse_pricing(j["pricing"], cfg.pricing);
  if (j.contains("pricing_file")) cfg.pricing_file = resolve(base_dir, text(j["pricing_file"], "pricing_file"));
  if (j.contains("record_events")) cfg.record_events = boolean(j["record_events"], "record_events");
  if (j.contains("decision_tol")) {
    cfg.decision_tol = number(j["decision_tol"], "decision_tol");
    if (!(cfg.decision_tol >= 0.0)) throw ConfigError("decision_tol", "must be >= 0");
  }
  if (j.contains("max_matching_riders")) {
    cfg.max_matching_riders = static_cast<std::size_t>(integer(j["max_matching_riders"], "max_matching_riders", 2));
  }
  if (j.contains("threads")) cfg.threads = static_cast<unsigned>(integer(j["threads"], "threads", 0));
  if (j.contains("sweep")) parse_sweep(j["sweep"], cfg.sweep);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::string body;
  try {
    body = read_text_file(path);
  } catch (const InvalidArgument& e) {
    throw ConfigError("--config", e.what());
  }
  return parse_config(body, std::filesystem::path(path).parent_path().string());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  json inst;
  switch (c.instance.kind) {
    case InstanceKind::kExample1:
      inst = {{"kind", "example1"}, {"L", c.instance.L}, {"l", c.instance.l}};
      break;
    case InstanceKind::kExample2:
      inst = {{"kind", "example2"},          {"N", c.instance.type_count},
              {"rows", c.instance.rows},     {"cols", c.instance.cols},
              {"edge_length", c.instance.edge_length}, {"L", c.instance.trip_length},
              {"seed", c.instance.instance_seed}};
      break;
    case InstanceKind::kFiles:
      inst = {{"kind", "files"}, {"network", c.instance.network_path}, {"types", c.instance.types_path}};
      break;
  }
  if (c.instance.kind != InstanceKind::kFiles) inst["total_arrival"] = c.instance.total_arrival;
  j["instance"] = inst;
  json policies = json::array();
  for (PolicyKind p : c.policies) policies.push_back(to_string(p));
  j["policy"] = policies;
  j["T"] = c.windows;
  j["c"] = c.costs;
  if (c.wtp.kind() == WtpModel::Kind::kUniform) {
    j["wtp"] = {{"kind", "uniform"}, {"low", c.wtp.low()}, {"high", c.wtp.high()}};
  } else {
    j["wtp"] = {{"kind", "exponential"}, {"mean", c.wtp.mean()}};
  }
  j["fare"] = c.fare == FareConvention::kPerMile ? "per_mile" : "per_trip";
  j["ratio_constraints"] = c.ratio_constraints;
  j["periods"] = c.periods;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  if (c.period_minutes) j["period_minutes"] = *c.period_minutes;
  json pricing = {{"tolerance", c.pricing.tolerance},
                  {"max_iterations", c.pricing.max_iterations},
                  {"max_backtracks", c.pricing.max_backtracks},
                  {"restarts", c.pricing.restarts},
                  {"seed", c.pricing.seed},
                  {"restart_tolerance", c.pricing.restart_tolerance}};
  if (!c.pricing.initial_lambda.empty()) pricing["initial_lambda"] = c.pricing.initial_lambda;
  j["pricing"] = pricing;
  if (!c.pricing_file.empty()) j["pricing_file"] = c.pricing_file;
  j["record_events"] = c.record_events;
  j["decision_tol"] = c.decision_tol;
  j["max_matching_riders"] = c.max_matching_riders;
  j["threads"] = c.threads;
  const char* kinds[] = {"grid", "delta", "types"};
  j["sweep"] = {{"kind", kinds[static_cast<int>(c.sweep.kind)]},
                {"deltas", c.sweep.deltas},
                {"type_counts", c.sweep.type_counts},
                {"seeds", c.sweep.instance_seeds}};
  return j.dump(2) + "\n";
}

}  // namespace tripmatch::harness
