#include "tripmatch/policy.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "tripmatch/error.hpp"

namespace tripmatch {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kPreTrip:
      return "pre_trip";
    case PolicyKind::kOnTrip:
      return "on_trip";
    case PolicyKind::kCombined:
      return "combined";
  }
  return "unknown";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "pre_trip") return PolicyKind::kPreTrip;
  if (name == "on_trip") return PolicyKind::kOnTrip;
  if (name == "combined") return PolicyKind::kCombined;
  throw InvalidArgument("unknown policy '" + name + "' (expected pre_trip, on_trip or combined)");
}

FluidParams params_for_policy(PolicyKind kind, FluidParams base) {
  switch (kind) {
    case PolicyKind::kPreTrip:
      base.enable_pre_trip = true;
      base.enable_on_trip = false;
      break;
    case PolicyKind::kOnTrip:
      base.enable_pre_trip = false;
      base.enable_on_trip = true;
      base.waiting_window = 0;
      break;
    case PolicyKind::kCombined:
      base.enable_pre_trip = true;
      base.enable_on_trip = true;
      break;
  }
  return base;
}

DualTables::DualTables(int waiting_window, std::vector<double> gamma,
                       std::vector<std::vector<double>> xi)
    : window_(waiting_window), gamma_(std::move(gamma)), xi_(std::move(xi)) {
  if (window_ < 0) throw InvalidArgument("waiting window must be >= 0");
  if (xi_.size() != gamma_.size()) throw InvalidArgument("xi and gamma cover different types");
  for (std::size_t i = 0; i < xi_.size(); ++i) {
    if (xi_[i].empty()) throw InvalidArgument("xi table of a type is empty");
    if (xi_[i].front() != gamma_[i]) throw InvalidArgument("xi at the entry state must equal gamma");
  }
}

DualTables DualTables::from_solution(const FluidSolution& solution) {
  if (!solution.layout) throw InvalidArgument("fluid solution has no layout");
  const CbLayout& layout = *solution.layout;
  const int window = layout.waiting_window();
  std::vector<std::vector<double>> xi(layout.type_count());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const int it = static_cast<int>(i);
    for (int u = -window; u <= layout.max_clock(it); ++u) xi[i].push_back(solution.xi_at(it, u));
  }
  return DualTables(window, solution.gamma, std::move(xi));
}

double DualTables::xi(int type, int clock) const {
  const auto& row = xi_.at(static_cast<std::size_t>(type));
  const int k = clock + window_;
  if (k < 0 || static_cast<std::size_t>(k) >= row.size()) {
    throw InvalidArgument("no dual for clock " + std::to_string(clock));
  }
  return row[static_cast<std::size_t>(k)];
}

namespace {

std::optional<int> shared_length(const CompatTable& compat, int new_type, int type, int clock) {
  for (const CompatEntry& e : compat.compatible(type, clock)) {
    if (e.new_type == new_type) return e.shared_length;
    if (e.new_type > new_type) break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<OnTripChoice> on_trip_decide(const DualTables& duals, const CompatTable& compat,
                                           double cost_per_unit,
                                           std::span<const ActiveRider> riders, int new_type,
                                           const PolicyOptions& options) {
  std::optional<OnTripChoice> best;
  for (std::size_t r = 0; r < riders.size(); ++r) {
    const ActiveRider& a = riders[r];
    if (a.clock < 1) continue;
    const auto len = shared_length(compat, new_type, a.type, a.clock);
    if (!len) continue;
    const double cost = cost_per_unit * *len - duals.xi(a.type, a.clock);
    const bool wins =
        !best || std::make_tuple(cost, a.clock, a.type) <
                     std::make_tuple(best->cost, riders[best->rider].clock, riders[best->rider].type);
    if (wins) best = OnTripChoice{r, cost};
  }
  if (best && duals.gamma(new_type) >= best->cost - options.decision_tol) return best;
  return std::nullopt;
}

std::vector<PairDecision> candidate_pairs(const DualTables& duals, const CompatTable& compat,
                                          double cost_per_unit,
                                          std::span<const ActiveRider> riders) {
  std::vector<PairDecision> out;
  for (std::size_t a = 0; a < riders.size(); ++a) {
    for (std::size_t b = 0; b < riders.size(); ++b) {
      const ActiveRider& e = riders[a];
      const ActiveRider& l = riders[b];
      if (!(e.clock < l.clock)) continue;
      // At least one side waiting, at least one ready to depart or moving.
      if (!(e.clock <= 0 && l.clock >= 0)) continue;
      const auto len = shared_length(compat, e.type, l.type, l.clock);
      if (!len) continue;
      const double cost =
          cost_per_unit * *len - duals.xi(e.type, e.clock) - duals.xi(l.type, l.clock);
      out.push_back({a, b, cost});
    }
  }
  std::sort(out.begin(), out.end(), [&](const PairDecision& x, const PairDecision& y) {
    return std::make_tuple(x.cost, riders[x.later].clock, riders[x.later].type,
                           riders[x.earlier].clock, riders[x.earlier].type) <
           std::make_tuple(y.cost, riders[y.later].clock, riders[y.later].type,
                           riders[y.earlier].clock, riders[y.earlier].type);
  });
  return out;
}

std::vector<PairDecision> combined_decide(const DualTables& duals, const CompatTable& compat,
                                          double cost_per_unit,
                                          std::span<const ActiveRider> riders,
                                          const PolicyOptions& options) {
  const std::vector<PairDecision> pairs = candidate_pairs(duals, compat, cost_per_unit, riders);
  std::vector<WeightedEdge> edges;
  std::vector<const PairDecision*> source;
  for (const PairDecision& p : pairs) {
    if (p.cost > options.decision_tol) break;
    // Costs within the tolerance count as break-even.
    edges.push_back({static_cast<int>(p.earlier), static_cast<int>(p.later), std::min(p.cost, 0.0)});
    source.push_back(&p);
  }
  if (edges.empty()) return {};
  MatchingOptions mopts;
  mopts.max_vertices = options.max_matching_riders;
  mopts.eligibility_tol = 0.0;
  const Matching m = exact_matching(riders.size(), edges, mopts);

  std::vector<PairDecision> out;
  for (const auto& [a, b] : m.pairs) {
    for (const PairDecision* p : source) {
      const auto x = static_cast<int>(p->earlier);
      const auto y = static_cast<int>(p->later);
      if ((x == a && y == b) || (x == b && y == a)) {
        out.push_back(*p);
        break;
      }
    }
  }
  return out;
}

}  // namespace tripmatch
