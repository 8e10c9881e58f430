#include "tripmatch/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "tripmatch/error.hpp"

namespace tripmatch {

double FluidInstance::fare(int i, double lambda) const {
  const double p = geometry->type(i).wtp.price(lambda);
  return params.fare == FareConvention::kPerMile ? p * geometry->length(i) : p;
}

double FluidInstance::expected_revenue(int i, double lambda) const {
  const RiderType& t = geometry->type(i);
  const double scale = params.fare == FareConvention::kPerMile ? geometry->length(i) : 1.0;
  return t.arrival_prob * t.wtp.revenue_factor(lambda) * scale;
}

void FluidInstance::validate() const {
  if (!geometry) throw InvalidArgument("fluid instance has no geometry");
  if (!(std::isfinite(params.cost_per_unit) && params.cost_per_unit > 0.0)) {
    throw InvalidArgument("cost per unit distance must be positive");
  }
  if (params.waiting_window < 0) throw InvalidArgument("waiting window must be >= 0");
  if (!params.enable_pre_trip && params.waiting_window != 0) {
    throw InvalidArgument("waiting window must be 0 when pre-trip matching is disabled");
  }
}

FluidInstance make_fluid_instance(std::shared_ptr<const TripGeometry> geometry, FluidParams params) {
  if (!params.enable_pre_trip) params.waiting_window = 0;
  FluidInstance inst{std::move(geometry), params, nullptr};
  inst.validate();
  CompatOptions opts;
  opts.waiting_window = params.waiting_window;
  opts.on_trip = params.enable_on_trip;
  opts.max_entries = params.max_compat_entries;
  inst.compat = std::make_shared<const CompatTable>(build_compat_table(*inst.geometry, opts));
  return inst;
}

CbLayout::CbLayout(const FluidInstance& instance) {
  instance.validate();
  if (!instance.compat) throw Error("fluid instance has no compatibility table");
  const CompatTable& compat = *instance.compat;
  window_ = instance.params.waiting_window;
  if (compat.waiting_window() != window_ || compat.type_count() != instance.type_count()) {
    throw Error("compatibility table does not match the instance");
  }
  ratio_rows_ = instance.params.enable_ratio_constraints;
  const std::size_t n = instance.type_count();
  by_new_type_.resize(n);

  for (std::size_t j = 0; j < n; ++j) {
    state_base_.push_back(state_count_);
    max_clock_.push_back(compat.max_clock(static_cast<int>(j)));
    state_count_ += static_cast<std::size_t>(max_clock_.back() + window_ + 1);
  }
  state_match_offsets_.push_back(0);
  for (std::size_t j = 0; j < n; ++j) {
    const int jt = static_cast<int>(j);
    for (int u = -window_; u <= max_clock_[j]; ++u) {
      if (u > -window_) {
        for (const CompatEntry& e : compat.compatible(jt, u)) {
          const std::size_t m = match_vars_.size();
          match_vars_.push_back({e.new_type, jt, u, e.shared_length});
          state_matches_.push_back(m);
          by_new_type_[static_cast<std::size_t>(e.new_type)].push_back(m);
        }
      }
      state_match_offsets_.push_back(state_matches_.size());
    }
  }
  std::size_t row = n;
  for (std::size_t j = 0; j < n; ++j) {
    flow_base_.push_back(row);
    row += static_cast<std::size_t>(max_clock_[j] + window_);
  }
  ratio_base_ = row;
}

std::size_t CbLayout::state_index(int type, int clock) const {
  const auto t = static_cast<std::size_t>(type);
  if (type < 0 || t >= state_base_.size() || clock < -window_ || clock > max_clock_[t]) {
    throw InvalidArgument("state (" + std::to_string(type) + ", " + std::to_string(clock) +
                          ") outside the layout");
  }
  return state_base_[t] + static_cast<std::size_t>(clock + window_);
}

std::span<const std::size_t> CbLayout::matches_at(int type, int clock) const {
  const std::size_t s = state_index(type, clock);
  return std::span<const std::size_t>(state_matches_)
      .subspan(state_match_offsets_[s], state_match_offsets_[s + 1] - state_match_offsets_[s]);
}

std::span<const std::size_t> CbLayout::matches_of_new_type(int type) const {
  return by_new_type_.at(static_cast<std::size_t>(type));
}

std::size_t CbLayout::flow_row(int type, int clock) const {
  state_index(type, clock);
  if (clock <= -window_) throw InvalidArgument("no flow row for the entry state");
  return flow_base_[static_cast<std::size_t>(type)] + static_cast<std::size_t>(clock + window_ - 1);
}

namespace {

void check_lambda(const FluidInstance& instance, std::span<const double> lambda) {
  if (lambda.size() != instance.type_count()) {
    throw InvalidArgument("lambda has " + std::to_string(lambda.size()) + " entries, expected " +
                          std::to_string(instance.type_count()));
  }
  for (double l : lambda) {
    if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("lambda entries must lie in [0, 1]");
  }
}

std::string state_suffix(int type, int clock) {
  return std::to_string(type) + (clock < 0 ? "_m" : "_") + std::to_string(std::abs(clock));
}

}  // namespace

LinearProgram build_cb(const FluidInstance& instance, std::span<const double> lambda) {
  return build_cb(instance, CbLayout(instance), lambda);
}

LinearProgram build_cb(const FluidInstance& instance, const CbLayout& layout,
                       std::span<const double> lambda) {
  check_lambda(instance, lambda);
  const std::size_t n = instance.type_count();
  const int window = layout.waiting_window();
  const double c = instance.params.cost_per_unit;
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i] = instance.geometry->type(static_cast<int>(i)).arrival_prob * lambda[i];
  }

  LinearProgram lp;
  lp.objective.reserve(layout.variable_count());
  lp.variable_names.reserve(layout.variable_count());
  for (std::size_t j = 0; j < n; ++j) {
    const int jt = static_cast<int>(j);
    for (int u = -window; u <= layout.max_clock(jt); ++u) {
      lp.add_variable(u >= 0 ? c : 0.0, "y_" + state_suffix(jt, u));
    }
  }
  const auto matches = layout.match_vars();
  for (const MatchVar& m : matches) {
    lp.add_variable(c * m.shared_length,
                    "x_" + std::to_string(m.new_type) + "_" + state_suffix(m.existing_type, m.clock));
  }

  lp.rows.reserve(layout.row_count());
  for (std::size_t i = 0; i < n; ++i) {
    const int it = static_cast<int>(i);
    std::vector<LinearProgram::Term> terms;
    terms.push_back({layout.y_var(it, -window), 1.0});
    for (std::size_t m : layout.matches_of_new_type(it)) terms.push_back({layout.x_var(m), 1.0});
    lp.add_row(std::move(terms), Relation::kEqual, rate[i], "demand_" + std::to_string(i));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const int jt = static_cast<int>(j);
    for (int u = -window + 1; u <= layout.max_clock(jt); ++u) {
      std::vector<LinearProgram::Term> terms;
      for (std::size_t m : layout.matches_at(jt, u)) terms.push_back({layout.x_var(m), 1.0});
      terms.push_back({layout.y_var(jt, u), 1.0});
      terms.push_back({layout.y_var(jt, u - 1), -1.0});
      lp.add_row(std::move(terms), Relation::kEqual, 0.0, "flow_" + state_suffix(jt, u));
    }
  }
  if (layout.has_ratio_rows()) {
    for (std::size_t m = 0; m < matches.size(); ++m) {
      const MatchVar& mv = matches[m];
      double compatible_rate = 0.0;
      for (std::size_t k : layout.matches_at(mv.existing_type, mv.clock)) {
        compatible_rate += rate[static_cast<std::size_t>(matches[k].new_type)];
      }
      std::vector<LinearProgram::Term> terms;
      terms.push_back({layout.y_var(mv.existing_type, mv.clock),
                       rate[static_cast<std::size_t>(mv.new_type)]});
      terms.push_back({layout.x_var(m), -(1.0 - compatible_rate)});
      lp.add_row(std::move(terms), Relation::kGreaterEqual, 0.0,
                 "ratio_" + std::to_string(mv.new_type) + "_" +
                     state_suffix(mv.existing_type, mv.clock));
    }
  }
  return lp;
}

FluidSolution solve_cb(const FluidInstance& instance, std::span<const double> lambda,
                       const SimplexOptions& options) {
  return solve_cb(instance, std::make_shared<const CbLayout>(instance), lambda, options);
}

FluidSolution solve_cb(const FluidInstance& instance, std::shared_ptr<const CbLayout> layout,
                       std::span<const double> lambda, const SimplexOptions& options) {
  if (!layout) throw InvalidArgument("missing CB layout");
  const LinearProgram lp = build_cb(instance, *layout, lambda);
  const LpSolution lps = solve_lp(lp, options);
  if (lps.status != LpStatus::kOptimal) {
    throw Error(std::string("CB(lambda) solve ended ") + to_string(lps.status));
  }

  FluidSolution sol;
  sol.layout = layout;
  sol.lambda.assign(lambda.begin(), lambda.end());
  sol.cost = lps.objective;
  sol.iterations = lps.iterations;
  const std::size_t states = layout->state_count();
  const std::size_t n = layout->type_count();
  const int window = layout->waiting_window();
  sol.y.assign(lps.primal.begin(), lps.primal.begin() + static_cast<std::ptrdiff_t>(states));
  sol.x.assign(lps.primal.begin() + static_cast<std::ptrdiff_t>(states), lps.primal.end());
  sol.gamma.resize(n);
  sol.xi.assign(states, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const int jt = static_cast<int>(j);
    sol.gamma[j] = lps.dual[layout->demand_row(jt)];
    sol.xi[layout->state_index(jt, -window)] = sol.gamma[j];
    for (int u = -window + 1; u <= layout->max_clock(jt); ++u) {
      sol.xi[layout->state_index(jt, u)] = lps.dual[layout->flow_row(jt, u)];
    }
  }
  sol.eta.assign(layout->match_vars().size(), 0.0);
  if (layout->has_ratio_rows()) {
    for (std::size_t m = 0; m < sol.eta.size(); ++m) sol.eta[m] = lps.dual[layout->ratio_row(m)];
  }
  return sol;
}

std::vector<double> cost_gradient(const FluidSolution& solution, const FluidInstance& instance) {
  if (!solution.layout || solution.gamma.size() != instance.type_count() ||
      solution.eta.size() != solution.layout->match_vars().size()) {
    throw Error("fluid solution is missing duals");
  }
  const CbLayout& layout = *solution.layout;
  const auto matches = layout.match_vars();
  const std::size_t n = instance.type_count();

  // W(j,u) = sum over k in N+(j,u) of x_k * eta_k, shared by every i in N+(j,u).
  std::vector<double> weighted(layout.state_count(), 0.0);
  for (std::size_t m = 0; m < matches.size(); ++m) {
    weighted[layout.state_index(matches[m].existing_type, matches[m].clock)] +=
        solution.x[m] * solution.eta[m];
  }
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int it = static_cast<int>(i);
    const double arrival = instance.geometry->type(it).arrival_prob;
    double ratio_term = 0.0;
    for (std::size_t m : layout.matches_of_new_type(it)) {
      const std::size_t s = layout.state_index(matches[m].existing_type, matches[m].clock);
      ratio_term += solution.y[s] * solution.eta[m] + weighted[s];
    }
    grad[i] = arrival * solution.gamma[i] - arrival * ratio_term;
  }
  return grad;
}

double fluid_profit(const FluidInstance& instance, const FluidSolution& solution) {
  double revenue = 0.0;
  for (std::size_t i = 0; i < instance.type_count(); ++i) {
    revenue += instance.expected_revenue(static_cast<int>(i), solution.lambda[i]);
  }
  return revenue - solution.cost;
}

double fluid_profit(const FluidInstance& instance, std::span<const double> lambda) {
  return fluid_profit(instance, solve_cb(instance, lambda));
}

void write_solution_csv(const FluidSolution& solution, const FluidInstance& instance,
                        std::ostream& out) {
  const CbLayout& layout = *solution.layout;
  const int window = layout.waiting_window();
  const auto old_precision = out.precision(17);
  out << "name,value,dual\n";
  for (std::size_t j = 0; j < instance.type_count(); ++j) {
    const int jt = static_cast<int>(j);
    out << "gamma_" << j << ",," << solution.gamma[j] << '\n';
    for (int u = -window; u <= layout.max_clock(jt); ++u) {
      const std::size_t s = layout.state_index(jt, u);
      out << "y_" << state_suffix(jt, u) << ',' << solution.y[s] << ',' << solution.xi[s] << '\n';
    }
  }
  const auto matches = layout.match_vars();
  for (std::size_t m = 0; m < matches.size(); ++m) {
    out << "x_" << matches[m].new_type << '_' << state_suffix(matches[m].existing_type, matches[m].clock)
        << ',' << solution.x[m] << ',' << solution.eta[m] << '\n';
  }
  out << "cost," << solution.cost << ",\n";
  out.precision(old_precision);
}

}  // namespace tripmatch
