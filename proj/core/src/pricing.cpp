#include "tripmatch/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <random>

namespace tripmatch {

namespace {

double golden_max(const auto& f) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  while (hi - lo > 1e-12) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = f(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = f(a);
    }
  }
  double best = 0.5 * (lo + hi);
  // Endpoints can win for monotone objectives.
  for (double edge : {0.0, 1.0}) {
    if (f(edge) > f(best)) best = edge;
  }
  return best;
}

struct Run {
  std::vector<PricingIterate> trace;
  FluidSolution solution;
  double profit = 0.0;
};

Run run_mm(const FluidInstance& instance, const std::shared_ptr<const CbLayout>& layout,
           std::vector<double> lambda, const PricingConfig& config) {
  Run run;
  auto evaluate = [&](const std::vector<double>& l) {
    try {
      return solve_cb(instance, layout, l, config.lp);
    } catch (const Error& e) {
      throw PricingFailure(std::string("pricing aborted: ") + e.what(), run.trace);
    }
  };
  run.solution = evaluate(lambda);
  run.profit = fluid_profit(instance, run.solution);
  run.trace.push_back({0, run.profit, lambda});

  for (std::size_t k = 1; k <= config.max_iterations; ++k) {
    const std::vector<double> grad = cost_gradient(run.solution, instance);
    const std::vector<double> target = surrogate_argmax(instance, grad);

    // The linearised cost does not bound C from above, so the surrogate step
    // can overshoot. Backtrack toward the current point until profit rises.
    bool improved = false;
    double gain = 0.0;
    double step = 1.0;
    for (std::size_t b = 0; b <= config.max_backtracks; ++b, step *= 0.5) {
      std::vector<double> trial(lambda.size());
      bool moved = false;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        trial[i] = std::clamp(lambda[i] + step * (target[i] - lambda[i]), 0.0, 1.0);
        moved = moved || trial[i] != lambda[i];
      }
      if (!moved) break;
      FluidSolution sol = evaluate(trial);
      const double profit = fluid_profit(instance, sol);
      if (profit > run.profit) {
        gain = profit - run.profit;
        lambda = std::move(trial);
        run.solution = std::move(sol);
        run.profit = profit;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    run.trace.push_back({k, run.profit, lambda});
    if (gain < config.tolerance) break;
  }
  return run;
}

}  // namespace

std::vector<double> surrogate_argmax(const FluidInstance& instance, std::span<const double> grad) {
  const std::size_t n = instance.type_count();
  if (grad.size() != n) throw InvalidArgument("gradient size does not match the type count");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int it = static_cast<int>(i);
    const RiderType& t = instance.geometry->type(it);
    if (t.arrival_prob <= 0.0) continue;
    const double scale =
        instance.params.fare == FareConvention::kPerMile ? instance.geometry->length(it) : 1.0;
    if (t.wtp.has_linear_price()) {
      // d/dl [Lambda s l (high - (high - low) l)] = grad
      const double intercept = t.arrival_prob * scale * t.wtp.high();
      const double slope = t.arrival_prob * scale * (t.wtp.high() - t.wtp.low());
      out[i] = std::clamp((intercept - grad[i]) / (2.0 * slope), 0.0, 1.0);
    } else {
      const double g = grad[i];
      out[i] = golden_max([&](double l) { return instance.expected_revenue(it, l) - g * l; });
    }
  }
  return out;
}

std::vector<double> default_initial_lambda(const FluidInstance& instance) {
  std::vector<double> grad(instance.type_count());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const int it = static_cast<int>(i);
    grad[i] = instance.geometry->type(it).arrival_prob * instance.params.cost_per_unit *
              instance.geometry->length(it);
  }
  return surrogate_argmax(instance, grad);
}

PricingResult mm_optimize(const FluidInstance& instance, const PricingConfig& config) {
  if (!(config.tolerance > 0.0)) throw InvalidArgument("pricing tolerance must be positive");
  const std::size_t n = instance.type_count();
  std::vector<double> start = config.initial_lambda;
  if (start.empty()) {
    start = default_initial_lambda(instance);
  } else if (start.size() == 1 && n > 1) {
    start.assign(n, start.front());
  }
  if (start.size() != n) throw InvalidArgument("initial lambda size does not match the type count");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(start[i] >= 0.0 && start[i] <= 1.0)) {
      throw InvalidArgument("initial lambda entries must lie in [0, 1]");
    }
    if (instance.geometry->type(static_cast<int>(i)).arrival_prob <= 0.0) start[i] = 0.0;
  }

  const auto layout = std::make_shared<const CbLayout>(instance);
  PricingResult result;
  Run best = run_mm(instance, layout, start, config);
  result.run_profits.push_back(best.profit);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(seq);
    std::vector<double> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = unit(rng);
      if (instance.geometry->type(static_cast<int>(i)).arrival_prob <= 0.0) l[i] = 0.0;
    }
    Run run = run_mm(instance, layout, std::move(l), config);
    result.run_profits.push_back(run.profit);
    if (run.profit > best.profit) best = std::move(run);
  }

  const double top = *std::max_element(result.run_profits.begin(), result.run_profits.end());
  for (double p : result.run_profits) {
    if (top - p > config.restart_tolerance * std::max(1.0, std::abs(top))) {
      result.restarts_consistent = false;
    }
  }

  result.lambda = best.trace.back().lambda;
  result.profit = best.profit;
  result.trace = std::move(best.trace);
  result.solution = std::move(best.solution);
  result.prices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.prices[i] = instance.geometry->type(static_cast<int>(i)).wtp.price(result.lambda[i]);
  }
  return result;
}

void write_trace_csv(const PricingResult& result, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "iteration,profit";
  for (std::size_t i = 0; i < result.lambda.size(); ++i) out << ",lambda_" << i;
  out << '\n';
  for (const PricingIterate& it : result.trace) {
    out << it.iteration << ',' << it.profit;
    for (double l : it.lambda) out << ',' << l;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace tripmatch
