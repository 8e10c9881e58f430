#include <gtest/gtest.h>

#include <random>

#include "checks.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "tripmatch/error.hpp"
#include "tripmatch/fluid.hpp"

using namespace tripmatch;
using testing_support::make_instance;

namespace {

// Demand, flow and ratio constraints evaluated from the solution vectors.
void expect_invariants(const FluidInstance& inst, const FluidSolution& s) {
  const CbLayout& lay = *s.layout;
  const auto& geo = *inst.geometry;
  const int T = lay.waiting_window();
  double total = 0.0;
  for (std::size_t k = 0; k < inst.type_count(); ++k) total += geo.type(int(k)).arrival_prob * s.lambda[k];
  for (int i = 0; i < int(inst.type_count()); ++i) {
    double flow = s.y_at(i, -T);
    for (std::size_t m : lay.matches_of_new_type(i)) flow += s.x[m];
    EXPECT_NEAR(flow, geo.type(i).arrival_prob * s.lambda[std::size_t(i)], 1e-9);
    for (int u = -T + 1; u <= lay.max_clock(i); ++u) {
      double out = s.y_at(i, u);
      for (std::size_t m : lay.matches_at(i, u)) out += s.x[m];
      EXPECT_NEAR(out, s.y_at(i, u - 1), 1e-9);
    }
  }
  for (double v : s.y) EXPECT_GE(v, -1e-12);
  for (double v : s.x) EXPECT_GE(v, -1e-12);
  if (lay.has_ratio_rows()) {
    for (std::size_t m = 0; m < lay.match_vars().size(); ++m) {
      const MatchVar& mv = lay.match_vars()[m];
      const double li = geo.type(mv.new_type).arrival_prob * s.lambda[std::size_t(mv.new_type)];
      EXPECT_GE(li * s.y_at(mv.existing_type, mv.clock) - (1 - total) * s.x[m], -1e-9);
      EXPECT_GE(s.eta[m], -1e-9);
    }
  }
}

}  // namespace

TEST(Fluid, SoloLayoutAndCost) {
  const auto inst = make_instance(testing_support::solo_geometry(), 0.7, 0);
  const CbLayout lay(inst);
  EXPECT_EQ(lay.variable_count(), 100u);
  EXPECT_TRUE(lay.match_vars().empty());
  const std::vector<double> lambda{0.15};
  const FluidSolution s = solve_cb(inst, lambda);
  EXPECT_NEAR(s.cost, 1.05, 1e-12);
  EXPECT_NEAR(fluid_profit(inst, s), 0.225, 1e-12);
  const auto g = cost_gradient(s, inst);
  EXPECT_NEAR(g[0], 0.1 * 0.7 * 100, 1e-9);
  EXPECT_NEAR(s.gamma[0], 70.0, 1e-9);
  expect_invariants(inst, s);
}

TEST(Fluid, ZeroAndFullDemand) {
  const auto inst = make_instance(testing_support::line_geometry(), 0.7, 3);
  const std::vector<double> zero{0.0, 0.0};
  const FluidSolution s = solve_cb(inst, zero);
  EXPECT_EQ(s.cost, 0.0);
  for (double v : s.y) EXPECT_EQ(v, 0.0);
  for (double v : s.x) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(fluid_profit(inst, zero), 0.0);
  EXPECT_LE(fluid_profit(inst, std::vector<double>{1.0, 1.0}), 0.0);
}

TEST(Fluid, MatchVariableCountMatchesCompatBruteForce) {
  for (int T : {0, 2, 5}) {
    const auto geo = testing_support::line_geometry();
    const auto inst = make_instance(geo, 0.7, T);
    const CbLayout lay(inst);
    std::size_t expected = 0;
    for (int j = 0; j < 2; ++j) {
      for (int u = -T + 1; u < geo->length(j); ++u) {
        for (int i = 0; i < 2; ++i) expected += geo->is_compatible(i, j, u);
      }
    }
    EXPECT_EQ(lay.match_vars().size(), expected) << "T=" << T;
  }
}

TEST(Fluid, SolutionInvariantsOnRandomInstances) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto geo = testing_support::random_grid_geometry(seed, 3, 4, 4, 3, 12);
    const auto inst = make_instance(geo, 0.7, int(seed % 3));
    const std::vector<double> lambda{U(rng), U(rng), U(rng)};
    const FluidSolution s = solve_cb(inst, lambda);
    expect_invariants(inst, s);
    // The LP objective recomputed from the primal.
    double cost = 0.0;
    const CbLayout& lay = *s.layout;
    for (int j = 0; j < 3; ++j) {
      for (int u = 0; u <= lay.max_clock(j); ++u) cost += 0.7 * s.y_at(j, u);
    }
    for (std::size_t m = 0; m < s.x.size(); ++m) cost += 0.7 * lay.match_vars()[m].shared_length * s.x[m];
    EXPECT_NEAR(cost, s.cost, 1e-9);
  }
}

TEST(Fluid, CostMonotoneInDemandAndRatioRelaxation) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.05, 0.9);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto geo = testing_support::random_grid_geometry(seed + 10, 3, 4, 4, 3, 12);
    const auto with = make_instance(geo, 0.8, 2);
    const auto without = make_instance(geo, 0.8, 2, true, true, false);
    std::vector<double> lambda{U(rng), U(rng), U(rng)};
    const double base = solve_cb(with, lambda).cost;
    EXPECT_LE(solve_cb(without, lambda).cost, base + 1e-9);
    for (std::size_t i = 0; i < 3; ++i) {
      auto more = lambda;
      more[i] = std::min(1.0, more[i] + 0.05);
      EXPECT_GE(solve_cb(with, more).cost, base - 1e-9);
    }
  }
}

TEST(Fluid, GradientWithoutRatioRowsIsLambdaGamma) {
  const auto geo = testing_support::line_geometry(40, 20);
  const auto inst = make_instance(geo, 0.7, 2, true, true, false);
  const std::vector<double> lambda{0.3, 0.4};
  const FluidSolution s = solve_cb(inst, lambda);
  const auto g = cost_gradient(s, inst);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(g[std::size_t(i)], geo->type(i).arrival_prob * s.gamma[std::size_t(i)], 1e-12);
  EXPECT_TRUE(s.eta.empty() || std::all_of(s.eta.begin(), s.eta.end(), [](double e) { return e == 0.0; }));
}

TEST(Fluid, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto geo = testing_support::random_grid_geometry(seed + 40, 3, 4, 4, 3, 12);
    const auto inst = make_instance(geo, 0.7, int(seed % 3));
    const auto r = testing_support::check_gradient(inst, {U(rng), U(rng), U(rng)});
    EXPECT_EQ(r.failures, 0u) << "seed " << seed << " worst " << r.worst_relative;
    compared += r.compared;
  }
  EXPECT_GE(compared, 10u);
  // Near lambda = 0 the solo-like regime is linear.
  const auto solo = make_instance(testing_support::solo_geometry(30), 0.7, 0);
  const auto r = testing_support::check_gradient(solo, {2e-4}, 1e-4, 1e-4);
  EXPECT_EQ(r.compared, 1u);
  EXPECT_EQ(r.failures, 0u);
}

TEST(Fluid, FareConventions) {
  FluidParams p;
  p.fare = FareConvention::kPerTrip;
  const auto trip = make_fluid_instance(testing_support::solo_geometry(), p);
  EXPECT_NEAR(trip.fare(0, 0.15), 0.85, 1e-12);
  const auto mile = make_fluid_instance(testing_support::solo_geometry(), FluidParams{});
  EXPECT_NEAR(mile.fare(0, 0.15), 85.0, 1e-12);
  EXPECT_EQ(mile.expected_revenue(0, 0.0), 0.0);
}

TEST(Fluid, InstanceValidation) {
  FluidParams p;
  p.cost_per_unit = 0.0;
  EXPECT_THROW(make_fluid_instance(testing_support::solo_geometry(), p), InvalidArgument);
  p.cost_per_unit = 0.7;
  p.waiting_window = -1;
  EXPECT_THROW(make_fluid_instance(testing_support::solo_geometry(), p), InvalidArgument);
  p.waiting_window = 4;
  p.enable_pre_trip = false;
  const auto inst = make_fluid_instance(testing_support::solo_geometry(), p);
  EXPECT_EQ(inst.params.waiting_window, 0);
  EXPECT_THROW(solve_cb(inst, std::vector<double>{1.5}), InvalidArgument);
  EXPECT_THROW(solve_cb(inst, std::vector<double>{0.1, 0.1}), InvalidArgument);
}

TEST(Fluid, OnTripDisabledHasNoOnTripMatches) {
  const auto inst = make_instance(testing_support::line_geometry(), 0.7, 3, true, false);
  const CbLayout lay(inst);
  for (const MatchVar& m : lay.match_vars()) EXPECT_LE(m.clock, 0);
  EXPECT_FALSE(lay.match_vars().empty());
}

TEST(Fluid, SolutionCsv) {
  const auto inst = make_instance(testing_support::line_geometry(20, 10), 0.7, 1);
  const FluidSolution s = solve_cb(inst, std::vector<double>{0.2, 0.3});
  std::ostringstream out;
  write_solution_csv(s, inst, out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("name,value,dual", 0), 0u);
  EXPECT_GT(std::count(text.begin(), text.end(), '\n'), 20);
}
