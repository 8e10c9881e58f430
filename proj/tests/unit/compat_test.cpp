#include <gtest/gtest.h>

#include "instances.hpp"
#include "oracles.hpp"
#include "tripmatch/compat.hpp"
#include "tripmatch/error.hpp"

using namespace tripmatch;

TEST(CompatTable, SingleTypeNoOnTripSelfMatch) {
  const auto geo = testing_support::solo_geometry(20);
  const CompatTable t0 = build_compat_table(*geo, {0, true});
  for (int u = 1; u < 20; ++u) EXPECT_TRUE(t0.compatible(0, u).empty());

  const CompatTable t3 = build_compat_table(*geo, {3, true});
  EXPECT_EQ(t3.min_clock(), -3);
  EXPECT_EQ(t3.max_clock(0), 19);
  for (int u = -3; u <= 0; ++u) {
    const auto entries = t3.compatible(0, u);
    ASSERT_EQ(entries.size(), 1u);
    EXPECT_EQ(entries[0].new_type, 0);
    EXPECT_EQ(entries[0].shared_length, 20);
  }
}

TEST(CompatTable, LineInstanceOnTripRange) {
  const auto geo = testing_support::line_geometry();
  const CompatTable t = build_compat_table(*geo, {0, true});
  std::vector<int> clocks;
  for (int u = 1; u < 100; ++u) {
    ASSERT_EQ(t.contains(1, 0, u), geo->is_compatible(1, 0, u)) << u;
    if (t.contains(1, 0, u)) clocks.push_back(u);
  }
  // At u = 50 the long rider stands on the short rider's origin, which the
  // backtracking rule exempts, so the range closes at 50.
  ASSERT_FALSE(clocks.empty());
  EXPECT_EQ(clocks.front(), 1);
  EXPECT_EQ(clocks.back(), 50);
  EXPECT_EQ(clocks.size(), 50u);
  for (int u = 1; u <= 50; ++u) {
    const auto entries = t.compatible(0, u);
    ASSERT_EQ(entries.size(), 1u);
    EXPECT_EQ(entries[0].shared_length, 100 - u);
  }
}

TEST(CompatTable, MatchesBruteForceAndInvariants) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto geo = testing_support::random_grid_geometry(seed, 5, 4, 4, 3, 14);
    const int T = static_cast<int>(seed % 3);
    const CompatTable t = build_compat_table(*geo, {T, true});
    const CompatTable off = build_compat_table(*geo, {T, false});
    for (int j = 0; j < 5; ++j) {
      for (int u = -T; u < geo->length(j); ++u) {
        for (int i = 0; i < 5; ++i) {
          ASSERT_EQ(t.contains(i, j, u), geo->is_compatible(i, j, u));
          if (u >= 1) ASSERT_FALSE(off.contains(i, j, u));
          else ASSERT_EQ(off.contains(i, j, u), t.contains(i, j, u));
          // Compatible later implies compatible at u = 1.
          if (u >= 1 && t.contains(i, j, u)) ASSERT_TRUE(t.contains(i, j, 1));
        }
        if (u >= 1) EXPECT_FALSE(t.contains(j, j, u));
        else EXPECT_TRUE(t.contains(j, j, u));
        const auto entries = t.compatible(j, u);
        for (std::size_t k = 1; k < entries.size(); ++k) EXPECT_LT(entries[k - 1].new_type, entries[k].new_type);
        for (const auto& e : entries) EXPECT_EQ(e.shared_length, geo->shared_trip_length(e.new_type, j, u));
      }
    }
  }
}

TEST(CompatTable, Deterministic) {
  const auto geo = testing_support::random_grid_geometry(9, 5, 5, 5, 3, 20);
  const CompatTable a = build_compat_table(*geo, {2, true});
  const CompatTable b = build_compat_table(*geo, {2, true});
  ASSERT_EQ(a.entry_count(), b.entry_count());
  for (int j = 0; j < 5; ++j) {
    for (int u = -2; u < geo->length(j); ++u) {
      const auto x = a.compatible(j, u);
      const auto y = b.compatible(j, u);
      ASSERT_EQ(x.size(), y.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        EXPECT_EQ(x[k].new_type, y[k].new_type);
        EXPECT_EQ(x[k].shared_length, y[k].shared_length);
      }
    }
  }
}

TEST(CompatTable, SizingCap) {
  const auto geo = testing_support::line_geometry();
  CompatOptions o;
  o.max_entries = 5;
  EXPECT_THROW(build_compat_table(*geo, o), SizingError);
}
