#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "instances.hpp"
#include "tripmatch/error.hpp"

using namespace tripmatch;
using testing_support::line_geometry;

TEST(RoadNetwork, LineDistances) {
  const RoadNetwork net = RoadNetwork::line(100);
  EXPECT_EQ(net.node_count(), 101u);
  EXPECT_EQ(net.shortest_distance(0, 100), 100);
  for (NodeId a : {0, 17, 100}) EXPECT_EQ(net.shortest_distance(a, a), 0);
}

TEST(RoadNetwork, GridOppositeCornersMatchLatticeBfs) {
  const RoadNetwork net = RoadNetwork::grid(10, 10, 10);
  EXPECT_EQ(net.shortest_distance(0, 99), 180);
  const auto lattice = oracle::lattice_bfs(10, 10, 10, 0, 0);
  EXPECT_EQ(lattice.at({90, 90}), 180);
  EXPECT_EQ(lattice.size(), net.node_count());
}

TEST(RoadNetwork, GridDistancesMatchLatticeBfsEverywhere) {
  const int rows = 4, cols = 5, e = 3;
  const RoadNetwork net = RoadNetwork::grid(rows, cols, e);
  ASSERT_TRUE(net.has_coordinates());
  const auto coords = net.coordinates();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto lattice = oracle::lattice_bfs(rows, cols, e, c * e, r * e);
      const auto dist = net.distances_from(static_cast<NodeId>(r) * cols + c);
      for (std::size_t k = 0; k < net.node_count(); ++k) {
        const auto key = std::make_pair(static_cast<int>(std::lround(coords[k].x)),
                                        static_cast<int>(std::lround(coords[k].y)));
        ASSERT_EQ(dist[k], lattice.at(key)) << "node " << net.id_at(k);
      }
    }
  }
}

TEST(RoadNetwork, DistanceIsAMetric) {
  std::mt19937_64 rng(7);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < 30; ++v) edges.emplace_back(std::uniform_int_distribution<NodeId>(0, v - 1)(rng), v);
  for (int k = 0; k < 20; ++k) {
    const NodeId a = std::uniform_int_distribution<NodeId>(0, 29)(rng);
    const NodeId b = std::uniform_int_distribution<NodeId>(0, 29)(rng);
    if (a != b) edges.emplace_back(a, b);
  }
  const RoadNetwork net = RoadNetwork::from_edges(edges);
  const auto g = oracle::graph_of(net);
  for (NodeId a = 0; a < 30; ++a) {
    for (NodeId b = 0; b < 30; ++b) {
      const int dab = net.shortest_distance(a, b);
      EXPECT_EQ(dab, g.distance(a, b));
      EXPECT_EQ(dab, net.shortest_distance(b, a));
      for (NodeId c = 0; c < 30; c += 7) {
        EXPECT_LE(dab, net.shortest_distance(a, c) + net.shortest_distance(c, b));
      }
    }
  }
}

TEST(RoadNetwork, CanonicalPathOnLineAndIdentity) {
  const RoadNetwork net = RoadNetwork::line(10);
  EXPECT_EQ(net.canonical_path(0, 5), (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(net.canonical_path(3, 3), (std::vector<NodeId>{3}));
}

TEST(RoadNetwork, CanonicalPathFollowsLeastSuccessorRule) {
  // Square with two equal routes 0 -> 3: via 1 or via 2.
  const std::vector<std::pair<NodeId, NodeId>> square{{0, 2}, {2, 3}, {0, 1}, {1, 3}};
  const RoadNetwork sq = RoadNetwork::from_edges(square);
  EXPECT_EQ(sq.canonical_path(0, 3), (std::vector<NodeId>{0, 1, 3}));

  // Relabelled grid with scrambled ids: compare every pair with the enumerator.
  const RoadNetwork base = RoadNetwork::grid(3, 4, 2);
  std::vector<NodeId> relabel(base.node_count());
  std::iota(relabel.begin(), relabel.end(), 100);
  std::shuffle(relabel.begin(), relabel.end(), std::mt19937_64(3));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [a, b] : base.edges()) {
    edges.emplace_back(relabel[base.index_of(a)], relabel[base.index_of(b)]);
  }
  const RoadNetwork net = RoadNetwork::from_edges(edges);
  const auto g = oracle::graph_of(net);
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    for (std::size_t j = 0; j < net.node_count(); ++j) {
      const NodeId a = net.id_at(i), b = net.id_at(j);
      ASSERT_EQ(net.canonical_path(a, b), g.least_successor_path(a, b));
    }
  }
}

TEST(RoadNetwork, CanonicalPathIsStable) {
  const RoadNetwork a = RoadNetwork::grid(5, 5, 3);
  const RoadNetwork b = RoadNetwork::grid(5, 5, 3);
  EXPECT_EQ(a.canonical_path(0, 24), b.canonical_path(0, 24));
}

TEST(RoadNetwork, Errors) {
  const RoadNetwork net = RoadNetwork::line(3);
  EXPECT_THROW(net.shortest_distance(0, 9), InvalidArgument);
  const std::vector<std::pair<NodeId, NodeId>> split{{0, 1}, {2, 3}};
  const RoadNetwork two = RoadNetwork::from_edges(split);
  EXPECT_FALSE(two.is_connected());
  EXPECT_THROW(two.canonical_path(0, 3), InvalidArgument);
  const std::vector<std::pair<NodeId, NodeId>> loop{{1, 1}};
  EXPECT_THROW(RoadNetwork::from_edges(loop), InvalidArgument);
}

TEST(RoadNetwork, NearestNode) {
  const RoadNetwork net = RoadNetwork::grid(3, 3, 4);
  EXPECT_EQ(net.nearest_node({7.9, 8.2}), 8);
  EXPECT_EQ(net.nearest_node({-3.0, -1.0}), 0);
}

TEST(TripGeometry, SharedLengthExamples) {
  const auto geo = line_geometry();
  EXPECT_EQ(geo->shared_trip_length(1, 0, 20), 80);
  EXPECT_EQ(geo->shared_trip_length(0, 1, 0), 150);
  for (int i = 0; i < 2; ++i) {
    for (int u = -5; u <= 0; ++u) EXPECT_EQ(geo->shared_trip_length(i, i, u), geo->length(i));
  }
  // Waiting states share the u = 0 value.
  for (int u = -4; u <= 0; ++u) EXPECT_EQ(geo->shared_trip_length(1, 0, u), geo->shared_trip_length(1, 0, 0));
}

TEST(TripGeometry, CompatibilityExamples) {
  const auto geo = line_geometry();
  EXPECT_TRUE(geo->is_compatible(1, 0, 20));
  EXPECT_FALSE(geo->is_compatible(0, 1, 0));
  for (int i = 0; i < 2; ++i) {
    for (int u = 1; u < geo->length(i); ++u) EXPECT_FALSE(geo->is_compatible(i, i, u));
  }
}

TEST(TripGeometry, AgreesWithFirstPrinciplesOracle) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto geo = testing_support::random_grid_geometry(seed, 4, 4, 4, 3, 12);
    const auto o = oracle::geo_of(*geo);
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(geo->length(j), o.len(j));
      const auto path = geo->path(j);
      EXPECT_EQ(std::vector<NodeId>(path.begin(), path.end()), o.path[static_cast<std::size_t>(j)]);
      // Last on-trip position is one step before the destination.
      EXPECT_EQ(o.d(geo->position(j, geo->length(j) - 1), o.dest[static_cast<std::size_t>(j)]), 1);
      for (int i = 0; i < 4; ++i) {
        for (int u = -2; u < geo->length(j); ++u) {
          ASSERT_EQ(geo->shared_trip_length(i, j, u), o.shared_length(i, j, u));
          ASSERT_EQ(geo->is_compatible(i, j, u), o.compatible(i, j, u));
        }
      }
    }
  }
}

TEST(TripGeometry, SharedTripRoute) {
  const auto geo = line_geometry();
  const SharedTrip t = geo->shared_trip(1, 0, 20);
  EXPECT_EQ(t.approach, 30);
  EXPECT_EQ(t.length, 80);
  EXPECT_EQ(t.new_onboard, 50);
  EXPECT_EQ(t.existing_onboard, 100);
  EXPECT_EQ(t.overlap, 50);
  // Equal drop orders: the existing rider leaves first.
  EXPECT_TRUE(t.existing_drops_first);
}
