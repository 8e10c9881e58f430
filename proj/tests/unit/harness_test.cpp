#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "tripmatch/error.hpp"
#include "tripmatch/harness/config.hpp"
#include "tripmatch/harness/experiment.hpp"
#include "tripmatch/harness/generators.hpp"
#include "tripmatch/harness/ingest.hpp"
#include "tripmatch/harness/io.hpp"
#include "tripmatch/harness/kmeans.hpp"

using namespace tripmatch;
using namespace tripmatch::harness;

TEST(Example1, Shapes) {
  const auto same = gen_example1(100, 100, 0.1);
  EXPECT_DOUBLE_EQ(same.delta, 0.0);
  ASSERT_EQ(same.geometry->type_count(), 2u);
  for (const auto& t : same.geometry->types()) {
    EXPECT_DOUBLE_EQ(t.arrival_prob, 0.05);
    EXPECT_EQ(t.origin, 0);
    EXPECT_EQ(t.destination, 100);
  }
  const auto half = gen_example1(100, 50, 0.1);
  EXPECT_DOUBLE_EQ(half.delta, 0.5);
  EXPECT_EQ(half.geometry->type(1).origin, 50);
  EXPECT_NEAR(gen_example1(100, 1, 0.1).delta, 0.99, 1e-12);
  EXPECT_THROW(gen_example1(100, 0, 0.1), InvalidArgument);
  EXPECT_THROW(gen_example1(100, 101, 0.1), InvalidArgument);
}

TEST(Example2, SamplingRules) {
  Example2Options o;
  o.type_count = 1;
  const auto one = gen_example2(o);
  ASSERT_EQ(one.geometry->type_count(), 1u);
  EXPECT_EQ(one.geometry->length(0), 100);
  EXPECT_DOUBLE_EQ(one.geometry->type(0).arrival_prob, 0.1);

  o.type_count = 10;
  std::set<std::vector<std::pair<NodeId, NodeId>>> sets;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    o.seed = seed;
    const auto a = gen_example2(o);
    const auto b = gen_example2(o);
    std::vector<std::pair<NodeId, NodeId>> ods;
    std::set<std::pair<NodeId, NodeId>> distinct;
    for (int i = 0; i < 10; ++i) {
      const auto& t = a.geometry->type(i);
      EXPECT_EQ(t.origin, b.geometry->type(i).origin);
      EXPECT_EQ(t.destination, b.geometry->type(i).destination);
      EXPECT_EQ(a.geometry->length(i), 100);
      EXPECT_LT(t.origin, 100);  // intersections only
      EXPECT_LT(t.destination, 100);
      ods.emplace_back(t.origin, t.destination);
      distinct.insert(ods.back());
    }
    EXPECT_EQ(distinct.size(), 10u);
    std::sort(ods.begin(), ods.end());
    sets.insert(ods);
  }
  EXPECT_EQ(sets.size(), 5u);

  Example2Options big;
  big.rows = 2;
  big.cols = 2;
  big.trip_length = 20;
  big.type_count = 5;  // only 4 ordered corner pairs
  EXPECT_THROW(gen_example2(big), InvalidArgument);
}

TEST(KMeans, SeparatedCloudsRecoverMeans) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 0.5);
  std::vector<Point> pts;
  Point m1, m2;
  for (int k = 0; k < 50; ++k) {
    pts.push_back({n(rng), n(rng)});
    m1.x += pts.back().x / 50;
    m1.y += pts.back().y / 50;
  }
  for (int k = 0; k < 50; ++k) {
    pts.push_back({100 + n(rng), 40 + n(rng)});
    m2.x += pts.back().x / 50;
    m2.y += pts.back().y / 50;
  }
  const auto r = kmeans(pts, 2, 7);
  ASSERT_EQ(r.centroids.size(), 2u);
  const int first = r.labels[0];
  for (int k = 0; k < 50; ++k) EXPECT_EQ(r.labels[std::size_t(k)], first);
  for (int k = 50; k < 100; ++k) EXPECT_NE(r.labels[std::size_t(k)], first);
  const Point a = r.centroids[std::size_t(first)];
  const Point b = r.centroids[std::size_t(1 - first)];
  EXPECT_NEAR(a.x, m1.x, 1e-9);
  EXPECT_NEAR(a.y, m1.y, 1e-9);
  EXPECT_NEAR(b.x, m2.x, 1e-9);
  EXPECT_NEAR(b.y, m2.y, 1e-9);
  // Same seed, same answer.
  const auto again = kmeans(pts, 2, 7);
  EXPECT_EQ(again.labels, r.labels);
  EXPECT_EQ(kmeans(pts, 500, 1).centroids.size(), pts.size());
}

TEST(Ingest, TimestampParsing) {
  using namespace std::chrono;
  const Timestamp a = parse_iso8601("2019-04-01T08:30:00");
  const Timestamp b = parse_iso8601("2019-04-01 08:30:15.250");
  EXPECT_EQ(duration_cast<milliseconds>(b - a).count(), 15250);
  EXPECT_EQ(parse_iso8601("2019-04-01T09:30:00+01:00"), a);
  EXPECT_EQ(parse_iso8601("2019-04-01T08:30Z"), a);
  EXPECT_THROW(parse_iso8601("2019-13-01T00:00:00"), InvalidArgument);
  EXPECT_THROW(parse_iso8601("yesterday"), InvalidArgument);
}

namespace {

std::vector<Zone> square_zone(int id, double x0, double y0, double x1, double y1) {
  return {{id, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}};
}

}  // namespace

TEST(Ingest, IdenticalTripsGiveOneType) {
  std::ostringstream csv;
  csv << "timestamp,dropoff_y,dropoff_x,pickup_x,pickup_y,fare\n";
  for (int k = 0; k < 6; ++k) csv << "2020-01-01T00:" << (k * 10 < 10 ? "0" : "") << k * 10 << ":00,9,9,1,1,3.5\n";
  csv << "2020-01-01T01:00:00,9,9,1,1,3.5\n";
  std::istringstream in(csv.str());
  const auto trips = read_trips_csv(in);
  ASSERT_EQ(trips.size(), 7u);
  IngestOptions o;
  o.period_minutes = 1.0;
  o.grid_cells = 8;
  const auto r = ingest_trips(trips, square_zone(3, 0, 0, 5, 5), o);
  ASSERT_EQ(r.types.size(), 1u);
  EXPECT_NEAR(r.types[0].arrival_prob, 7.0 / 60.0, 1e-12);
  EXPECT_EQ(r.type_zone[0], 3);
  EXPECT_EQ(r.type_counts[0], 7u);
  EXPECT_EQ(r.network->nearest_node({1, 1}), r.types[0].origin);
  EXPECT_EQ(r.network->nearest_node({9, 9}), r.types[0].destination);

  IngestOptions scaled = o;
  scaled.scale_factor = 0.1;
  EXPECT_NEAR(ingest_trips(trips, square_zone(3, 0, 0, 5, 5), scaled).types[0].arrival_prob, 0.7 / 60.0, 1e-12);
  IngestOptions dense = o;
  dense.period_minutes = 20.0;
  EXPECT_THROW(ingest_trips(trips, square_zone(3, 0, 0, 5, 5), dense), InvalidArgument);
  // Default period length puts total demand at 0.1.
  const auto d = ingest_trips(trips, square_zone(3, 0, 0, 5, 5), IngestOptions{});
  EXPECT_NEAR(d.types[0].arrival_prob, 0.1, 1e-12);
}

TEST(Ingest, TwoCloudsTwoTypesAndEmptyZoneWarning) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::vector<TripRecord> trips;
  const Timestamp t0 = parse_iso8601("2020-01-01T00:00:00");
  for (int k = 0; k < 40; ++k) {
    const Point drop = k % 2 ? Point{20 + jitter(rng), 1 + jitter(rng)} : Point{1 + jitter(rng), 20 + jitter(rng)};
    trips.push_back({{2 + jitter(rng), 2 + jitter(rng)}, drop, t0 + std::chrono::minutes(k)});
  }
  auto zones = square_zone(1, 0, 0, 5, 5);
  zones.push_back(square_zone(2, 50, 50, 60, 60)[0]);
  IngestOptions o;
  o.clusters_per_zone = 2;
  const auto r = ingest_trips(trips, zones, o);
  ASSERT_EQ(r.types.size(), 2u);
  std::vector<Point> c = r.dropoff_centroids;
  std::sort(c.begin(), c.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  EXPECT_NEAR(c[0].x, 1, 0.3);
  EXPECT_NEAR(c[0].y, 20, 0.3);
  EXPECT_NEAR(c[1].x, 20, 0.3);
  EXPECT_NEAR(c[1].y, 1, 0.3);
  EXPECT_EQ(r.type_counts[0] + r.type_counts[1], 40u);
  bool warned = false;
  for (const auto& w : r.warnings) warned |= w.find("zone 2 is empty") != std::string::npos;
  EXPECT_TRUE(warned);
}

TEST(Ingest, ZoneFileAndPolygon) {
  std::istringstream in("# zones\n7 0 0 4 0 4 4 0 4\n");
  const auto z = read_zones(in);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].id, 7);
  EXPECT_TRUE(point_in_polygon({2, 2}, z[0].polygon));
  EXPECT_FALSE(point_in_polygon({5, 2}, z[0].polygon));
  std::istringstream bad("1 0 0 1 1\n");
  EXPECT_THROW(read_zones(bad), InvalidArgument);
  std::istringstream missing("pickup_x,pickup_y,dropoff_x,timestamp\n");
  EXPECT_THROW(read_trips_csv(missing), InvalidArgument);
}

TEST(Io, NetworkAndTypesRoundTrip) {
  const auto net = RoadNetwork::grid(3, 3, 2);
  std::stringstream s;
  write_network(net, s);
  const auto back = read_network(s);
  EXPECT_EQ(back.edges(), net.edges());
  const std::vector<RiderType> types{{4, 0, 8, 0.05, WtpModel::uniform()}, {9, 2, 6, 0.025, WtpModel::uniform()}};
  std::stringstream t;
  write_types(types, t);
  const auto tb = read_types(t, WtpModel::uniform());
  ASSERT_EQ(tb.size(), 2u);
  EXPECT_EQ(tb[1].id, 9);
  EXPECT_EQ(tb[1].origin, 2);
  EXPECT_DOUBLE_EQ(tb[1].arrival_prob, 0.025);
  std::istringstream bad("0 1\n1 x\n");
  try {
    read_network(bad, "net.txt");
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("net.txt:2"), std::string::npos);
  }
}

TEST(Config, DefaultsAndEcho) {
  const ExperimentConfig c = parse_config("{}");
  EXPECT_EQ(c.instance.kind, InstanceKind::kExample1);
  EXPECT_EQ(c.policies.size(), 1u);
  const ExperimentConfig full = parse_config(R"({
    "instance": {"kind": "example2", "N": 5, "L": 40, "edge_length": 4, "rows": 6, "cols": 6, "seed": 3},
    "policy": ["pre_trip", "combined"], "T": [0, 2, 5], "c": [0.7, 0.9],
    "wtp": {"kind": "exponential", "mean": 0.5}, "fare": "per_trip",
    "periods": 1000, "replications": 2, "seed": 9, "period_minutes": 0.5,
    "pricing": {"tolerance": 1e-7, "restarts": 2},
    "sweep": {"kind": "types", "type_counts": [1, 5], "seeds": [1, 2]}})");
  EXPECT_EQ(full.instance.trip_length, 40);
  EXPECT_EQ(full.instance.type_count, 5);
  EXPECT_EQ(full.windows, (std::vector<int>{0, 2, 5}));
  EXPECT_EQ(full.wtp, WtpModel::exponential(0.5));
  EXPECT_EQ(full.fare, FareConvention::kPerTrip);
  EXPECT_EQ(full.sweep.kind, SweepKind::kTypes);
  // The echo parses back to the same config.
  const ExperimentConfig again = parse_config(config_to_json(full));
  EXPECT_EQ(config_to_json(again), config_to_json(full));
  EXPECT_EQ(expand_points(full).size(), 12u);
}

TEST(Config, ErrorsNameTheKey) {
  const auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(key_of(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(key_of(R"({"instance": {"kind": "example1", "lenght": 3}})"), "instance.lenght");
  EXPECT_EQ(key_of(R"({"c": [0.7, -1]})"), "c[1]");
  EXPECT_EQ(key_of(R"({"policy": "greedy"})"), "policy");
  EXPECT_EQ(key_of(R"({"periods": "many"})"), "periods");
  EXPECT_EQ(key_of(R"({"wtp": {"kind": "normal"}})"), "wtp.kind");
  EXPECT_EQ(key_of(R"({"instance": {"kind": "example1", "L": 10, "l": 20}})"), "instance.l");
  EXPECT_EQ(key_of("{not json"), "<root>");
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Experiment, ExpandPointsCollapsesOnTripWindows) {
  ExperimentConfig c;
  c.policies = {PolicyKind::kOnTrip, PolicyKind::kPreTrip};
  c.windows = {0, 2, 5};
  c.costs = {0.7, 1.1};
  const auto pts = expand_points(c);
  EXPECT_EQ(pts.size(), 2u + 6u);
  for (const auto& p : pts) {
    if (p.policy == PolicyKind::kOnTrip) EXPECT_EQ(p.window, 0);
  }
}

TEST(Experiment, PricingDocumentRoundTrip) {
  PointSpec p{PolicyKind::kCombined, 2, 0.9};
  PricingResult r;
  r.lambda = {0.1, 0.2};
  r.prices = {0.9, 0.8};
  const std::string doc = pricing_json({{p, r}});
  EXPECT_EQ(lambda_from_pricing_json(doc, p), r.lambda);
  EXPECT_THROW(lambda_from_pricing_json(doc, PointSpec{PolicyKind::kCombined, 3, 0.9}), ConfigError);
  EXPECT_THROW(lambda_from_pricing_json("[]", p), ConfigError);
}
