#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tripmatch/netgraph.hpp"

namespace tripmatch::harness {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// "YYYY-MM-DDTHH:MM[:SS[.fff]]" with 'T' or a space, optional 'Z' or
// +HH:MM / -HH:MM offset. Throws InvalidArgument on anything else.
Timestamp parse_iso8601(const std::string& text);

struct TripRecord {
  Point pickup;
  Point dropoff;
  Timestamp timestamp;
};

// CSV with a header naming pickup_x, pickup_y, dropoff_x, dropoff_y and
// timestamp in any order; other columns are ignored.
std::vector<TripRecord> read_trips_csv(std::istream& in, const std::string& source = "trips");
std::vector<TripRecord> read_trips_csv_file(const std::string& path);

struct Zone {
  int id = 0;
  std::vector<Point> polygon;
};

// "zone_id x1 y1 x2 y2 ..." per line, at least three vertices.
std::vector<Zone> read_zones(std::istream& in, const std::string& source = "zones");
std::vector<Zone> read_zones_file(const std::string& path);

// Even-odd rule; points on an edge may fall either way.
bool point_in_polygon(const Point& p, const std::vector<Point>& polygon);

struct IngestOptions {
  std::size_t clusters_per_zone = 1;
  double scale_factor = 1.0;  // multiplies every arrival probability
  // Coarse network: grid_cells segments along the longer side of the
  // bounding box of all trip endpoints.
  int grid_cells = 20;
  std::optional<Timestamp> window_start;
  std::optional<Timestamp> window_end;
  // Period length; by default chosen so the unscaled arrival probabilities
  // sum to 0.1.
  std::optional<double> period_minutes;
  std::uint64_t seed = 1;
  WtpModel wtp = WtpModel::uniform();
};

struct IngestResult {
  std::shared_ptr<const RoadNetwork> network;
  std::vector<RiderType> types;
  std::vector<int> type_zone;  // pickup zone of each type
  std::vector<Point> dropoff_centroids;
  std::vector<std::size_t> type_counts;  // trips behind each type
  double period_minutes = 1.0;
  double window_periods = 0.0;
  std::vector<std::string> warnings;
};

// Pickups are assigned to the first zone containing them; dropoffs within
// each zone are clustered with k-means; each (zone, cluster) becomes a type
// whose origin and destination are the network nodes nearest the mean pickup
// and the cluster centroid. Types with origin = destination are dropped.
IngestResult ingest_trips(const std::vector<TripRecord>& records, const std::vector<Zone>& zones,
                          const IngestOptions& options);

}  // namespace tripmatch::harness
