#include "tripmatch/harness/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tripmatch/error.hpp"
#include "tripmatch/harness/kmeans.hpp"

namespace tripmatch::harness {

namespace {

int digits(const std::string& s, std::size_t pos, std::size_t count, const std::string& text) {
  if (pos + count > s.size()) throw InvalidArgument("bad timestamp '" + text + "'");
  int v = 0;
  for (std::size_t k = pos; k < pos + count; ++k) {
    if (s[k] < '0' || s[k] > '9') throw InvalidArgument("bad timestamp '" + text + "'");
    v = v * 10 + (s[k] - '0');
  }
  return v;
}

void expect(const std::string& s, std::size_t pos, const char* options, const std::string& text) {
  if (pos >= s.size() || std::string(options).find(s[pos]) == std::string::npos) {
    throw InvalidArgument("bad timestamp '" + text + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto a = f.find_first_not_of(" \t");
    const auto b = f.find_last_not_of(" \t");
    f = a == std::string::npos ? std::string{} : f.substr(a, b - a + 1);
  }
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(where + ": '" + s + "' is not a number");
  }
}

}  // namespace

Timestamp parse_iso8601(const std::string& text) {
  const std::string& s = text;
  using namespace std::chrono;
  const int y = digits(s, 0, 4, text);
  expect(s, 4, "-", text);
  const int mo = digits(s, 5, 2, text);
  expect(s, 7, "-", text);
  const int d = digits(s, 8, 2, text);
  expect(s, 10, "T ", text);
  const int hh = digits(s, 11, 2, text);
  expect(s, 13, ":", text);
  const int mi = digits(s, 14, 2, text);
  std::size_t pos = 16;
  int ss = 0;
  int ms = 0;
  if (pos < s.size() && s[pos] == ':') {
    ss = digits(s, pos + 1, 2, text);
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      int scale = 100;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        ms += (s[pos] - '0') * scale;
        scale /= 10;
        ++pos;
      }
    }
  }
  int offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '-' ? -1 : 1;
      const int oh = digits(s, pos + 1, 2, text);
      expect(s, pos + 3, ":", text);
      const int om = digits(s, pos + 4, 2, text);
      offset_minutes = sign * (oh * 60 + om);
      pos += 6;
    }
  }
  if (pos != s.size()) throw InvalidArgument("bad timestamp '" + text + "'");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mi > 59 || ss > 60) {
    throw InvalidArgument("bad timestamp '" + text + "'");
  }
  return sys_days{ymd} + hours{hh} + minutes{mi - offset_minutes} + seconds{ss} +
         milliseconds{ms};
}

std::vector<TripRecord> read_trips_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(source + ": empty file");
  const auto header = split_csv(line);
  const char* required[] = {"pickup_x", "pickup_y", "dropoff_x", "dropoff_y", "timestamp"};
  std::size_t col[5];
  for (int k = 0; k < 5; ++k) {
    const auto it = std::find(header.begin(), header.end(), required[k]);
    if (it == header.end()) {
      throw InvalidArgument(source + ": header lacks column '" + required[k] + "'");
    }
    col[k] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<TripRecord> out;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv(line);
    const std::string where = source + ":" + std::to_string(number);
    if (f.size() < header.size()) throw InvalidArgument(where + ": too few fields");
    TripRecord r;
    r.pickup = {to_double(f[col[0]], where), to_double(f[col[1]], where)};
    r.dropoff = {to_double(f[col[2]], where), to_double(f[col[3]], where)};
    try {
      r.timestamp = parse_iso8601(f[col[4]]);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + ": " + e.what());
    }
    out.push_back(r);
  }
  return out;
}

std::vector<TripRecord> read_trips_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_trips_csv(in, path);
}

std::vector<Zone> read_zones(std::istream& in, const std::string& source) {
  std::vector<Zone> zones;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream f(line);
    Zone z;
    if (!(f >> z.id)) throw InvalidArgument(source + ":" + std::to_string(number) + ": missing zone id");
    double x = 0.0;
    double y = 0.0;
    while (f >> x) {
      if (!(f >> y)) {
        throw InvalidArgument(source + ":" + std::to_string(number) + ": odd coordinate count");
      }
      z.polygon.push_back({x, y});
    }
    if (!f.eof()) throw InvalidArgument(source + ":" + std::to_string(number) + ": bad coordinate");
    if (z.polygon.size() < 3) {
      throw InvalidArgument(source + ":" + std::to_string(number) + ": polygon needs 3 vertices");
    }
    zones.push_back(std::move(z));
  }
  return zones;
}

std::vector<Zone> read_zones_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_zones(in, path);
}

bool point_in_polygon(const Point& p, const std::vector<Point>& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

IngestResult ingest_trips(const std::vector<TripRecord>& records, const std::vector<Zone>& zones,
                          const IngestOptions& options) {
  if (records.empty()) throw InvalidArgument("no trip records");
  if (zones.empty()) throw InvalidArgument("no zones");
  if (options.clusters_per_zone < 1) throw InvalidArgument("clusters per zone must be >= 1");
  if (!(options.scale_factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  if (options.grid_cells < 1) throw InvalidArgument("grid cells must be >= 1");
  IngestResult res;

  std::vector<const TripRecord*> kept;
  for (const TripRecord& r : records) {
    if (options.window_start && r.timestamp < *options.window_start) continue;
    if (options.window_end && r.timestamp >= *options.window_end) continue;
    kept.push_back(&r);
  }
  if (kept.empty()) throw InvalidArgument("no trips inside the time window");
  Timestamp lo = kept.front()->timestamp;
  Timestamp hi = lo;
  for (const TripRecord* r : kept) {
    lo = std::min(lo, r->timestamp);
    hi = std::max(hi, r->timestamp);
  }
  const Timestamp start = options.window_start.value_or(lo);
  const Timestamp end = options.window_end.value_or(hi);
  double window_minutes = std::chrono::duration<double, std::ratio<60>>(end - start).count();
  if (window_minutes <= 0.0) {
    window_minutes = 1.0;
    res.warnings.push_back("time window is empty; using one minute");
  }

  // Step 1: pickup zones.
  std::map<int, std::vector<const TripRecord*>> by_zone;
  std::size_t unzoned = 0;
  for (const TripRecord* r : kept) {
    bool placed = false;
    for (const Zone& z : zones) {
      if (point_in_polygon(r->pickup, z.polygon)) {
        by_zone[z.id].push_back(r);
        placed = true;
        break;
      }
    }
    if (!placed) ++unzoned;
  }
  if (unzoned > 0) {
    res.warnings.push_back(std::to_string(unzoned) + " trips have a pickup outside every zone");
  }
  for (const Zone& z : zones) {
    if (!by_zone.count(z.id)) res.warnings.push_back("zone " + std::to_string(z.id) + " is empty; skipped");
  }

  // Coarse grid network over every kept endpoint.
  double x0 = kept.front()->pickup.x;
  double x1 = x0;
  double y0 = kept.front()->pickup.y;
  double y1 = y0;
  for (const TripRecord* r : kept) {
    for (const Point& p : {r->pickup, r->dropoff}) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  const double span = std::max(x1 - x0, y1 - y0);
  const double spacing = span > 0.0 ? span / options.grid_cells : 1.0;
  const int cols = static_cast<int>(std::ceil((x1 - x0) / spacing - 1e-9)) + 1;
  const int rows = static_cast<int>(std::ceil((y1 - y0) / spacing - 1e-9)) + 1;
  RoadNetwork grid = RoadNetwork::grid(std::max(rows, 2), std::max(cols, 2), 1);
  std::vector<Point> coords(grid.coordinates().begin(), grid.coordinates().end());
  for (Point& p : coords) p = {x0 + p.x * spacing, y0 + p.y * spacing};
  grid.set_coordinates(std::move(coords));
  auto network = std::make_shared<const RoadNetwork>(std::move(grid));

  // Step 2: dropoff clusters per zone.
  struct Draft {
    int zone;
    NodeId origin;
    NodeId destination;
    Point centroid;
    std::size_t count;
  };
  std::vector<Draft> drafts;
  for (const auto& [zone, trips] : by_zone) {
    std::vector<Point> drops;
    for (const TripRecord* r : trips) drops.push_back(r->dropoff);
    const KMeansResult km = kmeans(drops, options.clusters_per_zone,
                                   options.seed + static_cast<std::uint64_t>(zone));
    for (std::size_t c = 0; c < km.centroids.size(); ++c) {
      Point mean_pickup;
      std::size_t count = 0;
      for (std::size_t t = 0; t < trips.size(); ++t) {
        if (km.labels[t] != static_cast<int>(c)) continue;
        mean_pickup.x += trips[t]->pickup.x;
        mean_pickup.y += trips[t]->pickup.y;
        ++count;
      }
      if (count == 0) continue;
      mean_pickup = {mean_pickup.x / static_cast<double>(count),
                     mean_pickup.y / static_cast<double>(count)};
      const NodeId o = network->nearest_node(mean_pickup);
      const NodeId d = network->nearest_node(km.centroids[c]);
      if (o == d) {
        res.warnings.push_back("zone " + std::to_string(zone) + " cluster " + std::to_string(c) +
                               " has origin = destination on the coarse network; dropped");
        continue;
      }
      drafts.push_back({zone, o, d, km.centroids[c], count});
    }
  }
  if (drafts.empty()) throw InvalidArgument("ingestion produced no rider types");

  const double trips_per_minute = static_cast<double>(kept.size()) / window_minutes;
  res.period_minutes = options.period_minutes.value_or(0.1 / trips_per_minute);
  if (!(res.period_minutes > 0.0)) throw InvalidArgument("period length must be positive");
  res.window_periods = window_minutes / res.period_minutes;
  double total = 0.0;
  for (std::size_t k = 0; k < drafts.size(); ++k) {
    RiderType t;
    t.id = static_cast<int>(k);
    t.origin = drafts[k].origin;
    t.destination = drafts[k].destination;
    t.arrival_prob = static_cast<double>(drafts[k].count) / res.window_periods * options.scale_factor;
    t.wtp = options.wtp;
    total += t.arrival_prob;
    res.types.push_back(t);
    res.type_zone.push_back(drafts[k].zone);
    res.dropoff_centroids.push_back(drafts[k].centroid);
    res.type_counts.push_back(drafts[k].count);
  }
  if (total > 1.0 + 1e-12) {
    throw InvalidArgument("arrival probabilities sum to " + std::to_string(total) +
                          " > 1; lower the scale factor or the period length");
  }
  res.network = std::move(network);
  return res;
}

}  // namespace tripmatch::harness
