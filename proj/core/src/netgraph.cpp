#include "tripmatch/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tripmatch/error.hpp"

namespace tripmatch {

RoadNetwork RoadNetwork::from_edges(std::span<const std::pair<NodeId, NodeId>> edges) {
  RoadNetwork net;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0) throw InvalidArgument("node ids must be non-negative");
    if (a == b) throw InvalidArgument("self loop on node " + std::to_string(a));
    net.ids_.push_back(a);
    net.ids_.push_back(b);
  }
  std::sort(net.ids_.begin(), net.ids_.end());
  net.ids_.erase(std::unique(net.ids_.begin(), net.ids_.end()), net.ids_.end());

  const std::size_t n = net.ids_.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [a, b] : edges) {
    const auto ia = static_cast<std::uint32_t>(net.index_of(a));
    const auto ib = static_cast<std::uint32_t>(net.index_of(b));
    adj[ia].push_back(ib);
    adj[ib].push_back(ia);
  }
  net.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& row = adj[v];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    net.offsets_[v + 1] = net.offsets_[v] + row.size();
  }
  net.adjacency_.reserve(net.offsets_[n]);
  for (auto& row : adj) net.adjacency_.insert(net.adjacency_.end(), row.begin(), row.end());
  return net;
}

RoadNetwork RoadNetwork::line(int length) {
  if (length < 1) throw InvalidArgument("line length must be >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(length));
  for (NodeId v = 0; v < length; ++v) edges.emplace_back(v, v + 1);
  RoadNetwork net = from_edges(edges);
  std::vector<Point> coords(net.node_count());
  for (std::size_t v = 0; v < coords.size(); ++v) coords[v] = {static_cast<double>(v), 0.0};
  net.set_coordinates(std::move(coords));
  return net;
}

RoadNetwork RoadNetwork::grid(int rows, int cols, int edge_length) {
  if (rows < 1 || cols < 1 || edge_length < 1 || rows * cols < 2) {
    throw InvalidArgument("grid needs at least two intersections and edge_length >= 1");
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::pair<NodeId, Point>> placed;
  NodeId next = static_cast<NodeId>(rows) * cols;
  const auto corner = [cols](int r, int c) { return static_cast<NodeId>(r) * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      placed.emplace_back(corner(r, c), Point{double(c) * edge_length, double(r) * edge_length});
    }
  }
  // Subdivide one street segment into edge_length unit edges.
  const auto street = [&](int r0, int c0, int r1, int c1) {
    NodeId prev = corner(r0, c0);
    for (int s = 1; s < edge_length; ++s) {
      const double t = double(s) / edge_length;
      const Point p{(c0 + t * (c1 - c0)) * edge_length, (r0 + t * (r1 - r0)) * edge_length};
      placed.emplace_back(next, p);
      edges.emplace_back(prev, next);
      prev = next++;
    }
    edges.emplace_back(prev, corner(r1, c1));
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) street(r, c, r, c + 1);
      if (r + 1 < rows) street(r, c, r + 1, c);
    }
  }
  RoadNetwork net = from_edges(edges);
  std::vector<Point> coords(net.node_count());
  for (const auto& [id, p] : placed) coords[net.index_of(id)] = p;
  net.set_coordinates(std::move(coords));
  return net;
}

bool RoadNetwork::contains(NodeId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::size_t RoadNetwork::index_of(NodeId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw InvalidArgument("unknown node " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

std::span<const std::uint32_t> RoadNetwork::neighbors(std::size_t index) const {
  return std::span<const std::uint32_t>(adjacency_).subspan(
      offsets_.at(index), offsets_.at(index + 1) - offsets_[index]);
}

std::vector<int> RoadNetwork::distances_from(NodeId source) const {
  return distances_from_index(index_of(source));
}

std::vector<int> RoadNetwork::distances_from_index(std::size_t source) const {
  std::vector<int> dist(node_count(), -1);
  std::vector<std::uint32_t> queue;
  queue.reserve(node_count());
  dist.at(source) = 0;
  queue.push_back(static_cast<std::uint32_t>(source));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    for (std::uint32_t w : neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

int RoadNetwork::shortest_distance(NodeId a, NodeId b) const {
  const std::size_t ia = index_of(a);
  const std::size_t ib = index_of(b);
  if (ia == ib) return 0;
  const int d = distances_from_index(ia)[ib];
  if (d < 0) {
    throw InvalidArgument("nodes " + std::to_string(a) + " and " + std::to_string(b) +
                          " are disconnected");
  }
  return d;
}

std::vector<NodeId> RoadNetwork::canonical_path(NodeId a, NodeId b) const {
  const std::size_t ia = index_of(a);
  const std::size_t ib = index_of(b);
  const std::vector<int> to_b = distances_from_index(ib);
  if (to_b[ia] < 0) {
    throw InvalidArgument("nodes " + std::to_string(a) + " and " + std::to_string(b) +
                          " are disconnected");
  }
  std::vector<NodeId> path{a};
  std::size_t cur = ia;
  while (cur != ib) {
    // Neighbours are sorted, so the first one closer to b is the least id.
    for (std::uint32_t w : neighbors(cur)) {
      if (to_b[w] == to_b[cur] - 1) {
        cur = w;
        break;
      }
    }
    path.push_back(ids_[cur]);
  }
  return path;
}

bool RoadNetwork::is_connected() const {
  if (node_count() == 0) return true;
  const auto dist = distances_from_index(0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::vector<std::pair<NodeId, NodeId>> RoadNetwork::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count());
  for (std::size_t v = 0; v < node_count(); ++v) {
    for (std::uint32_t w : neighbors(v)) {
      if (v < w) out.emplace_back(ids_[v], ids_[w]);
    }
  }
  return out;
}

void RoadNetwork::set_coordinates(std::vector<Point> coords) {
  if (!coords.empty() && coords.size() != node_count()) {
    throw InvalidArgument("coordinate count does not match node count");
  }
  coords_ = std::move(coords);
}

NodeId RoadNetwork::nearest_node(Point p) const {
  if (coords_.empty()) throw InvalidArgument("network has no coordinates");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < coords_.size(); ++v) {
    const double dx = coords_[v].x - p.x;
    const double dy = coords_[v].y - p.y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return ids_[best];
}

// ---------------------------------------------------------------------------

TripGeometry::TripGeometry(std::shared_ptr<const RoadNetwork> network,
                           std::vector<RiderType> types)
    : network_(std::move(network)), types_(std::move(types)) {
  if (!network_) throw InvalidArgument("null network");
  if (types_.empty()) throw InvalidArgument("at least one rider type is required");
  double total = 0.0;
  for (const auto& t : types_) {
    if (!(t.arrival_prob >= 0.0 && t.arrival_prob <= 1.0)) {
      throw InvalidArgument("type " + std::to_string(t.id) + ": arrival probability outside [0, 1]");
    }
    total += t.arrival_prob;
  }
  if (total > 1.0 + 1e-12) {
    throw InvalidArgument("arrival probabilities sum to more than 1");
  }
  for (const auto& t : types_) {
    from_origin_.push_back(network_->distances_from(t.origin));
    from_destination_.push_back(network_->distances_from(t.destination));
    const int len = from_origin_.back()[network_->index_of(t.destination)];
    if (len < 0) {
      throw InvalidArgument("type " + std::to_string(t.id) + ": destination unreachable");
    }
    if (len < 1) {
      throw InvalidArgument("type " + std::to_string(t.id) + ": trip length must be >= 1");
    }
    lengths_.push_back(len);
    paths_.push_back(network_->canonical_path(t.origin, t.destination));
  }
}

int TripGeometry::max_length() const noexcept {
  return *std::max_element(lengths_.begin(), lengths_.end());
}

double TripGeometry::total_arrival_prob() const noexcept {
  double total = 0.0;
  for (const auto& t : types_) total += t.arrival_prob;
  return total;
}

std::span<const NodeId> TripGeometry::path(int i) const {
  return paths_.at(static_cast<std::size_t>(i));
}

void TripGeometry::check_state(int type, int clock) const {
  if (type < 0 || static_cast<std::size_t>(type) >= types_.size()) {
    throw InvalidArgument("type index " + std::to_string(type) + " out of range");
  }
  if (clock > lengths_[static_cast<std::size_t>(type)] - 1) {
    throw InvalidArgument("clock " + std::to_string(clock) + " beyond trip of type index " +
                          std::to_string(type));
  }
}

NodeId TripGeometry::position(int i, int clock) const {
  check_state(i, clock);
  const auto& p = paths_[static_cast<std::size_t>(i)];
  return clock <= 0 ? p.front() : p[static_cast<std::size_t>(clock)];
}

int TripGeometry::distance_from_origin(int i, NodeId node) const {
  return from_origin_.at(static_cast<std::size_t>(i))[node_index(node)];
}

int TripGeometry::distance_from_destination(int i, NodeId node) const {
  return from_destination_.at(static_cast<std::size_t>(i))[node_index(node)];
}

SharedTrip TripGeometry::shared_trip(int new_type, int existing_type, int clock) const {
  check_state(existing_type, clock);
  check_state(new_type, 0);
  const auto i = static_cast<std::size_t>(new_type);
  const auto j = static_cast<std::size_t>(existing_type);
  const std::size_t pos = node_index(position(existing_type, clock));
  const std::size_t dest_j = node_index(types_[j].destination);

  const int li = lengths_[i];
  const int oi_to_dj = from_origin_[i][dest_j];
  const int di_to_dj = from_destination_[i][dest_j];

  SharedTrip trip;
  trip.approach = from_origin_[i][pos];
  const int drop_j_first = oi_to_dj + di_to_dj;
  const int drop_i_first = li + di_to_dj;
  trip.existing_drops_first = drop_j_first <= drop_i_first;
  const int traveled = std::max(0, clock);
  if (trip.existing_drops_first) {
    trip.length = trip.approach + drop_j_first;
    trip.new_onboard = drop_j_first;
    trip.existing_onboard = traveled + trip.approach + oi_to_dj;
    trip.overlap = oi_to_dj;
  } else {
    trip.length = trip.approach + drop_i_first;
    trip.new_onboard = li;
    trip.existing_onboard = traveled + trip.approach + drop_i_first;
    trip.overlap = li;
  }
  return trip;
}

bool TripGeometry::is_compatible(int new_type, int existing_type, int clock) const {
  const SharedTrip trip = shared_trip(new_type, existing_type, clock);
  const auto i = static_cast<std::size_t>(new_type);
  const auto j = static_cast<std::size_t>(existing_type);
  if (!(trip.length < lengths_[i] + lengths_[j] - std::max(0, clock))) return false;

  // Backtracking: the existing rider's position must not lie on a shortest
  // path from O_i (exclusive) to D_j.
  const std::size_t pos = node_index(position(existing_type, clock));
  const std::size_t origin_i = node_index(types_[i].origin);
  const std::size_t dest_j = node_index(types_[j].destination);
  if (pos != origin_i &&
      from_origin_[i][pos] + from_destination_[j][pos] == from_origin_[i][dest_j]) {
    return false;
  }
  return true;
}

}  // namespace tripmatch
