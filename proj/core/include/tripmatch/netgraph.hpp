#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tripmatch/wtp.hpp"

namespace tripmatch {

using NodeId = std::int64_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Undirected road graph in which every edge is one distance unit, i.e. one
// period of travel. Node ids are arbitrary non-negative integers; internally
// nodes are stored in ascending id order so that index order equals id order.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  // Self loops are rejected; duplicate edges are merged.
  static RoadNetwork from_edges(std::span<const std::pair<NodeId, NodeId>> edges);

  // Path 0 - 1 - ... - length.
  static RoadNetwork line(int length);

  // rows x cols intersections with `edge_length` unit segments between
  // neighbours. Intersection (r, c) has id r * cols + c and coordinate
  // (c * edge_length, r * edge_length); interior segment nodes get ids from
  // rows * cols upward.
  static RoadNetwork grid(int rows, int cols, int edge_length);

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  bool contains(NodeId id) const;
  std::size_t index_of(NodeId id) const;
  NodeId id_at(std::size_t index) const { return ids_.at(index); }

  // Neighbour indices of `index`, ascending.
  std::span<const std::uint32_t> neighbors(std::size_t index) const;

  // BFS hop counts from `source` to every node index; -1 when unreachable.
  std::vector<int> distances_from(NodeId source) const;
  std::vector<int> distances_from_index(std::size_t source) const;

  // Throws InvalidArgument for unknown nodes or a disconnected pair.
  int shortest_distance(NodeId a, NodeId b) const;

  // The shortest path from a to b that always steps to the least-id
  // neighbour still on some shortest path. Includes both endpoints.
  std::vector<NodeId> canonical_path(NodeId a, NodeId b) const;

  bool is_connected() const;

  std::vector<std::pair<NodeId, NodeId>> edges() const;

  bool has_coordinates() const noexcept { return !coords_.empty(); }
  // Indexed by node index. Empty when the network carries no geometry.
  std::span<const Point> coordinates() const noexcept { return coords_; }
  void set_coordinates(std::vector<Point> coords);
  // Nearest node (Euclidean) to p; requires coordinates.
  NodeId nearest_node(Point p) const;

 private:
  std::vector<NodeId> ids_;               // ascending
  std::vector<std::size_t> offsets_;      // CSR row starts, size n + 1
  std::vector<std::uint32_t> adjacency_;  // CSR neighbour indices
  std::vector<Point> coords_;
};

struct RiderType {
  int id = 0;  // external label; types are addressed by position elsewhere
  NodeId origin = 0;
  NodeId destination = 0;
  double arrival_prob = 0.0;  // per period
  WtpModel wtp = WtpModel::uniform();
};

// Geometry of one candidate pairing: the vehicle carrying (or about to carry)
// the existing rider drives from that rider's position to the new rider's
// origin and then drops both riders in the cheaper order.
struct SharedTrip {
  int approach = 0;         // position of existing rider -> new origin
  int length = 0;           // remaining shared route from the position
  bool existing_drops_first = true;
  int new_onboard = 0;      // new rider: pickup -> own dropoff
  int existing_onboard = 0; // existing rider: own pickup -> own dropoff
  int overlap = 0;          // distance with both riders aboard
};

// Rider types laid over a network with the per-type BFS tables needed for
// positions, shared lengths and the compatibility rules. Immutable.
class TripGeometry {
 public:
  TripGeometry(std::shared_ptr<const RoadNetwork> network, std::vector<RiderType> types);

  const RoadNetwork& network() const noexcept { return *network_; }
  std::shared_ptr<const RoadNetwork> network_ptr() const noexcept { return network_; }
  std::span<const RiderType> types() const noexcept { return types_; }
  std::size_t type_count() const noexcept { return types_.size(); }
  const RiderType& type(int i) const { return types_.at(static_cast<std::size_t>(i)); }

  // Solo trip length l_i.
  int length(int i) const { return lengths_.at(static_cast<std::size_t>(i)); }
  int max_length() const noexcept;
  double total_arrival_prob() const noexcept;

  // Canonical solo path of type i (node ids, l_i + 1 entries).
  std::span<const NodeId> path(int i) const;

  // Position of a solo rider of type i with clock u: the origin while
  // waiting (u <= 0), otherwise the u-th node of the canonical path.
  NodeId position(int i, int clock) const;

  // d(O_i, node) and d(D_i, node).
  int distance_from_origin(int i, NodeId node) const;
  int distance_from_destination(int i, NodeId node) const;

  SharedTrip shared_trip(int new_type, int existing_type, int clock) const;
  int shared_trip_length(int new_type, int existing_type, int clock) const {
    return shared_trip(new_type, existing_type, clock).length;
  }

  // Trip length condition and backtracking condition.
  bool is_compatible(int new_type, int existing_type, int clock) const;

 private:
  void check_state(int type, int clock) const;
  std::size_t node_index(NodeId id) const { return network_->index_of(id); }

  std::shared_ptr<const RoadNetwork> network_;
  std::vector<RiderType> types_;
  std::vector<int> lengths_;
  std::vector<std::vector<NodeId>> paths_;
  std::vector<std::vector<int>> from_origin_;       // per type, by node index
  std::vector<std::vector<int>> from_destination_;  // per type, by node index
};

}  // namespace tripmatch
