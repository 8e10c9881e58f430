#include "tripmatch/harness/generators.hpp"

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "tripmatch/error.hpp"

namespace tripmatch::harness {

GeneratedInstance gen_example1(int L, int l, double total_arrival, const WtpModel& wtp) {
  if (L < 1) throw InvalidArgument("example 1 needs L >= 1");
  if (l < 1 || l > L) throw InvalidArgument("example 1 needs 1 <= l <= L");
  auto network = std::make_shared<const RoadNetwork>(RoadNetwork::line(L));
  const double half = total_arrival / 2.0;
  std::vector<RiderType> types{
      {0, 0, L, half, wtp},
      {1, L - l, L, half, wtp},
  };
  GeneratedInstance out;
  out.geometry = std::make_shared<const TripGeometry>(network, std::move(types));
  out.delta = 1.0 - static_cast<double>(l) / static_cast<double>(L);
  return out;
}

GeneratedInstance gen_example2(const Example2Options& o) {
  if (o.type_count < 1) throw InvalidArgument("example 2 needs at least one type");
  if (o.rows < 1 || o.cols < 1 || o.edge_length < 1) {
    throw InvalidArgument("example 2 grid dimensions must be positive");
  }
  if (o.trip_length % o.edge_length != 0) {
    throw InvalidArgument("trip length must be a multiple of the edge length");
  }
  const int hops = o.trip_length / o.edge_length;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int r1 = 0; r1 < o.rows; ++r1) {
    for (int c1 = 0; c1 < o.cols; ++c1) {
      for (int r2 = 0; r2 < o.rows; ++r2) {
        for (int c2 = 0; c2 < o.cols; ++c2) {
          if (std::abs(r1 - r2) + std::abs(c1 - c2) == hops) {
            pairs.emplace_back(r1 * o.cols + c1, r2 * o.cols + c2);
          }
        }
      }
    }
  }
  const auto n = static_cast<std::size_t>(o.type_count);
  if (n > pairs.size()) {
    throw InvalidArgument("only " + std::to_string(pairs.size()) +
                          " origin-destination pairs have the requested length");
  }
  // Partial Fisher-Yates: the first n entries become the sample.
  std::mt19937_64 rng(o.seed);
  for (std::size_t k = 0; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pairs.size() - 1);
    std::swap(pairs[k], pairs[pick(rng)]);
  }
  auto network =
      std::make_shared<const RoadNetwork>(RoadNetwork::grid(o.rows, o.cols, o.edge_length));
  std::vector<RiderType> types;
  for (std::size_t k = 0; k < n; ++k) {
    types.push_back({static_cast<int>(k), pairs[k].first, pairs[k].second,
                     o.total_arrival / static_cast<double>(n), o.wtp});
  }
  GeneratedInstance out;
  out.geometry = std::make_shared<const TripGeometry>(network, std::move(types));
  return out;
}

}  // namespace tripmatch::harness
