#pragma once

#include <cstdint>
#include <memory>

#include "tripmatch/netgraph.hpp"

namespace tripmatch::harness {

struct GeneratedInstance {
  std::shared_ptr<const TripGeometry> geometry;
  double delta = 0.0;  // demand heterogeneity; Example 1 only
};

// Line 0..L with a long type 0 -> L and a short type L - l -> L, each with
// half of total_arrival. delta = 1 - l / L.
GeneratedInstance gen_example1(int L, int l, double total_arrival,
                               const WtpModel& wtp = WtpModel::uniform());

struct Example2Options {
  int type_count = 10;
  int rows = 10;
  int cols = 10;
  int edge_length = 10;
  int trip_length = 100;  // L
  double total_arrival = 0.1;
  std::uint64_t seed = 1;
  WtpModel wtp = WtpModel::uniform();
};

// Grid of intersections; type_count distinct ordered intersection pairs at
// distance exactly trip_length, drawn uniformly without replacement.
GeneratedInstance gen_example2(const Example2Options& options);

}  // namespace tripmatch::harness
