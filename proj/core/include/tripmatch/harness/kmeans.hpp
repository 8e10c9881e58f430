#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tripmatch/netgraph.hpp"

namespace tripmatch::harness {

struct KMeansResult {
  std::vector<Point> centroids;
  std::vector<int> labels;  // per input point
  double inertia = 0.0;     // sum of squared distances to the assigned centroid
  std::size_t iterations = 0;
};

// Lloyd iterations from k-means++ seeding. k is capped at the number of
// points. An emptied cluster is reseeded at the point farthest from its
// centroid.
KMeansResult kmeans(std::span<const Point> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations = 100);

}  // namespace tripmatch::harness
