#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tripmatch {

struct WeightedEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

struct MatchingOptions {
  std::size_t max_vertices = 64;
  // Edges heavier than this are never used; the empty matching is feasible.
  double eligibility_tol = 0.0;
};

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // each pair (min, max), sorted
  double weight = 0.0;
};

// Exact minimum-weight matching over eligible edges. Equal-weight optima are
// ordered by pair count (more first), then by the sorted list of positions of
// their edges in `edges`, lexicographically smallest first; callers control
// tie-breaking through edge order. Vertices that touch no eligible edge do
// not count toward max_vertices. Throws SizingError above the cap and
// InvalidArgument for self loops or out-of-range endpoints.
Matching exact_matching(std::size_t vertex_count, std::span<const WeightedEdge> edges,
                        const MatchingOptions& options = {});

}  // namespace tripmatch
