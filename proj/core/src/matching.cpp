#include "tripmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tripmatch/error.hpp"

namespace tripmatch {

namespace {

struct Arc {
  int to = 0;
  double weight = 0.0;
  std::size_t rank = 0;  // position in the caller's edge list
};

class BranchAndBound {
 public:
  BranchAndBound(std::vector<std::vector<Arc>> adjacency)
      : adj_(std::move(adjacency)), mate_(adj_.size(), -1) {
    cheapest_half_.resize(adj_.size(), 0.0);
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      for (const Arc& a : adj_[v]) {
        cheapest_half_[v] = std::min(cheapest_half_[v], 0.5 * a.weight);
        cheapest_half_[a.to] = std::min(cheapest_half_[a.to], 0.5 * a.weight);
      }
    }
  }

  Matching solve() {
    search(0, 0.0, 0);
    Matching m;
    m.weight = best_weight_;
    for (std::size_t v = 0; v < best_mate_.size(); ++v) {
      const int w = best_mate_[v];
      if (w > static_cast<int>(v)) m.pairs.emplace_back(static_cast<int>(v), w);
    }
    return m;
  }

 private:
  // Each matched edge costs at least the two cheapest half-weights of its
  // endpoints, and unmatched vertices cost nothing.
  double lower_bound(std::size_t from) const {
    double bound = 0.0;
    for (std::size_t v = from; v < adj_.size(); ++v) {
      if (mate_[v] < 0) bound += cheapest_half_[v];
    }
    return bound;
  }

  bool better(double weight, std::size_t pairs, const std::vector<std::size_t>& ranks) const {
    const double eps = 1e-9 * std::max(1.0, std::abs(best_weight_));
    if (weight < best_weight_ - eps) return true;
    if (weight > best_weight_ + eps) return false;
    if (pairs != best_pairs_) return pairs > best_pairs_;
    return ranks < best_ranks_;
  }

  void search(std::size_t v, double weight, std::size_t pairs) {
    while (v < adj_.size() && mate_[v] >= 0) ++v;
    if (v == adj_.size()) {
      std::vector<std::size_t> ranks = ranks_;
      std::sort(ranks.begin(), ranks.end());
      if (best_mate_.empty() || better(weight, pairs, ranks)) {
        best_weight_ = weight;
        best_pairs_ = pairs;
        best_mate_ = mate_;
        best_ranks_ = std::move(ranks);
      }
      return;
    }
    if (!best_mate_.empty()) {
      const double eps = 1e-9 * std::max(1.0, std::abs(best_weight_));
      if (weight + lower_bound(v) > best_weight_ + eps) return;
    }
    for (const Arc& a : adj_[v]) {
      if (mate_[a.to] >= 0) continue;
      mate_[v] = a.to;
      mate_[a.to] = static_cast<int>(v);
      ranks_.push_back(a.rank);
      search(v + 1, weight + a.weight, pairs + 1);
      ranks_.pop_back();
      mate_[v] = -1;
      mate_[a.to] = -1;
    }
    // Leave v unmatched; mark it so later vertices skip it.
    mate_[v] = static_cast<int>(v);
    search(v + 1, weight, pairs);
    mate_[v] = -1;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<double> cheapest_half_;
  std::vector<int> mate_;  // self index marks "left unmatched"
  std::vector<int> best_mate_;
  std::vector<std::size_t> ranks_;  // edges in the current partial matching
  std::vector<std::size_t> best_ranks_;  // sorted
  double best_weight_ = 0.0;
  std::size_t best_pairs_ = 0;
};

}  // namespace

Matching exact_matching(std::size_t vertex_count, std::span<const WeightedEdge> edges,
                        const MatchingOptions& options) {
  // Compact to vertices that touch an eligible edge.
  std::vector<int> local(vertex_count, -1);
  std::vector<int> global;
  for (const WeightedEdge& e : edges) {
    if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(e.a) >= vertex_count ||
        static_cast<std::size_t>(e.b) >= vertex_count) {
      throw InvalidArgument("matching edge endpoint out of range");
    }
    if (e.a == e.b) throw InvalidArgument("matching edge is a self loop");
    if (!(e.weight <= options.eligibility_tol)) continue;
    for (int v : {e.a, e.b}) {
      if (local[static_cast<std::size_t>(v)] < 0) {
        local[static_cast<std::size_t>(v)] = 0;
        global.push_back(v);
      }
    }
  }
  if (global.size() > options.max_vertices) {
    throw SizingError("matching has " + std::to_string(global.size()) +
                      " candidate riders; cap is " + std::to_string(options.max_vertices));
  }
  std::sort(global.begin(), global.end());
  for (std::size_t k = 0; k < global.size(); ++k) {
    local[static_cast<std::size_t>(global[k])] = static_cast<int>(k);
  }

  std::vector<std::vector<Arc>> adj(global.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const WeightedEdge& e = edges[k];
    if (!(e.weight <= options.eligibility_tol)) continue;
    const int a = local[static_cast<std::size_t>(e.a)];
    const int b = local[static_cast<std::size_t>(e.b)];
    // Stored at the lower endpoint only; the search always branches there.
    adj[static_cast<std::size_t>(std::min(a, b))].push_back({std::max(a, b), e.weight, k});
  }

  Matching m = BranchAndBound(std::move(adj)).solve();
  for (auto& [a, b] : m.pairs) {
    a = global[static_cast<std::size_t>(a)];
    b = global[static_cast<std::size_t>(b)];
    if (a > b) std::swap(a, b);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

}  // namespace tripmatch
