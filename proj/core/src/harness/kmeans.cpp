#include "tripmatch/harness/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "tripmatch/error.hpp"

namespace tripmatch::harness {

namespace {

double sq(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

KMeansResult kmeans(std::span<const Point> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations) {
  if (points.empty()) throw InvalidArgument("k-means needs at least one point");
  if (k == 0) throw InvalidArgument("k-means needs k >= 1");
  k = std::min(k, points.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  KMeansResult res;
  std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
  res.centroids.push_back(points[first(rng)]);
  std::vector<double> d2(points.size());
  while (res.centroids.size() < k) {
    double total = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& c : res.centroids) best = std::min(best, sq(points[p], c));
      d2[p] = best;
      total += best;
    }
    if (total <= 0.0) break;  // fewer distinct points than k
    double target = unit(rng) * total;
    std::size_t chosen = points.size() - 1;
    for (std::size_t p = 0; p < points.size(); ++p) {
      target -= d2[p];
      if (target < 0.0) {
        chosen = p;
        break;
      }
    }
    res.centroids.push_back(points[chosen]);
  }

  const std::size_t kk = res.centroids.size();
  res.labels.assign(points.size(), -1);
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    bool changed = false;
    for (std::size_t p = 0; p < points.size(); ++p) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = sq(points[p], res.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (res.labels[p] != best) {
        res.labels[p] = best;
        changed = true;
      }
    }
    if (!changed && res.iterations > 0) break;

    std::vector<Point> sum(kk);
    std::vector<std::size_t> count(kk, 0);
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto c = static_cast<std::size_t>(res.labels[p]);
      sum[c].x += points[p].x;
      sum[c].y += points[p].y;
      ++count[c];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (count[c] > 0) {
        res.centroids[c] = {sum[c].x / static_cast<double>(count[c]),
                            sum[c].y / static_cast<double>(count[c])};
        continue;
      }
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t p = 0; p < points.size(); ++p) {
        const double d = sq(points[p], res.centroids[static_cast<std::size_t>(res.labels[p])]);
        if (d > far_d) {
          far_d = d;
          far = p;
        }
      }
      res.centroids[c] = points[far];
    }
  }

  res.inertia = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    res.inertia += sq(points[p], res.centroids[static_cast<std::size_t>(res.labels[p])]);
  }
  return res;
}

}  // namespace tripmatch::harness
