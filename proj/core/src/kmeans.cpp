#include "segmix/repr/kmeans.hpp"

#include <limits>
#include <set>
#include <stdexcept>

#include "segmix/rng.hpp"

namespace segmix::repr {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed, int max_iter) {
  if (points.empty()) throw std::invalid_argument("kmeans: no points");
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("kmeans: inconsistent dimensions");

  std::set<std::vector<double>> distinct(points.begin(), points.end());
  if (static_cast<std::size_t>(k) > distinct.size())
    throw std::invalid_argument("kmeans: k exceeds the number of distinct points");

  // Greedy farthest-point seeding. The first centroid is drawn from the
  // seed; each next centroid is the point farthest from the chosen set,
  // ties to the lowest index.
  Rng rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.push_back(points[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(n)))]);
  while (static_cast<int>(centroids.size()) < k) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t p = 0; p < n; ++p) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) nearest = std::min(nearest, sq_dist(points[p], c));
      if (nearest > best_d) {
        best_d = nearest;
        best = p;
      }
    }
    centroids.push_back(points[best]);
  }

  KMeansResult res;
  res.assignment.assign(n, -1);
  res.centroids = std::move(centroids);
  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter + 1;
    // Assignment step; ties break to the lowest cluster id.
    bool changed = false;
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t p = 0; p < n; ++p) {
      int best_c = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double d = sq_dist(points[p], res.centroids[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      if (res.assignment[p] != best_c) {
        res.assignment[p] = best_c;
        changed = true;
      }
      ++counts[static_cast<std::size_t>(best_c)];
    }

    // Reseed any empty cluster to the point farthest from its centroid.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] != 0) continue;
      std::size_t worst = 0;
      double worst_d = -1.0;
      for (std::size_t p = 0; p < n; ++p) {
        double d = sq_dist(points[p], res.centroids[static_cast<std::size_t>(res.assignment[p])]);
        if (d > worst_d && counts[static_cast<std::size_t>(res.assignment[p])] > 1) {
          worst_d = d;
          worst = p;
        }
      }
      --counts[static_cast<std::size_t>(res.assignment[worst])];
      res.assignment[worst] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }

    // Update step.
    std::vector<std::vector<double>> next(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t d = 0; d < dim; ++d)
        next[static_cast<std::size_t>(res.assignment[p])][d] += points[p][d];
    for (int c = 0; c < k; ++c)
      for (std::size_t d = 0; d < dim; ++d)
        next[static_cast<std::size_t>(c)][d] /=
            static_cast<double>(counts[static_cast<std::size_t>(c)]);
    res.centroids = std::move(next);

    if (!changed) break;
  }

  res.inertia = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    res.inertia += sq_dist(points[p], res.centroids[static_cast<std::size_t>(res.assignment[p])]);
  return res;
}

}  // namespace segmix::repr
