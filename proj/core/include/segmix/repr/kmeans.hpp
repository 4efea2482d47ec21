#pragma once

#include <cstdint>
#include <vector>

namespace segmix::repr {

struct KMeansResult {
  std::vector<int> assignment;           // point -> cluster in [0, k)
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;                  // sum of squared distances to centroids
  int iterations = 0;
};

// Lloyd's algorithm with greedy farthest-point seeding, deterministic given
// the seed. Converges when assignments stop changing or after max_iter
// rounds; an empty cluster is reseeded to the point farthest from its
// centroid. Requires k <= number of distinct points.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed, int max_iter = 100);

}  // namespace segmix::repr
