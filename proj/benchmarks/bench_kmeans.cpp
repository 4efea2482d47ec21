#include <benchmark/benchmark.h>

#include "segmix/repr/kmeans.hpp"
#include "segmix/rng.hpp"

using namespace segmix;

static void BM_KMeans(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(20);
    for (auto& v : p) v = rng.uniform(-1, 1);
    pts.push_back(std::move(p));
  }
  for (auto _ : state) benchmark::DoNotOptimize(repr::kmeans(pts, 5, 3));
}
BENCHMARK(BM_KMeans)->Arg(32)->Arg(256);
