#include <benchmark/benchmark.h>

#include "segmix/explore/explore.hpp"
#include "segmix/explore/reach.hpp"

using namespace segmix;

static void BM_SelectEpsGreedy(benchmark::State& state) {
  std::vector<double> q{0.0, 0.1, 0.1, 0.05, 0.2};
  env::AvailMask avail(5, 1);
  Rng rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(explore::select_eps_greedy(q, avail, 0.5, rng));
}
BENCHMARK(BM_SelectEpsGreedy);

static void BM_SelectSeg(benchmark::State& state) {
  std::vector<double> q{0.0, 0.1, 0.1, 0.05, 0.2};
  env::AvailMask avail(5, 1);
  repr::ActionGroups groups({{0}, {1, 2}, {3, 4, 0}}, 5);
  Rng rng(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(explore::select_seg(q, groups, avail, 0.5, rng));
}
BENCHMARK(BM_SelectSeg);

static void BM_ActionProbabilities(benchmark::State& state) {
  std::vector<double> q{0.0, 0.1, 0.1, 0.05, 0.2};
  env::AvailMask avail(5, 1);
  repr::ActionGroups groups({{0}, {1, 2}, {3, 4, 0}}, 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        explore::action_probabilities(explore::Strategy::kSeg, q, &groups, avail, 0.5));
}
BENCHMARK(BM_ActionProbabilities);

static void BM_CountReach100k(benchmark::State& state) {
  for (auto _ : state) {
    explore::CountReachConfig cc{2, 2, 3, 0.5, 100000, explore::Strategy::kSeg, 1};
    benchmark::DoNotOptimize(explore::count_reaches(cc));
  }
}
BENCHMARK(BM_CountReach100k)->Unit(benchmark::kMillisecond);
