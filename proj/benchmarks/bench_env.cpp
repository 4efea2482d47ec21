#include <benchmark/benchmark.h>

#include "segmix/env/coord_game.hpp"
#include "segmix/env/grouped_env.hpp"

using namespace segmix;

static void BM_CoordGameStep(benchmark::State& state) {
  env::CoordGameConfig gc;
  gc.n_agents = static_cast<int>(state.range(0));
  env::CoordinationGame game(gc, 0.99, 1 << 30);
  game.reset(0);
  std::vector<int> joint(static_cast<std::size_t>(gc.n_agents), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(game.step(joint));
  }
}
BENCHMARK(BM_CoordGameStep)->Arg(2)->Arg(5)->Arg(10);

static void BM_GroupedEnvStep(benchmark::State& state) {
  auto game = env::make_grouped_effects_env(4, 8, 3, 0.1, 7);
  game->reset(0);
  std::vector<int> joint{1, 2, 3, 4};
  long t = 0;
  for (auto _ : state) {
    auto res = game->step(joint);
    if (res.terminal) game->reset(static_cast<std::uint64_t>(++t));
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_GroupedEnvStep);
