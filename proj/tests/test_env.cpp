#include <doctest.h>

#include "segmix/env/coord_game.hpp"
#include "segmix/env/grouped_env.hpp"

using namespace segmix;

TEST_CASE("coordination game semantics") {
  env::CoordGameConfig gc{5, 4, 3, 100.0};
  env::CoordinationGame game(gc, 0.99, 50);

  SUBCASE("reset starts at s_0 for any seed") {
    game.reset(123456);
    CHECK(game.state_index() == 0);
    game.reset(0);
    CHECK(game.state_index() == 0);
  }

  SUBCASE("two resets with equal seeds give identical observations") {
    auto a = game.reset(7);
    auto b = game.reset(7);
    CHECK(a.obs == b.obs);
    CHECK(a.state == b.state);
  }

  SUBCASE("observation is the shared one-hot of the state index") {
    auto rr = game.reset(0);
    REQUIRE(rr.obs.size() == 5);
    for (const auto& o : rr.obs) {
      REQUIRE(o.size() == 5);  // K+1
      CHECK(o[0] == 1.0);
      CHECK(o[1] == 0.0);
    }
  }

  SUBCASE("joint a_0 climbs the chain") {
    game.reset(0);
    std::vector<int> all0(5, 0);
    game.step(all0);
    game.step(all0);
    CHECK(game.state_index() == 2);
    auto res = game.step(all0);
    CHECK(game.state_index() == 3);
    CHECK(res.reward == 0.0);
  }

  SUBCASE("any joint action in s_K pays 100 and resets to s_0") {
    game.reset(0);
    std::vector<int> all0(5, 0);
    for (int t = 0; t < 4; ++t) game.step(all0);
    CHECK(game.state_index() == 4);
    auto res = game.step(std::vector<int>{1, 0, 2, 0, 0});
    CHECK(res.reward == 100.0);
    CHECK(game.state_index() == 0);
  }

  SUBCASE("a broken chain resets to s_0 with reward 0") {
    game.reset(0);
    std::vector<int> all0(5, 0);
    game.step(all0);
    game.step(all0);
    auto res = game.step(std::vector<int>{0, 0, 0, 0, 1});
    CHECK(res.reward == 0.0);
    CHECK(game.state_index() == 0);
  }

  SUBCASE("every action is always available") {
    auto rr = game.reset(0);
    for (const auto& m : rr.avail)
      for (auto v : m) CHECK(v == 1);
  }

  SUBCASE("out-of-range action ids are rejected") {
    game.reset(0);
    CHECK_THROWS_AS(game.step(std::vector<int>{0, 0, 0, 0, 3}), std::invalid_argument);
    CHECK_THROWS_AS(game.step(std::vector<int>{0, 0, 0, 0, -1}), std::invalid_argument);
    CHECK_THROWS_AS(game.step(std::vector<int>{0, 0}), std::invalid_argument);
  }

  SUBCASE("terminal exactly at the episode horizon") {
    game.reset(0);
    std::vector<int> a(5, 1);
    for (int t = 0; t < 49; ++t) CHECK_FALSE(game.step(a).terminal);
    CHECK(game.step(a).terminal);
  }

  SUBCASE("state index stays within 0..K under random play") {
    game.reset(0);
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
      std::vector<int> joint(5);
      for (auto& a : joint) a = rng.uniform_int(3);
      game.step(joint);
      CHECK(game.state_index() >= 0);
      CHECK(game.state_index() <= 4);
      if (game.state_index() == 0) continue;
    }
  }

  SUBCASE("degenerate configs are rejected") {
    CHECK_THROWS_AS(env::CoordinationGame(env::CoordGameConfig{0, 4, 3, 100.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(env::CoordinationGame(env::CoordGameConfig{5, 0, 3, 100.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(env::CoordinationGame(env::CoordGameConfig{5, 4, 1, 100.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("grouped-effects environment") {
  SUBCASE("zero noise: same-group actions produce identical observation deltas") {
    auto e = env::make_grouped_effects_env(1, 6, 2, 0.0, 42);
    // Actions 0,2,4 share group 0; 1,3,5 share group 1 (round-robin).
    CHECK(e->true_group_labels() == std::vector<int>{0, 1, 0, 1, 0, 1});
    CHECK(e->displacement(1) == e->displacement(3));  // identical by construction
    auto rr = e->reset(1);
    auto before = rr.obs[0];
    auto r1 = e->step(std::vector<int>{1});
    std::vector<double> d1(4), d3(4);
    for (int d = 0; d < 4; ++d) d1[d] = r1.next_obs[0][d] - before[d];
    before = r1.next_obs[0];
    auto r3 = e->step(std::vector<int>{3});
    for (int d = 0; d < 4; ++d) d3[d] = r3.next_obs[0][d] - before[d];
    for (int d = 0; d < 4; ++d) CHECK(d1[d] == doctest::Approx(d3[d]).epsilon(1e-12));
  }

  SUBCASE("group sizes stay as balanced as possible") {
    auto e = env::make_grouped_effects_env(2, 6, 2, 0.1, 0);
    int c0 = 0, c1 = 0;
    for (int label : e->true_group_labels()) (label == 0 ? c0 : c1)++;
    CHECK(c0 == 3);
    CHECK(c1 == 3);
  }

  SUBCASE("construction is deterministic in the seed") {
    auto a = env::make_grouped_effects_env(2, 7, 3, 0.05, 99);
    auto b = env::make_grouped_effects_env(2, 7, 3, 0.05, 99);
    CHECK(a->true_group_labels() == b->true_group_labels());
    for (int act = 0; act < 7; ++act) CHECK(a->displacement(act) == b->displacement(act));
  }

  SUBCASE("episodes are reproducible given the reset seed") {
    auto e = env::make_grouped_effects_env(2, 6, 2, 0.1, 7);
    auto run = [&] {
      e->reset(7);
      std::vector<double> acc;
      for (int t = 0; t < 5; ++t) {
        auto res = e->step(std::vector<int>{1, 3});
        for (const auto& o : res.next_obs) acc.insert(acc.end(), o.begin(), o.end());
      }
      return acc;
    };
    CHECK(run() == run());
  }

  SUBCASE("the no-op applies zero displacement") {
    auto e = env::make_grouped_effects_env(1, 6, 2, 0.0, 3);
    CHECK(e->always_available_ids() == std::vector<int>{0});
    auto rr = e->reset(1);
    auto before = rr.obs[0];
    auto res = e->step(std::vector<int>{0});
    CHECK(res.next_obs[0] == before);
    CHECK(res.reward == 0.0);
  }

  SUBCASE("reward is a fixed linear function of the joint displacement") {
    auto e = env::make_grouped_effects_env(2, 6, 2, 0.5, 11);
    e->reset(1);
    auto ra = e->step(std::vector<int>{1, 1});
    e->reset(2);  // different episode noise
    auto rb = e->step(std::vector<int>{1, 1});
    CHECK(ra.reward == rb.reward);  // noise does not enter the reward
  }

  SUBCASE("degenerate parameters are rejected") {
    CHECK_THROWS_AS(env::make_grouped_effects_env(1, 6, 1, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(env::make_grouped_effects_env(1, 2, 3, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(env::make_grouped_effects_env(0, 6, 2, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(env::make_grouped_effects_env(1, 6, 2, -0.5, 0), std::invalid_argument);
  }
}
