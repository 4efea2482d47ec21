#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>

#include "segmix/env/coord_game.hpp"
#include "segmix/explore/explore.hpp"
#include "segmix/explore/reach.hpp"

using namespace segmix;
using explore::Strategy;

TEST_CASE("epsilon schedule") {
  explore::EpsilonSchedule s{1.0, 0.05, 30000};
  CHECK(s.at(0) == 1.0);
  CHECK(s.at(30000) == 0.05);
  CHECK(s.at(1000000) == 0.05);
  CHECK(s.at(15000) == doctest::Approx(0.525).epsilon(1e-12));
  CHECK_THROWS_AS(s.at(-1), std::invalid_argument);
}

TEST_CASE("masked argmax") {
  env::AvailMask all{1, 1, 1};
  CHECK(explore::masked_argmax(std::vector<double>{0.0, 0.1, 0.1}, all) == 1);
  CHECK(explore::masked_argmax(std::vector<double>{5.0, 5.0, 5.0}, all) == 0);  // tie: lowest id
  env::AvailMask mask{0, 1, 1};
  CHECK(explore::masked_argmax(std::vector<double>{9.0, 0.1, 0.2}, mask) == 2);
  env::AvailMask none{0, 0, 0};
  CHECK_THROWS_AS(explore::masked_argmax(std::vector<double>{1.0, 2.0, 3.0}, none),
                  std::invalid_argument);
}

TEST_CASE("epsilon-greedy selection") {
  std::vector<double> q{0.0, 0.1, 0.1};
  env::AvailMask all{1, 1, 1};

  SUBCASE("eps 0 always picks the argmax") {
    Rng rng(1);
    for (int k = 0; k < 100; ++k) CHECK(explore::select_eps_greedy(q, all, 0.0, rng) == 1);
  }

  SUBCASE("eps 1 with three available actions is uniform within 3 sigma") {
    Rng rng(2);
    const int draws = 100000;
    std::vector<int> counts(3, 0);
    for (int k = 0; k < draws; ++k) ++counts[explore::select_eps_greedy(q, all, 1.0, rng)];
    double p = 1.0 / 3.0;
    double sigma = std::sqrt(draws * p * (1 - p));
    for (int c : counts) CHECK(std::fabs(c - draws * p) <= 3.0 * sigma);
  }

  SUBCASE("closed form: P(a0) = eps/M when a0 is never greedy") {
    double p = explore::action_probability(Strategy::kEpsGreedy, q, nullptr, all, 0.5, 0);
    CHECK(p == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
  }

  SUBCASE("fully masked input is rejected") {
    Rng rng(3);
    env::AvailMask none{0, 0, 0};
    CHECK_THROWS_AS(explore::select_eps_greedy(q, none, 0.5, rng), std::invalid_argument);
  }
}

TEST_CASE("bi-level SEG selection") {
  std::vector<double> q{0.0, 0.1, 0.1};
  env::AvailMask all{1, 1, 1};
  repr::ActionGroups coord = repr::ActionGroups::coordination_game(3);

  SUBCASE("eps 0 equals plain greedy") {
    Rng a(5), b(5);
    for (int k = 0; k < 50; ++k)
      CHECK(explore::select_seg(q, coord, all, 0.0, a) ==
            explore::select_eps_greedy(q, all, 0.0, b));
  }

  SUBCASE("coordination groups give P(a0) = eps/2 at eps=0.5") {
    double p = explore::action_probability(Strategy::kSeg, q, &coord, all, 0.5, 0);
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("eps 1 with singleton groups is uniform over actions") {
    repr::ActionGroups singles = repr::ActionGroups::singletons(3);
    Rng rng(6);
    const int draws = 60000;
    std::vector<int> counts(3, 0);
    for (int k = 0; k < draws; ++k) ++counts[explore::select_seg(q, singles, all, 1.0, rng)];
    double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
    for (int c : counts) CHECK(std::fabs(c - draws / 3.0) <= 3.0 * sigma);
  }

  SUBCASE("group emptied by the mask signals a construction bug") {
    repr::ActionGroups bad({{0}, {1, 2}}, 3);
    env::AvailMask mask{0, 1, 1};  // leaves group {0} empty
    Rng rng(7);
    bool threw = false;
    for (int k = 0; k < 200; ++k) {
      try {
        explore::select_seg(q, bad, mask, 0.9, rng);
      } catch (const std::logic_error&) {
        threw = true;
        break;
      }
    }
    CHECK(threw);
  }
}

TEST_CASE("selection-tree probabilities") {
  SUBCASE("probabilities sum to one across random configurations") {
    Rng rng(31);
    for (int cfg = 0; cfg < 40; ++cfg) {
      int m_actions = 3 + rng.uniform_int(5);
      std::vector<double> q(m_actions);
      for (auto& v : q) v = rng.uniform(-1, 1);
      env::AvailMask avail(m_actions, 1);
      // Random mask that keeps action 0 available (the augmentation id).
      for (int a = 1; a < m_actions; ++a) avail[a] = rng.unif01() < 0.75 ? 1 : 0;
      // Random partition into 2 groups, augmented with action 0.
      std::vector<int> assign(m_actions);
      for (auto& g : assign) g = rng.uniform_int(2);
      assign[0] = 0;
      bool has1 = false;
      for (int g : assign) has1 = has1 || g == 1;
      if (!has1) assign[1] = 1;
      repr::ActionGroups groups = repr::build_groups(assign, {0});
      double eps = rng.unif01();
      for (Strategy s : {Strategy::kEpsGreedy, Strategy::kSeg}) {
        auto p = explore::action_probabilities(s, q, &groups, avail, eps);
        double total = std::accumulate(p.begin(), p.end(), 0.0);
        CHECK(std::fabs(total - 1.0) <= 1e-12);
      }
    }
  }

  SUBCASE("sampler frequencies match the closed form within 3 sigma") {
    Rng rng(17);
    for (int cfg = 0; cfg < 5; ++cfg) {
      int m_actions = 3 + rng.uniform_int(3);
      std::vector<double> q(m_actions);
      for (auto& v : q) v = rng.uniform(-1, 1);
      env::AvailMask avail(m_actions, 1);
      std::vector<int> assign(m_actions);
      for (auto& g : assign) g = rng.uniform_int(2);
      assign[0] = 0;
      bool has1 = false;
      for (int g : assign) has1 = has1 || g == 1;
      if (!has1) assign[1] = 1;
      repr::ActionGroups groups = repr::build_groups(assign, {0});
      double eps = 0.2 + 0.6 * rng.unif01();

      const int draws = 50000;
      for (Strategy s : {Strategy::kEpsGreedy, Strategy::kSeg}) {
        auto p = explore::action_probabilities(s, q, &groups, avail, eps);
        std::vector<int> counts(m_actions, 0);
        Rng draw_rng(1000 + cfg);
        for (int k = 0; k < draws; ++k)
          ++counts[explore::select_action(s, q, &groups, avail, eps, draw_rng)];
        for (int a = 0; a < m_actions; ++a) {
          double sigma = std::sqrt(draws * p[a] * (1.0 - p[a]));
          CHECK(std::fabs(counts[a] - draws * p[a]) <= 3.0 * sigma + 1e-9);
        }
      }
    }
  }

  SUBCASE("single whole-set group degenerates to the two-stage closed form") {
    // With m = 1 and the group equal to A, the tree gives
    // P(a) = (1-eps + eps(1-eps)) [a = argmax] + eps^2 / |A|.
    std::vector<double> q{0.4, -0.2, 0.9, 0.0};
    env::AvailMask all{1, 1, 1, 1};
    repr::ActionGroups whole = repr::ActionGroups::whole_action_set(4);
    double eps = 0.3;
    auto p = explore::action_probabilities(Strategy::kSeg, q, &whole, all, eps);
    for (int a = 0; a < 4; ++a) {
      double expect = (a == 2 ? (1.0 - eps) + eps * (1.0 - eps) : 0.0) + eps * eps / 4.0;
      CHECK(p[static_cast<std::size_t>(a)] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("singleton non-greedy group is favored over epsilon-greedy when M > m") {
    std::vector<double> q{0.0, 0.1, 0.1, 0.1, 0.1};
    env::AvailMask all{1, 1, 1, 1, 1};
    repr::ActionGroups groups = repr::ActionGroups::coordination_game(5);  // m=2, M=5
    double eps = 0.4;
    double p_seg = explore::action_probability(Strategy::kSeg, q, &groups, all, eps, 0);
    double p_eps = explore::action_probability(Strategy::kEpsGreedy, q, nullptr, all, eps, 0);
    CHECK(p_seg == doctest::Approx(eps / 2.0).epsilon(1e-12));  // independent of |A|
    CHECK(p_eps == doctest::Approx(eps / 5.0).epsilon(1e-12));
    CHECK(p_seg > p_eps);
  }

  SUBCASE("per-agent independence: joint probability factorizes") {
    std::vector<double> q{0.0, 0.1, 0.1};
    env::AvailMask all{1, 1, 1};
    repr::ActionGroups coord = repr::ActionGroups::coordination_game(3);
    double p0 = explore::action_probability(Strategy::kSeg, q, &coord, all, 0.5, 0);
    // Empirical joint: both of two independent agents pick a0.
    Rng a(21), b(22);
    const int draws = 200000;
    int joint = 0;
    for (int k = 0; k < draws; ++k) {
      int ai = explore::select_seg(q, coord, all, 0.5, a);
      int bi = explore::select_seg(q, coord, all, 0.5, b);
      if (ai == 0 && bi == 0) ++joint;
    }
    double pj = p0 * p0;
    double sigma = std::sqrt(draws * pj * (1 - pj));
    CHECK(std::fabs(joint - draws * pj) <= 3.0 * sigma);
  }
}

TEST_CASE("reach probability closed forms") {
  SUBCASE("epsilon-greedy form") {
    explore::ReachQuery qy{Strategy::kEpsGreedy, 5, 2, 3, 1, 2, 0.5};
    CHECK(explore::reach_probability(qy) ==
          doctest::Approx(std::pow(1.0 / 6.0, 10)).epsilon(1e-12));
  }
  SUBCASE("bi-level form") {
    explore::ReachQuery qy{Strategy::kSeg, 5, 2, 3, 1, 2, 0.5};
    CHECK(explore::reach_probability(qy) == doctest::Approx(std::pow(0.25, 10)).epsilon(1e-12));
  }
  SUBCASE("t = 0 is certain") {
    explore::ReachQuery qy{Strategy::kEpsGreedy, 5, 0, 3, 1, 2, 0.5};
    CHECK(explore::reach_probability(qy) == 1.0);
  }
  SUBCASE("SEG value ignores |A|; epsilon-greedy value does not") {
    explore::ReachQuery a{Strategy::kSeg, 3, 2, 4, 1, 2, 0.4};
    explore::ReachQuery b = a;
    b.n_actions = 9;
    CHECK(explore::reach_probability(a) == explore::reach_probability(b));
    a.strategy = b.strategy = Strategy::kEpsGreedy;
    CHECK(explore::reach_probability(a) != explore::reach_probability(b));
  }
  SUBCASE("monotone bias ordering for singleton non-greedy groups when M > m") {
    explore::ReachQuery seg{Strategy::kSeg, 1, 1, 5, 1, 2, 0.5};
    explore::ReachQuery eg = seg;
    eg.strategy = Strategy::kEpsGreedy;
    CHECK(explore::reach_probability(seg) > explore::reach_probability(eg));
  }
}

TEST_CASE("markov-chain reach oracle") {
  SUBCASE("deterministic chain: always advancing visits s_K every K+1 steps") {
    auto oracle = explore::reach_count_oracle(1.0, 4, 1000000);
    CHECK(oracle.expected == doctest::Approx(1000000.0 / 5.0).epsilon(1e-9));
    CHECK(oracle.sigma == doctest::Approx(0.0));
  }

  SUBCASE("environment driven with all-a0 joint actions matches the cycle count") {
    env::CoordGameConfig gc{3, 4, 3, 100.0};
    long total = 1000;  // multiple of K+1
    env::CoordinationGame game(gc, 0.99, static_cast<int>(total) + 1);
    game.reset(0);
    long count = 0;
    for (long t = 0; t < total; ++t) {
      game.step(std::vector<int>{0, 0, 0});
      if (game.state_index() == 4) ++count;
    }
    CHECK(count == total / 5);
  }

  SUBCASE("K=1 reduces to a geometric renewal process") {
    double q = 0.3;
    long T = 100000;
    auto oracle = explore::reach_count_oracle(q, 1, T);
    // Long-run rate q/(1+q) per step; hand-derived variance from the
    // geometric cycle: Var(W)= (1-q)/q^2, mu = 1 + 1/q.
    double mu = 1.0 + 1.0 / q;
    double var = static_cast<double>(T) * ((1.0 - q) / (q * q)) / (mu * mu * mu);
    CHECK(oracle.expected ==
          doctest::Approx(static_cast<double>(T) * q / (1.0 + q)).epsilon(1e-3));
    CHECK(oracle.sigma == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
    CHECK(oracle.mean_cycle == doctest::Approx(mu).epsilon(1e-12));
  }

  SUBCASE("count_reaches lands within 3 sigma of the oracle") {
    explore::CountReachConfig cc{2, 2, 3, 0.5, 200000, Strategy::kSeg, 4242};
    long count = explore::count_reaches(cc);
    auto oracle = explore::reach_count_oracle_for(cc);
    CHECK(std::fabs(static_cast<double>(count) - oracle.expected) <= 3.0 * oracle.sigma);

    cc.strategy = Strategy::kEpsGreedy;
    long count_eps = explore::count_reaches(cc);
    auto oracle_eps = explore::reach_count_oracle_for(cc);
    CHECK(std::fabs(static_cast<double>(count_eps) - oracle_eps.expected) <=
          3.0 * oracle_eps.sigma);
    CHECK(count > count_eps);  // the bias ordering, at an NK where both are visible
  }

  SUBCASE("count_reaches is deterministic per seed") {
    explore::CountReachConfig cc{2, 2, 3, 0.5, 50000, Strategy::kSeg, 7};
    CHECK(explore::count_reaches(cc) == explore::count_reaches(cc));
  }
}
