#pragma once

#include <cstdint>

#include "segmix/explore/explore.hpp"

namespace segmix::explore {

// Counting experiment on the coordination game: Q-values are frozen at the
// standard initialization (a_0 at 0, every other action at 0.1, so greedy
// never picks a_0) and never updated; the environment runs for total_steps
// as one uninterrupted episode while entries into s_K are counted.
struct CountReachConfig {
  int n_agents = 2;       // N
  int horizon = 5;        // K
  int n_actions = 3;      // M
  double eps = 0.5;       // fixed, no annealing
  long total_steps = 1000000;
  Strategy strategy = Strategy::kSeg;
  std::uint64_t seed = 0;
};

long count_reaches(const CountReachConfig& cfg);

// Exact analysis of the same experiment. The per-step probability that all
// agents pick a_0 turns the game into a (K+1)-state Markov chain; expected
// visits to s_K come from iterating the transient distribution, and the
// variance from the renewal CLT, Var ~ T * Var(cycle) / E[cycle]^3, with
// cycle moments solved exactly by first-step analysis.
struct ReachOracle {
  double expected = 0.0;
  double sigma = 0.0;
  double joint_a0_prob = 0.0;   // q, per-step probability of advancing
  double mean_cycle = 0.0;      // E[steps between consecutive entries]
};

ReachOracle reach_count_oracle(double joint_a0_prob, int horizon, long total_steps);

// Convenience: derives the per-agent a_0 probability from the frozen
// Q-values via the selection-tree oracle, raises it to the joint power, and
// runs reach_count_oracle.
ReachOracle reach_count_oracle_for(const CountReachConfig& cfg);

}  // namespace segmix::explore
