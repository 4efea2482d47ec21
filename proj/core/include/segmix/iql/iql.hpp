#pragma once

#include <cstdint>
#include <vector>

#include "segmix/explore/explore.hpp"

namespace segmix::iql {

// Per-agent tabular Q-values for the coordination game, (K+1) x M each.
struct QTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> q;  // row-major [state][action]

  double& at(int s, int a) { return q[static_cast<std::size_t>(s * n_actions + a)]; }
  double at(int s, int a) const { return q[static_cast<std::size_t>(s * n_actions + a)]; }
  double max_at(int s) const;
  int argmax_at(int s) const;  // ties to lowest action id
};

struct IQLRunConfig {
  int n_agents = 5;    // N
  int horizon = 4;     // K
  int n_actions = 3;   // M
  double alpha = 0.1;
  double gamma = 0.6;
  explore::EpsilonSchedule schedule;    // 1.0 -> 0.05 over 30000 by default
  long total_steps = 350000;
  long eval_interval = 1000;
  int episode_len = 50;
  explore::Strategy strategy = explore::Strategy::kSeg;
  std::vector<std::uint64_t> seeds;     // one per trial
};

// Q_i(s, a_0) = 0 and Q_i(s, a_j) = 0.1 for j != 0, so that greedy play
// avoids a_0 at the start and the goal can only be found by exploration.
std::vector<QTable> init_q(int n_agents, int horizon, int n_actions);

// Standard independent Q-learning update.
// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') * [not terminal] - Q(s,a))
void iql_update(QTable& table, int s, int a, double r, int s_next, bool terminal,
                double alpha, double gamma);

// All agents act greedily for horizon+1 steps from s_0 on a fresh game;
// returns the summed reward (100 exactly when the optimal chain executes).
double evaluate_greedy(const std::vector<QTable>& tables, int n_agents, int horizon,
                       int n_actions, double reward_on_goal = 100.0);

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<long> eval_steps;
  std::vector<double> eval_rewards;
  std::vector<QTable> final_tables;
  long goal_entries = 0;  // entries into s_K during training
  double final_reward = 0.0;
};

struct TrialsResult {
  std::vector<TrialResult> trials;
  // Aggregate curve across trials (aligned checkpoints).
  std::vector<long> eval_steps;
  std::vector<double> mean_rewards;
  std::vector<double> std_rewards;
  double mean_final_reward = 0.0;
};

TrialResult run_single_trial(const IQLRunConfig& cfg, std::uint64_t seed);
TrialsResult run_trials(const IQLRunConfig& cfg);

}  // namespace segmix::iql
