#pragma once

#include "segmix/env/env.hpp"

namespace segmix::env {

// Coordination game over states s_0 .. s_K. In s_j with j < K the joint
// action (a_0, ..., a_0) advances to s_{j+1} and every other joint action
// resets to s_0, both with reward 0. Any joint action taken in s_K earns
// reward_on_goal and resets to s_0. Every action is always available.
struct CoordGameConfig {
  int n_agents = 5;           // N
  int horizon = 4;            // K, coordination steps needed to reach s_K
  int n_actions = 3;          // M
  double reward_on_goal = 100.0;

  void validate() const;
};

class CoordinationGame final : public Environment {
 public:
  // Observations are the one-hot of the current state index (length K+1),
  // identical for every agent; the global state vector is the same one-hot.
  CoordinationGame(CoordGameConfig cfg, double discount = 0.99, int max_episode_len = 50);

  const EnvSpec& spec() const override { return spec_; }
  ResetResult reset(std::uint64_t seed) override;
  StepResult step(std::span<const int> joint_action) override;

  int state_index() const { return state_; }
  const CoordGameConfig& config() const { return cfg_; }

 private:
  CoordGameConfig cfg_;
  EnvSpec spec_;
  int state_ = 0;
  int t_ = 0;

  std::vector<Obs> make_obs() const;
  std::vector<AvailMask> make_avail() const;
  std::vector<double> make_state() const;
};

}  // namespace segmix::env
