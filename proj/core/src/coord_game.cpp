#include "segmix/env/coord_game.hpp"

#include <stdexcept>

namespace segmix::env {

void EnvSpec::validate() const {
  if (n_agents < 1) throw std::invalid_argument("EnvSpec: n_agents must be >= 1");
  if (n_actions < 2) throw std::invalid_argument("EnvSpec: n_actions must be >= 2");
  if (!(discount >= 0.0 && discount < 1.0))
    throw std::invalid_argument("EnvSpec: discount must lie in [0, 1)");
  if (max_episode_len < 1) throw std::invalid_argument("EnvSpec: max_episode_len must be >= 1");
}

void CoordGameConfig::validate() const {
  if (n_agents < 1) throw std::invalid_argument("CoordGameConfig: N must be >= 1");
  if (horizon < 1) throw std::invalid_argument("CoordGameConfig: K must be >= 1");
  if (n_actions < 2) throw std::invalid_argument("CoordGameConfig: M must be >= 2");
}

CoordinationGame::CoordinationGame(CoordGameConfig cfg, double discount, int max_episode_len)
    : cfg_(cfg) {
  cfg_.validate();
  spec_.n_agents = cfg_.n_agents;
  spec_.n_actions = cfg_.n_actions;
  spec_.obs_dim = cfg_.horizon + 1;
  spec_.state_dim = cfg_.horizon + 1;
  spec_.max_episode_len = max_episode_len;
  spec_.discount = discount;
  spec_.validate();
}

std::vector<Obs> CoordinationGame::make_obs() const {
  Obs one_hot(static_cast<std::size_t>(cfg_.horizon + 1), 0.0);
  one_hot[static_cast<std::size_t>(state_)] = 1.0;
  return std::vector<Obs>(static_cast<std::size_t>(cfg_.n_agents), one_hot);
}

std::vector<AvailMask> CoordinationGame::make_avail() const {
  AvailMask all(static_cast<std::size_t>(cfg_.n_actions), 1);
  return std::vector<AvailMask>(static_cast<std::size_t>(cfg_.n_agents), all);
}

std::vector<double> CoordinationGame::make_state() const {
  std::vector<double> s(static_cast<std::size_t>(cfg_.horizon + 1), 0.0);
  s[static_cast<std::size_t>(state_)] = 1.0;
  return s;
}

ResetResult CoordinationGame::reset(std::uint64_t /*seed*/) {
  state_ = 0;
  t_ = 0;
  return {make_obs(), make_avail(), make_state()};
}

StepResult CoordinationGame::step(std::span<const int> joint_action) {
  if (static_cast<int>(joint_action.size()) != cfg_.n_agents)
    throw std::invalid_argument("CoordinationGame: joint action size mismatch");
  bool all_a0 = true;
  for (int a : joint_action) {
    if (a < 0 || a >= cfg_.n_actions)
      throw std::invalid_argument("CoordinationGame: action id out of range");
    all_a0 = all_a0 && a == 0;
  }

  StepResult res;
  if (state_ == cfg_.horizon) {
    res.reward = cfg_.reward_on_goal;
    state_ = 0;
  } else if (all_a0) {
    res.reward = 0.0;
    state_ += 1;
  } else {
    res.reward = 0.0;
    state_ = 0;
  }

  ++t_;
  res.terminal = t_ >= spec_.max_episode_len;
  res.next_obs = make_obs();
  res.avail = make_avail();
  res.state = make_state();
  return res;
}

}  // namespace segmix::env
