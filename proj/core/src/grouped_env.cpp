#include "segmix/env/grouped_env.hpp"

#include <stdexcept>

namespace segmix::env {

GroupedEffectsEnv::GroupedEffectsEnv(int n_agents, int n_actions, int n_true_groups,
                                     double noise_scale, std::uint64_t construction_seed)
    : noise_scale_(noise_scale) {
  if (n_true_groups < 2) throw std::invalid_argument("GroupedEffectsEnv: need >= 2 groups");
  if (n_actions < n_true_groups)
    throw std::invalid_argument("GroupedEffectsEnv: n_actions must be >= n_true_groups");
  if (n_agents < 1) throw std::invalid_argument("GroupedEffectsEnv: n_agents must be >= 1");
  if (noise_scale < 0.0) throw std::invalid_argument("GroupedEffectsEnv: negative noise scale");

  spec_.n_agents = n_agents;
  spec_.n_actions = n_actions;
  spec_.obs_dim = kObsDim;
  spec_.state_dim = n_agents * kObsDim;
  spec_.max_episode_len = kEpisodeLen;
  spec_.discount = 0.95;
  spec_.validate();

  // Round-robin assignment keeps group sizes as balanced as possible and
  // places action 0 in group 0, the zero-displacement group.
  labels_.resize(static_cast<std::size_t>(n_actions));
  for (int a = 0; a < n_actions; ++a) labels_[static_cast<std::size_t>(a)] = a % n_true_groups;
  always_available_ = {0};

  Rng rng(construction_seed);
  group_displacement_.assign(static_cast<std::size_t>(n_true_groups),
                             std::vector<double>(kObsDim, 0.0));
  for (int g = 1; g < n_true_groups; ++g)
    for (int d = 0; d < kObsDim; ++d)
      group_displacement_[static_cast<std::size_t>(g)][static_cast<std::size_t>(d)] =
          rng.uniform(-1.0, 1.0);
  reward_weights_.resize(kObsDim);
  for (int d = 0; d < kObsDim; ++d) reward_weights_[static_cast<std::size_t>(d)] = rng.uniform(-1.0, 1.0);

  pos_.assign(static_cast<std::size_t>(n_agents), std::vector<double>(kObsDim, 0.0));
}

const std::vector<double>& GroupedEffectsEnv::displacement(int action_id) const {
  if (action_id < 0 || action_id >= spec_.n_actions)
    throw std::out_of_range("GroupedEffectsEnv: action id out of range");
  return group_displacement_[static_cast<std::size_t>(labels_[static_cast<std::size_t>(action_id)])];
}

std::vector<Obs> GroupedEffectsEnv::make_obs() const { return pos_; }

std::vector<AvailMask> GroupedEffectsEnv::make_avail() const {
  AvailMask all(static_cast<std::size_t>(spec_.n_actions), 1);
  return std::vector<AvailMask>(static_cast<std::size_t>(spec_.n_agents), all);
}

std::vector<double> GroupedEffectsEnv::make_state() const {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(spec_.state_dim));
  for (const auto& p : pos_) s.insert(s.end(), p.begin(), p.end());
  return s;
}

ResetResult GroupedEffectsEnv::reset(std::uint64_t seed) {
  episode_rng_ = std::make_unique<Rng>(seed);
  t_ = 0;
  for (auto& p : pos_)
    for (double& x : p) x = episode_rng_->uniform(-0.5, 0.5);
  return {make_obs(), make_avail(), make_state()};
}

StepResult GroupedEffectsEnv::step(std::span<const int> joint_action) {
  if (!episode_rng_) throw std::logic_error("GroupedEffectsEnv: step before reset");
  if (static_cast<int>(joint_action.size()) != spec_.n_agents)
    throw std::invalid_argument("GroupedEffectsEnv: joint action size mismatch");
  double reward = 0.0;
  for (int i = 0; i < spec_.n_agents; ++i) {
    int a = joint_action[static_cast<std::size_t>(i)];
    if (a < 0 || a >= spec_.n_actions)
      throw std::invalid_argument("GroupedEffectsEnv: action id out of range");
    const auto& delta = displacement(a);
    auto& p = pos_[static_cast<std::size_t>(i)];
    for (int d = 0; d < kObsDim; ++d) {
      double noise =
          noise_scale_ > 0.0 ? episode_rng_->uniform(-noise_scale_, noise_scale_) : 0.0;
      p[static_cast<std::size_t>(d)] += delta[static_cast<std::size_t>(d)] + noise;
      reward += reward_weights_[static_cast<std::size_t>(d)] * delta[static_cast<std::size_t>(d)];
    }
  }

  ++t_;
  StepResult res;
  res.reward = reward;
  res.terminal = t_ >= spec_.max_episode_len;
  res.next_obs = make_obs();
  res.avail = make_avail();
  res.state = make_state();
  return res;
}

std::unique_ptr<GroupedEffectsEnv> make_grouped_effects_env(int n_agents, int n_actions,
                                                            int n_true_groups,
                                                            double noise_scale,
                                                            std::uint64_t seed) {
  return std::make_unique<GroupedEffectsEnv>(n_agents, n_actions, n_true_groups, noise_scale,
                                             seed);
}

}  // namespace segmix::env
