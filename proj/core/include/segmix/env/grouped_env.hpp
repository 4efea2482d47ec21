#pragma once

#include <memory>

#include "segmix/env/env.hpp"
#include "segmix/rng.hpp"

namespace segmix::env {

// Synthetic environment where actions fall into latent groups with identical
// effects: all actions in a group apply the same fixed displacement to the
// acting agent's observation vector, plus zero-mean uniform noise of scale
// noise_scale. The reward is a fixed linear function of the joint true
// displacement. Group 0 is the "stay" group with zero displacement; action 0
// belongs to it and is the designated always-available no-op.
//
// Ground-truth labels are exposed for evaluating representation learning
// only; nothing in training may read them.
class GroupedEffectsEnv final : public Environment {
 public:
  GroupedEffectsEnv(int n_agents, int n_actions, int n_true_groups, double noise_scale,
                    std::uint64_t construction_seed);

  const EnvSpec& spec() const override { return spec_; }
  ResetResult reset(std::uint64_t seed) override;
  StepResult step(std::span<const int> joint_action) override;

  const std::vector<int>& true_group_labels() const { return labels_; }
  const std::vector<int>& always_available_ids() const { return always_available_; }
  // Displacement applied by an action (before noise).
  const std::vector<double>& displacement(int action_id) const;

  static constexpr int kObsDim = 4;
  static constexpr int kEpisodeLen = 25;

 private:
  EnvSpec spec_;
  std::vector<int> labels_;                            // action -> group
  std::vector<std::vector<double>> group_displacement_;  // group -> obs delta
  std::vector<double> reward_weights_;                 // dot with summed displacement
  std::vector<int> always_available_;
  double noise_scale_;

  std::vector<std::vector<double>> pos_;  // per-agent observation vectors
  std::unique_ptr<Rng> episode_rng_;
  int t_ = 0;

  std::vector<Obs> make_obs() const;
  std::vector<AvailMask> make_avail() const;
  std::vector<double> make_state() const;
};

std::unique_ptr<GroupedEffectsEnv> make_grouped_effects_env(int n_agents, int n_actions,
                                                            int n_true_groups,
                                                            double noise_scale,
                                                            std::uint64_t seed);

}  // namespace segmix::env
