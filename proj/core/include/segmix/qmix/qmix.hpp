#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "segmix/env/env.hpp"
#include "segmix/explore/explore.hpp"
#include "segmix/nn/adam.hpp"
#include "segmix/qmix/mixing.hpp"
#include "segmix/qmix/qnet.hpp"
#include "segmix/replay/replay.hpp"

namespace segmix::qmix {

// Online or target network bundle: shared agent Q-network plus mixing
// hypernetwork in one parameter set.
struct QmixNets {
  nn::ParamSet params;
  QNetConfig qcfg;
  MixConfig mcfg;

  static QmixNets build(const QNetConfig& qcfg, const MixConfig& mcfg, Rng& rng);
};

// Hard copy of all online parameters into the target bundle.
void target_sync(const QmixNets& online, QmixNets& target);

struct GreedyMaxResult {
  std::vector<int> joint_action;  // per-agent argmax over available actions
  double q_tot = 0.0;             // mixing of the per-agent maxima
};

// Joint greedy maximization. Monotonicity of the mixing network makes the
// per-agent argmax attain the maximum over the joint available-action space.
// Ties break to the lowest action id.
GreedyMaxResult greedy_max_qtot(const QmixNets& nets,
                                const std::vector<std::vector<double>>& per_agent_q,
                                std::span<const double> state,
                                const std::vector<env::AvailMask>& avail);

struct TdLossResult {
  double loss = 0.0;
  std::size_t effective_steps = 0;
};

// TD loss over an episode batch:
//   mean over unpadded steps of (r + gamma * max_a' Qtot_target(tau',a',s')
//                                  - Qtot(tau,a,s))^2
// Terminal steps drop the bootstrap term. Gradients accumulate into
// online.params only; the target side is evaluated without a tape. Returns
// std::nullopt when the batch holds no unpadded steps.
std::optional<TdLossResult> td_loss(const replay::EpisodeBatch& batch, QmixNets& online,
                                    const QmixNets& target, double gamma);

// Training configuration for the full QMIX learner loop.
struct QmixTrainConfig {
  double gamma = 0.99;
  double lr = 5e-4;
  int hidden = 64;
  int mix_hidden = 32;
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 5000;
  int train_interval_episodes = 1;   // episodes between optimizer steps
  int target_update_interval = 200;  // optimizer steps between hard syncs
  explore::EpsilonSchedule schedule;
  explore::Strategy strategy = explore::Strategy::kSeg;
  long total_env_steps = 300000;
  long eval_interval = 5000;  // environment steps between greedy evaluations
  int eval_horizon = 0;       // 0: one full episode
  int early_stop_consecutive = 0;  // stop after this many consecutive optimal evals; 0 = off
  double early_stop_reward = 100.0;
  std::uint64_t seed = 0;
};

struct QmixTrainResult {
  std::vector<long> eval_steps;
  std::vector<double> eval_rewards;
  std::vector<long> loss_steps;
  std::vector<double> losses;
  double final_eval = 0.0;
  long env_steps_run = 0;
  long optimizer_steps = 0;
};

// Runs the learner. Evaluation rollouts use eval_env so the training
// environment's episode state is never disturbed. groups may be null for
// plain epsilon-greedy.
QmixTrainResult train_qmix(env::Environment& environment, env::Environment& eval_env,
                           const QmixTrainConfig& cfg, const repr::ActionGroups* groups,
                           QmixNets* out_nets = nullptr);

// Greedy rollout with the given nets (epsilon 0), returning summed reward
// over the horizon (or the episode if horizon is 0).
double evaluate_qmix(env::Environment& environment, const QmixNets& nets, int horizon,
                     std::uint64_t reset_seed);

}  // namespace segmix::qmix
