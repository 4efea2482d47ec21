#pragma once

#include <optional>
#include <span>
#include <vector>

#include "segmix/nn/adam.hpp"
#include "segmix/nn/params.hpp"
#include "segmix/replay/replay.hpp"
#include "segmix/repr/groups.hpp"
#include "segmix/rng.hpp"

namespace segmix::repr {

// Forward model for action representations: a dense encoder maps the one-hot
// action to a d-dimensional vector z, and two predictors consume
// [z | local obs | one-hot actions of the other agents] to predict the next
// local observation and the shared reward.
struct ReprConfig {
  int n_actions = 2;
  int n_agents = 1;
  int obs_dim = 1;
  int repr_dim = 20;          // d
  int predictor_hidden = 128;
  double lambda_reward = 10.0;  // weight of the reward-prediction error
  // The encoder starts near zero so that actions only separate in
  // representation space when the predictors need them to differ.
  double encoder_init_scale = 0.05;

  int predictor_input_dim() const {
    return repr_dim + obs_dim + (n_agents - 1) * n_actions;
  }
};

// Registers "enc", "po1"/"po2" (observation predictor) and "pr1"/"pr2"
// (reward predictor).
void add_repr_params(nn::ParamSet& ps, const ReprConfig& cfg, Rng& rng);

// Deterministic embedding of one action id.
std::vector<double> encode_action(const nn::ParamSet& ps, const ReprConfig& cfg,
                                  int action_id);

// L_e over a batch of transitions: mean over the batch of
//   sum_i ||ohat'_i - o'_i||^2 + lambda * sum_i (rhat - r)^2,
// summed over all agents. Gradients accumulate into ps when accumulate_grads
// is set. Throws on an empty batch.
double repr_loss(std::span<const replay::Transition* const> batch, nn::ParamSet& ps,
                 const ReprConfig& cfg, bool accumulate_grads);

struct EncoderTrainConfig {
  ReprConfig repr;
  double lr = 5e-4;
  std::size_t batch_size = 32;
  long updates = 50000;  // optimizer steps; 0 freezes the random init
  std::uint64_t seed = 0;
};

struct FrozenRepresentations {
  std::vector<std::vector<double>> z;  // [n_actions][d]
  double final_loss = 0.0;
};

// Trains encoder and predictors on uniform transition batches from the
// buffer, then exports the frozen per-action representations.
FrozenRepresentations train_encoder(const replay::EpisodeBuffer& buffer,
                                    const EncoderTrainConfig& cfg);

// Text export of a representation table; schema documented in the README.
void save_representations(const FrozenRepresentations& repr, std::ostream& os);
FrozenRepresentations load_representations(std::istream& is);

// Agreement between two labelings, 1.0 for identical partitions, ~0 for
// random ones. Used to score recovered clusters against ground truth.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace segmix::repr
