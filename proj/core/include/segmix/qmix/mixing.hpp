#pragma once

#include <span>

#include "segmix/nn/params.hpp"
#include "segmix/nn/tape.hpp"
#include "segmix/rng.hpp"

namespace segmix::qmix {

// State-conditioned monotonic mixing network. A hypernetwork maps the state
// to the mixing weights; absolute value makes the two weight layers
// non-negative so Q_tot is monotone in every per-agent input, while the
// biases stay unconstrained:
//
//   Q_tot = w2(s)^T elu(W1(s)^T q + b1(s)) + b2(s)
//
// W1 and w2 come from single dense hypernetwork layers; b2 from a
// dense -> ReLU -> dense sub-network.
struct MixConfig {
  int n_agents = 1;
  int state_dim = 1;
  int mix_hidden = 32;
};

// Registers parameters under "mix.hw1", "mix.hb1", "mix.hw2", "mix.hv1",
// "mix.hv2".
void add_mixing_params(nn::ParamSet& ps, const MixConfig& cfg, Rng& rng);

// Untraced evaluation for one sample.
double mix(const nn::ParamSet& ps, const MixConfig& cfg, std::span<const double> q_selected,
           std::span<const double> state);

// Traced evaluation: q [B, n_agents], state [B, state_dim] -> [B, 1].
struct MixNetNodes {
  nn::Value hw1_w, hw1_b, hb1_w, hb1_b, hw2_w, hw2_b, hv1_w, hv1_b, hv2_w, hv2_b;
};
MixNetNodes make_mix_net_nodes(nn::Tape& tape, nn::ParamSet& ps);
nn::Value mix_node(nn::Tape& tape, const MixNetNodes& net, const MixConfig& cfg, nn::Value q,
                   nn::Value state);

}  // namespace segmix::qmix
