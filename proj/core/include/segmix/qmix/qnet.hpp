#pragma once

#include <span>
#include <string>

#include "segmix/nn/ops.hpp"
#include "segmix/nn/params.hpp"
#include "segmix/nn/tape.hpp"

namespace segmix::qmix {

// Shared recurrent per-agent Q-network: dense -> GRU -> dense. Input rows
// are [observation | one-hot last action | one-hot agent id]; the one-hot
// agent id disambiguates agents under parameter sharing. The last action is
// the zero vector on the first step of an episode (encoded as id -1).
struct QNetConfig {
  int obs_dim = 1;
  int n_actions = 2;
  int n_agents = 1;
  int hidden = 64;

  int input_dim() const { return obs_dim + n_actions + n_agents; }
};

// Registers parameters under "agent.in", "agent.gru", "agent.out".
void add_agent_qnet_params(nn::ParamSet& ps, const QNetConfig& cfg, Rng& rng);

// Fills one input row. row must have length cfg.input_dim().
void write_agent_input(std::span<double> row, const QNetConfig& cfg,
                       std::span<const double> obs, int last_action, int agent_id);

// Untraced step: input [B, input_dim], hidden [B, hidden] (updated in
// place). Returns the full Q-vector for every action, [B, n_actions].
// Unavailable actions are not masked here; masking happens at selection and
// maximization time.
nn::Tensor agent_q_step(const nn::ParamSet& ps, const QNetConfig& cfg,
                        const nn::Tensor& input, nn::Tensor& hidden);

// Traced layers with parameter nodes created once per tape.
struct AgentNetNodes {
  nn::Value in_w, in_b;
  nn::Value gru_wr, gru_ur, gru_br, gru_wz, gru_uz, gru_bz, gru_wn, gru_un, gru_bn;
  nn::Value out_w, out_b;
};

AgentNetNodes make_agent_net_nodes(nn::Tape& tape, nn::ParamSet& ps);

// Returns (q_all [B, n_actions], new hidden [B, hidden]).
std::pair<nn::Value, nn::Value> agent_q_step_node(nn::Tape& tape, const AgentNetNodes& net,
                                                  nn::Value input, nn::Value hidden);

}  // namespace segmix::qmix
