#include "segmix/qmix/mixing.hpp"

#include <cmath>
#include <stdexcept>

#include "segmix/nn/ops.hpp"

namespace segmix::qmix {

void add_mixing_params(nn::ParamSet& ps, const MixConfig& cfg, Rng& rng) {
  auto sd = static_cast<std::size_t>(cfg.state_dim);
  auto mh = static_cast<std::size_t>(cfg.mix_hidden);
  auto na = static_cast<std::size_t>(cfg.n_agents);
  nn::add_dense_params(ps, "mix.hw1", sd, na * mh, rng);
  nn::add_dense_params(ps, "mix.hb1", sd, mh, rng);
  nn::add_dense_params(ps, "mix.hw2", sd, mh, rng);
  nn::add_dense_params(ps, "mix.hv1", sd, mh, rng);
  nn::add_dense_params(ps, "mix.hv2", mh, 1, rng);
}

double mix(const nn::ParamSet& ps, const MixConfig& cfg, std::span<const double> q_selected,
           std::span<const double> state) {
  if (static_cast<int>(q_selected.size()) != cfg.n_agents)
    throw std::invalid_argument("mix: expected exactly n_agents Q-values");
  if (static_cast<int>(state.size()) != cfg.state_dim)
    throw std::invalid_argument("mix: state width mismatch");

  nn::Tensor s(1, static_cast<std::size_t>(cfg.state_dim));
  for (std::size_t i = 0; i < state.size(); ++i) s[i] = state[i];

  nn::Tensor w1 = nn::dense_forward(ps, "mix.hw1", s);  // [1, n*mh]
  nn::Tensor b1 = nn::dense_forward(ps, "mix.hb1", s);  // [1, mh]
  nn::Tensor w2 = nn::dense_forward(ps, "mix.hw2", s);  // [1, mh]
  nn::Tensor v1 = nn::dense_forward(ps, "mix.hv1", s);  // [1, mh]
  for (std::size_t i = 0; i < v1.numel(); ++i) v1[i] = v1[i] > 0.0 ? v1[i] : 0.0;
  nn::Tensor v2 = nn::dense_forward(ps, "mix.hv2", v1);  // [1, 1]

  // Accumulation order mirrors the taped composite exactly, so the traced
  // and untraced paths agree bitwise.
  auto mh = static_cast<std::size_t>(cfg.mix_hidden);
  double dot = 0.0;
  for (std::size_t j = 0; j < mh; ++j) {
    double pre = 0.0;
    for (std::size_t i = 0; i < q_selected.size(); ++i)
      pre += q_selected[i] * std::fabs(w1[i * mh + j]);
    pre += b1[j];
    double h = pre > 0.0 ? pre : std::exp(pre) - 1.0;  // elu
    dot += h * std::fabs(w2[j]);
  }
  return dot + v2[0];
}

MixNetNodes make_mix_net_nodes(nn::Tape& tape, nn::ParamSet& ps) {
  MixNetNodes n;
  n.hw1_w = tape.param(ps, "mix.hw1.w");
  n.hw1_b = tape.param(ps, "mix.hw1.b");
  n.hb1_w = tape.param(ps, "mix.hb1.w");
  n.hb1_b = tape.param(ps, "mix.hb1.b");
  n.hw2_w = tape.param(ps, "mix.hw2.w");
  n.hw2_b = tape.param(ps, "mix.hw2.b");
  n.hv1_w = tape.param(ps, "mix.hv1.w");
  n.hv1_b = tape.param(ps, "mix.hv1.b");
  n.hv2_w = tape.param(ps, "mix.hv2.w");
  n.hv2_b = tape.param(ps, "mix.hv2.b");
  return n;
}

nn::Value mix_node(nn::Tape& tape, const MixNetNodes& net, const MixConfig& cfg, nn::Value q,
                   nn::Value state) {
  auto mh = static_cast<std::size_t>(cfg.mix_hidden);
  nn::Value w1 = tape.abs(tape.add_bias(tape.linear(state, net.hw1_w), net.hw1_b));
  nn::Value b1 = tape.add_bias(tape.linear(state, net.hb1_w), net.hb1_b);
  nn::Value hidden = tape.elu(tape.add(tape.row_bilinear(q, w1, mh), b1));
  nn::Value w2 = tape.abs(tape.add_bias(tape.linear(state, net.hw2_w), net.hw2_b));
  nn::Value dot = tape.row_sum(tape.mul(hidden, w2));
  nn::Value v1 = tape.relu(tape.add_bias(tape.linear(state, net.hv1_w), net.hv1_b));
  nn::Value v2 = tape.add_bias(tape.linear(v1, net.hv2_w), net.hv2_b);
  return tape.add(dot, v2);
}

}  // namespace segmix::qmix
