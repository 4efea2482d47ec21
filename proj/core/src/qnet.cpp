#include "segmix/qmix/qnet.hpp"

#include <stdexcept>

namespace segmix::qmix {

void add_agent_qnet_params(nn::ParamSet& ps, const QNetConfig& cfg, Rng& rng) {
  nn::add_dense_params(ps, "agent.in", static_cast<std::size_t>(cfg.input_dim()),
                       static_cast<std::size_t>(cfg.hidden), rng);
  nn::add_gru_params(ps, "agent.gru", static_cast<std::size_t>(cfg.hidden),
                     static_cast<std::size_t>(cfg.hidden), rng);
  nn::add_dense_params(ps, "agent.out", static_cast<std::size_t>(cfg.hidden),
                       static_cast<std::size_t>(cfg.n_actions), rng);
}

void write_agent_input(std::span<double> row, const QNetConfig& cfg,
                       std::span<const double> obs, int last_action, int agent_id) {
  if (static_cast<int>(row.size()) != cfg.input_dim())
    throw std::invalid_argument("write_agent_input: row width mismatch");
  if (static_cast<int>(obs.size()) != cfg.obs_dim)
    throw std::invalid_argument("write_agent_input: obs width mismatch");
  if (agent_id < 0 || agent_id >= cfg.n_agents)
    throw std::invalid_argument("write_agent_input: agent id out of range");
  if (last_action < -1 || last_action >= cfg.n_actions)
    throw std::invalid_argument("write_agent_input: last action out of range");
  std::size_t k = 0;
  for (double v : obs) row[k++] = v;
  for (int a = 0; a < cfg.n_actions; ++a) row[k++] = a == last_action ? 1.0 : 0.0;
  for (int i = 0; i < cfg.n_agents; ++i) row[k++] = i == agent_id ? 1.0 : 0.0;
}

nn::Tensor agent_q_step(const nn::ParamSet& ps, const QNetConfig& cfg,
                        const nn::Tensor& input, nn::Tensor& hidden) {
  if (static_cast<int>(input.cols()) != cfg.input_dim())
    throw std::invalid_argument("agent_q_step: input width mismatch");
  nn::Tensor x = nn::dense_forward(ps, "agent.in", input);
  hidden = nn::gru_cell_forward(ps, "agent.gru", x, hidden);
  return nn::dense_forward(ps, "agent.out", hidden);
}

AgentNetNodes make_agent_net_nodes(nn::Tape& tape, nn::ParamSet& ps) {
  AgentNetNodes n;
  n.in_w = tape.param(ps, "agent.in.w");
  n.in_b = tape.param(ps, "agent.in.b");
  n.gru_wr = tape.param(ps, "agent.gru.wr");
  n.gru_ur = tape.param(ps, "agent.gru.ur");
  n.gru_br = tape.param(ps, "agent.gru.br");
  n.gru_wz = tape.param(ps, "agent.gru.wz");
  n.gru_uz = tape.param(ps, "agent.gru.uz");
  n.gru_bz = tape.param(ps, "agent.gru.bz");
  n.gru_wn = tape.param(ps, "agent.gru.wn");
  n.gru_un = tape.param(ps, "agent.gru.un");
  n.gru_bn = tape.param(ps, "agent.gru.bn");
  n.out_w = tape.param(ps, "agent.out.w");
  n.out_b = tape.param(ps, "agent.out.b");
  return n;
}

std::pair<nn::Value, nn::Value> agent_q_step_node(nn::Tape& tape, const AgentNetNodes& net,
                                                  nn::Value input, nn::Value hidden) {
  nn::Value x = tape.add_bias(tape.linear(input, net.in_w), net.in_b);

  nn::Value r = tape.sigmoid(tape.add_bias(
      tape.add(tape.linear(x, net.gru_wr), tape.linear(hidden, net.gru_ur)), net.gru_br));
  nn::Value z = tape.sigmoid(tape.add_bias(
      tape.add(tape.linear(x, net.gru_wz), tape.linear(hidden, net.gru_uz)), net.gru_bz));
  nn::Value n = tape.tanh(tape.add_bias(
      tape.add(tape.linear(x, net.gru_wn), tape.mul(r, tape.linear(hidden, net.gru_un))),
      net.gru_bn));
  nn::Value one_minus_z = tape.add_scalar(tape.scale(z, -1.0), 1.0);
  nn::Value h_next = tape.add(tape.mul(one_minus_z, n), tape.mul(z, hidden));

  nn::Value q = tape.add_bias(tape.linear(h_next, net.out_w), net.out_b);
  return {q, h_next};
}

}  // namespace segmix::qmix
