#include "segmix/explore/reach.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "segmix/env/coord_game.hpp"

namespace segmix::explore {

long count_reaches(const CountReachConfig& cfg) {
  if (cfg.total_steps < 0) throw std::invalid_argument("count_reaches: negative step count");
  env::CoordGameConfig gc;
  gc.n_agents = cfg.n_agents;
  gc.horizon = cfg.horizon;
  gc.n_actions = cfg.n_actions;
  // One uninterrupted episode so the run matches the chain analysis exactly.
  env::CoordinationGame game(gc, 0.99, static_cast<int>(cfg.total_steps) + 1);
  auto rr = game.reset(cfg.seed);

  // Frozen Q-values; identical in every state, so one vector suffices.
  std::vector<double> q(static_cast<std::size_t>(cfg.n_actions), 0.1);
  q[0] = 0.0;
  repr::ActionGroups groups = repr::ActionGroups::coordination_game(cfg.n_actions);

  std::vector<Rng> streams;
  for (int i = 0; i < cfg.n_agents; ++i) streams.push_back(agent_stream(cfg.seed, i));

  long count = 0;
  std::vector<int> joint(static_cast<std::size_t>(cfg.n_agents), 0);
  for (long t = 0; t < cfg.total_steps; ++t) {
    for (int i = 0; i < cfg.n_agents; ++i)
      joint[static_cast<std::size_t>(i)] =
          select_action(cfg.strategy, q, &groups, rr.avail[static_cast<std::size_t>(i)],
                        cfg.eps, streams[static_cast<std::size_t>(i)]);
    game.step(joint);
    if (game.state_index() == cfg.horizon) ++count;
  }
  return count;
}

ReachOracle reach_count_oracle(double joint_a0_prob, int horizon, long total_steps) {
  if (horizon < 1) throw std::invalid_argument("reach_count_oracle: horizon must be >= 1");
  if (joint_a0_prob < 0.0 || joint_a0_prob > 1.0)
    throw std::invalid_argument("reach_count_oracle: probability out of range");
  const double q = joint_a0_prob;
  const int K = horizon;
  ReachOracle out;
  out.joint_a0_prob = q;

  // Exact expected visits: iterate the transient distribution over states
  // 0..K from s_0 and accumulate the mass entering K.
  std::vector<double> d(static_cast<std::size_t>(K + 1), 0.0);
  std::vector<double> next(static_cast<std::size_t>(K + 1), 0.0);
  d[0] = 1.0;
  double expected = 0.0;
  for (long t = 0; t < total_steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int j = 0; j < K; ++j) {
      next[static_cast<std::size_t>(j + 1)] += d[static_cast<std::size_t>(j)] * q;
      next[0] += d[static_cast<std::size_t>(j)] * (1.0 - q);
    }
    next[0] += d[static_cast<std::size_t>(K)];
    expected += next[static_cast<std::size_t>(K)];
    d.swap(next);
  }
  out.expected = expected;

  if (q <= 0.0) {
    out.sigma = 0.0;
    out.mean_cycle = std::numeric_limits<double>::infinity();
    return out;
  }

  // First-step analysis for hitting-time moments. With h_j = E[steps from
  // s_j to first entry of s_K] and m_j the second moment:
  //   h_j = 1 + q h_{j+1} + (1-q) h_0,   h_K = 0
  //   m_j = 1 + 2 (q h_{j+1} + (1-q) h_0) + q m_{j+1} + (1-q) m_0,  m_K = 0
  // Both close over h_0 / m_0 linearly, so write x_j = A_j + B_j x_0 and
  // solve for x_0.
  std::vector<double> A(static_cast<std::size_t>(K + 1), 0.0);
  std::vector<double> B(static_cast<std::size_t>(K + 1), 0.0);
  for (int j = K - 1; j >= 0; --j) {
    A[static_cast<std::size_t>(j)] = 1.0 + q * A[static_cast<std::size_t>(j + 1)];
    B[static_cast<std::size_t>(j)] = q * B[static_cast<std::size_t>(j + 1)] + (1.0 - q);
  }
  double h0 = A[0] / (1.0 - B[0]);
  std::vector<double> h(static_cast<std::size_t>(K + 1), 0.0);
  for (int j = 0; j <= K; ++j)
    h[static_cast<std::size_t>(j)] = A[static_cast<std::size_t>(j)] + B[static_cast<std::size_t>(j)] * h0;

  std::vector<double> C(static_cast<std::size_t>(K + 1), 0.0);
  std::vector<double> D(static_cast<std::size_t>(K + 1), 0.0);
  for (int j = K - 1; j >= 0; --j) {
    double drift = q * h[static_cast<std::size_t>(j + 1)] + (1.0 - q) * h0;
    C[static_cast<std::size_t>(j)] = 1.0 + 2.0 * drift + q * C[static_cast<std::size_t>(j + 1)];
    D[static_cast<std::size_t>(j)] = q * D[static_cast<std::size_t>(j + 1)] + (1.0 - q);
  }
  double m0 = C[0] / (1.0 - D[0]);
  double var_w0 = m0 - h0 * h0;

  // Renewal CLT: one step leaves s_K, then W_0 steps return to it.
  double mu = 1.0 + h0;
  out.mean_cycle = mu;
  double var_count = static_cast<double>(total_steps) * var_w0 / (mu * mu * mu);
  out.sigma = std::sqrt(std::max(0.0, var_count));
  return out;
}

ReachOracle reach_count_oracle_for(const CountReachConfig& cfg) {
  std::vector<double> q(static_cast<std::size_t>(cfg.n_actions), 0.1);
  q[0] = 0.0;
  env::AvailMask all(static_cast<std::size_t>(cfg.n_actions), 1);
  repr::ActionGroups groups = repr::ActionGroups::coordination_game(cfg.n_actions);
  double p_a0 = action_probability(cfg.strategy, q, &groups, all, cfg.eps, 0);
  double joint = std::pow(p_a0, static_cast<double>(cfg.n_agents));
  return reach_count_oracle(joint, cfg.horizon, cfg.total_steps);
}

}  // namespace segmix::explore
