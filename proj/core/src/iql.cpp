#include "segmix/iql/iql.hpp"

#include <cmath>
#include <stdexcept>

#include "segmix/env/coord_game.hpp"

namespace segmix::iql {

double QTable::max_at(int s) const {
  double best = at(s, 0);
  for (int a = 1; a < n_actions; ++a) best = std::max(best, at(s, a));
  return best;
}

int QTable::argmax_at(int s) const {
  int best = 0;
  for (int a = 1; a < n_actions; ++a)
    if (at(s, a) > at(s, best)) best = a;
  return best;
}

std::vector<QTable> init_q(int n_agents, int horizon, int n_actions) {
  std::vector<QTable> tables;
  for (int i = 0; i < n_agents; ++i) {
    QTable t;
    t.n_states = horizon + 1;
    t.n_actions = n_actions;
    t.q.assign(static_cast<std::size_t>(t.n_states * t.n_actions), 0.1);
    for (int s = 0; s < t.n_states; ++s) t.at(s, 0) = 0.0;
    tables.push_back(std::move(t));
  }
  return tables;
}

void iql_update(QTable& table, int s, int a, double r, int s_next, bool terminal,
                double alpha, double gamma) {
  if (s < 0 || s >= table.n_states || a < 0 || a >= table.n_actions || s_next < 0 ||
      s_next >= table.n_states)
    throw std::out_of_range("iql_update: index out of range");
  double boot = terminal ? 0.0 : gamma * table.max_at(s_next);
  table.at(s, a) += alpha * (r + boot - table.at(s, a));
}

double evaluate_greedy(const std::vector<QTable>& tables, int n_agents, int horizon,
                       int n_actions, double reward_on_goal) {
  env::CoordGameConfig gc;
  gc.n_agents = n_agents;
  gc.horizon = horizon;
  gc.n_actions = n_actions;
  gc.reward_on_goal = reward_on_goal;
  env::CoordinationGame game(gc, 0.99, horizon + 2);
  game.reset(0);
  double total = 0.0;
  std::vector<int> joint(static_cast<std::size_t>(n_agents), 0);
  for (int t = 0; t < horizon + 1; ++t) {
    int s = game.state_index();
    for (int i = 0; i < n_agents; ++i)
      joint[static_cast<std::size_t>(i)] = tables[static_cast<std::size_t>(i)].argmax_at(s);
    total += game.step(joint).reward;
  }
  return total;
}

TrialResult run_single_trial(const IQLRunConfig& cfg, std::uint64_t seed) {
  env::CoordGameConfig gc;
  gc.n_agents = cfg.n_agents;
  gc.horizon = cfg.horizon;
  gc.n_actions = cfg.n_actions;
  env::CoordinationGame game(gc, cfg.gamma, cfg.episode_len);
  game.reset(seed);

  auto tables = init_q(cfg.n_agents, cfg.horizon, cfg.n_actions);
  repr::ActionGroups groups = repr::ActionGroups::coordination_game(cfg.n_actions);
  env::AvailMask all(static_cast<std::size_t>(cfg.n_actions), 1);

  std::vector<Rng> streams;
  for (int i = 0; i < cfg.n_agents; ++i) streams.push_back(agent_stream(seed, i));

  TrialResult out;
  out.seed = seed;
  std::vector<int> joint(static_cast<std::size_t>(cfg.n_agents), 0);
  std::vector<double> qrow(static_cast<std::size_t>(cfg.n_actions), 0.0);
  for (long t = 0; t < cfg.total_steps; ++t) {
    double eps = cfg.schedule.at(t);
    int s = game.state_index();
    for (int i = 0; i < cfg.n_agents; ++i) {
      const QTable& tab = tables[static_cast<std::size_t>(i)];
      for (int a = 0; a < cfg.n_actions; ++a)
        qrow[static_cast<std::size_t>(a)] = tab.at(s, a);
      joint[static_cast<std::size_t>(i)] = explore::select_action(
          cfg.strategy, qrow, &groups, all, eps, streams[static_cast<std::size_t>(i)]);
    }
    auto res = game.step(joint);
    int s_next = game.state_index();
    if (s_next == cfg.horizon) ++out.goal_entries;
    for (int i = 0; i < cfg.n_agents; ++i)
      iql_update(tables[static_cast<std::size_t>(i)], s, joint[static_cast<std::size_t>(i)],
                 res.reward, s_next, res.terminal, cfg.alpha, cfg.gamma);
    if (res.terminal) game.reset(seed);
    if ((t + 1) % cfg.eval_interval == 0) {
      out.eval_steps.push_back(t + 1);
      out.eval_rewards.push_back(
          evaluate_greedy(tables, cfg.n_agents, cfg.horizon, cfg.n_actions));
    }
  }
  out.final_reward = out.eval_rewards.empty() ? 0.0 : out.eval_rewards.back();
  out.final_tables = std::move(tables);
  return out;
}

TrialsResult run_trials(const IQLRunConfig& cfg) {
  if (cfg.seeds.empty()) throw std::invalid_argument("run_trials: no seeds configured");
  TrialsResult out;
  for (std::uint64_t seed : cfg.seeds) out.trials.push_back(run_single_trial(cfg, seed));

  const auto& steps = out.trials.front().eval_steps;
  out.eval_steps = steps;
  for (std::size_t c = 0; c < steps.size(); ++c) {
    double sum = 0.0;
    for (const auto& tr : out.trials) sum += tr.eval_rewards[c];
    double mean = sum / static_cast<double>(out.trials.size());
    double var = 0.0;
    for (const auto& tr : out.trials) {
      double d = tr.eval_rewards[c] - mean;
      var += d * d;
    }
    var /= static_cast<double>(out.trials.size());
    out.mean_rewards.push_back(mean);
    out.std_rewards.push_back(std::sqrt(var));
  }
  double fsum = 0.0;
  for (const auto& tr : out.trials) fsum += tr.final_reward;
  out.mean_final_reward = fsum / static_cast<double>(out.trials.size());
  return out;
}

}  // namespace segmix::iql
