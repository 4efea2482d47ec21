#include "segmix/qmix/qmix.hpp"

#include <cmath>
#include <stdexcept>

namespace segmix::qmix {

QmixNets QmixNets::build(const QNetConfig& qcfg, const MixConfig& mcfg, Rng& rng) {
  QmixNets nets;
  nets.qcfg = qcfg;
  nets.mcfg = mcfg;
  add_agent_qnet_params(nets.params, qcfg, rng);
  add_mixing_params(nets.params, mcfg, rng);
  return nets;
}

void target_sync(const QmixNets& online, QmixNets& target) {
  target.params.copy_values_from(online.params);
}

GreedyMaxResult greedy_max_qtot(const QmixNets& nets,
                                const std::vector<std::vector<double>>& per_agent_q,
                                std::span<const double> state,
                                const std::vector<env::AvailMask>& avail) {
  if (per_agent_q.size() != avail.size() ||
      static_cast<int>(per_agent_q.size()) != nets.mcfg.n_agents)
    throw std::invalid_argument("greedy_max_qtot: per-agent inputs must match n_agents");
  GreedyMaxResult out;
  std::vector<double> maxima;
  for (std::size_t i = 0; i < per_agent_q.size(); ++i) {
    int a = explore::masked_argmax(per_agent_q[i], avail[i]);
    out.joint_action.push_back(a);
    maxima.push_back(per_agent_q[i][static_cast<std::size_t>(a)]);
  }
  out.q_tot = mix(nets.params, nets.mcfg, maxima, state);
  return out;
}

namespace {

// Builds the [B*n_agents, input_dim] row block for one time index of the
// batch. Time index T_b (one past the last transition) reads next_obs of the
// final transition; rows past an episode's end are zero-filled.
void fill_inputs(nn::Tensor& x, const replay::EpisodeBatch& batch, const QNetConfig& qcfg,
                 std::size_t u) {
  x.fill(0.0);
  const auto n = static_cast<std::size_t>(qcfg.n_agents);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const replay::Episode& ep = *batch.episodes[b];
    for (std::size_t i = 0; i < n; ++i) {
      std::span<double> row(&x.at(b * n + i, 0), static_cast<std::size_t>(qcfg.input_dim()));
      if (u < ep.length()) {
        const auto& tr = ep.steps[u];
        write_agent_input(row, qcfg, tr.obs[i], tr.last_actions[i], static_cast<int>(i));
      } else if (u == ep.length()) {
        const auto& tr = ep.steps.back();
        write_agent_input(row, qcfg, tr.next_obs[i], tr.actions[i], static_cast<int>(i));
      }
    }
  }
}

}  // namespace

std::optional<TdLossResult> td_loss(const replay::EpisodeBatch& batch, QmixNets& online,
                                    const QmixNets& target, double gamma) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("td_loss: gamma must lie in [0, 1)");
  const std::size_t B = batch.size();
  const std::size_t T = batch.max_len;
  if (B == 0 || T == 0) return std::nullopt;
  const std::size_t total_real = batch.real_step_count();
  if (total_real == 0) return std::nullopt;

  const QNetConfig& qcfg = online.qcfg;
  const MixConfig& mcfg = online.mcfg;
  const auto n = static_cast<std::size_t>(qcfg.n_agents);
  const std::size_t rows = B * n;

  // Target pass, no tape: bootstrap targets y[t][b].
  std::vector<std::vector<double>> y(T, std::vector<double>(B, 0.0));
  {
    nn::Tensor th(rows, static_cast<std::size_t>(qcfg.hidden));
    nn::Tensor tin(rows, static_cast<std::size_t>(qcfg.input_dim()));
    std::vector<double> maxima(n, 0.0);
    for (std::size_t u = 0; u <= T; ++u) {
      fill_inputs(tin, batch, qcfg, u);
      nn::Tensor q = agent_q_step(target.params, qcfg, tin, th);
      if (u == 0) continue;
      std::size_t t = u - 1;
      for (std::size_t b = 0; b < B; ++b) {
        const replay::Episode& ep = *batch.episodes[b];
        if (t >= ep.length()) continue;
        const replay::Transition& tr = ep.steps[t];
        if (tr.terminal) {
          y[t][b] = tr.reward;
          continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
          std::span<const double> qrow(&q.at(b * n + i, 0),
                                       static_cast<std::size_t>(qcfg.n_actions));
          int a = explore::masked_argmax(qrow, tr.next_avail[i]);
          maxima[i] = qrow[static_cast<std::size_t>(a)];
        }
        double max_qtot = mix(target.params, mcfg, maxima, tr.next_state);
        y[t][b] = tr.reward + gamma * max_qtot;
      }
    }
  }

  // Online pass on the tape.
  nn::Tape tape;
  AgentNetNodes anodes = make_agent_net_nodes(tape, online.params);
  MixNetNodes mnodes = make_mix_net_nodes(tape, online.params);
  nn::Value h = tape.constant(nn::Tensor(rows, static_cast<std::size_t>(qcfg.hidden)));
  nn::Value total = tape.constant(nn::Tensor(1, 1));
  nn::Tensor xin(rows, static_cast<std::size_t>(qcfg.input_dim()));
  for (std::size_t t = 0; t < T; ++t) {
    fill_inputs(xin, batch, qcfg, t);
    auto [q, h_next] = agent_q_step_node(tape, anodes, tape.constant(xin), h);
    h = h_next;

    std::vector<int> chosen(rows, 0);
    nn::Tensor st(B, static_cast<std::size_t>(mcfg.state_dim));
    nn::Tensor yt(B, 1);
    nn::Tensor mask(B, 1);
    for (std::size_t b = 0; b < B; ++b) {
      const replay::Episode& ep = *batch.episodes[b];
      if (t >= ep.length()) continue;
      const replay::Transition& tr = ep.steps[t];
      for (std::size_t i = 0; i < n; ++i) chosen[b * n + i] = tr.actions[i];
      for (std::size_t d = 0; d < tr.state.size(); ++d) st.at(b, d) = tr.state[d];
      yt.at(b, 0) = y[t][b];
      mask.at(b, 0) = 1.0;
    }
    nn::Value q_sel = tape.reshape(tape.gather_cols(q, std::move(chosen)), B, n);
    nn::Value qtot = mix_node(tape, mnodes, mcfg, q_sel, tape.constant(std::move(st)));
    nn::Value err = tape.sub(qtot, tape.constant(std::move(yt)));
    nn::Value masked = tape.mul(tape.mul(err, err), tape.constant(std::move(mask)));
    total = tape.add(total, tape.sum_all(masked));
  }
  nn::Value loss = tape.scale(total, 1.0 / static_cast<double>(total_real));
  tape.backward(loss);
  return TdLossResult{tape.scalar(loss), total_real};
}

double evaluate_qmix(env::Environment& environment, const QmixNets& nets, int horizon,
                     std::uint64_t reset_seed) {
  const env::EnvSpec& spec = environment.spec();
  auto rr = environment.reset(reset_seed);
  const QNetConfig& qcfg = nets.qcfg;
  std::vector<nn::Tensor> hidden(static_cast<std::size_t>(spec.n_agents),
                                 nn::Tensor(1, static_cast<std::size_t>(qcfg.hidden)));
  std::vector<int> last(static_cast<std::size_t>(spec.n_agents), -1);
  nn::Tensor input(1, static_cast<std::size_t>(qcfg.input_dim()));
  std::vector<int> joint(static_cast<std::size_t>(spec.n_agents), 0);
  long steps = horizon > 0 ? horizon : spec.max_episode_len;
  double total = 0.0;
  auto obs = rr.obs;
  auto avail = rr.avail;
  for (long t = 0; t < steps; ++t) {
    for (int i = 0; i < spec.n_agents; ++i) {
      auto iu = static_cast<std::size_t>(i);
      std::span<double> row(&input.at(0, 0), static_cast<std::size_t>(qcfg.input_dim()));
      write_agent_input(row, qcfg, obs[iu], last[iu], i);
      nn::Tensor q = agent_q_step(nets.params, qcfg, input, hidden[iu]);
      joint[iu] = explore::masked_argmax(
          std::span<const double>(&q.at(0, 0), static_cast<std::size_t>(qcfg.n_actions)),
          avail[iu]);
    }
    auto res = environment.step(joint);
    total += res.reward;
    obs = res.next_obs;
    avail = res.avail;
    for (int i = 0; i < spec.n_agents; ++i) last[static_cast<std::size_t>(i)] = joint[static_cast<std::size_t>(i)];
    if (res.terminal) break;
  }
  return total;
}

QmixTrainResult train_qmix(env::Environment& environment, env::Environment& eval_env,
                           const QmixTrainConfig& cfg, const repr::ActionGroups* groups,
                           QmixNets* out_nets) {
  const env::EnvSpec& spec = environment.spec();
  if (cfg.strategy == explore::Strategy::kSeg && groups == nullptr)
    throw std::invalid_argument("train_qmix: SEG strategy requires action groups");

  QNetConfig qcfg{spec.obs_dim, spec.n_actions, spec.n_agents, cfg.hidden};
  MixConfig mcfg{spec.n_agents, spec.state_dim, cfg.mix_hidden};
  Rng init_rng(cfg.seed * 1000003ULL + 999983ULL);
  QmixNets online = QmixNets::build(qcfg, mcfg, init_rng);
  QmixNets target = QmixNets::build(qcfg, mcfg, init_rng);
  target_sync(online, target);
  nn::AdamState adam(online.params, {.lr = cfg.lr});

  replay::EpisodeBuffer buffer(spec, cfg.buffer_capacity);
  Rng sample_rng(cfg.seed * 1000003ULL + 424243ULL);
  std::vector<Rng> streams;
  for (int i = 0; i < spec.n_agents; ++i) streams.push_back(agent_stream(cfg.seed, i));

  QmixTrainResult result;
  const auto n = static_cast<std::size_t>(spec.n_agents);
  long env_steps = 0;
  long episodes_done = 0;
  long opt_steps = 0;
  int consecutive_good = 0;
  std::uint64_t episode_counter = 0;

  nn::Tensor input(1, static_cast<std::size_t>(qcfg.input_dim()));
  std::vector<int> joint(n, 0);
  bool stop = false;

  while (env_steps < cfg.total_env_steps && !stop) {
    std::uint64_t ep_seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (episode_counter + 1));
    ++episode_counter;
    auto rr = environment.reset(ep_seed);
    auto obs = rr.obs;
    auto avail = rr.avail;
    auto state = rr.state;
    std::vector<nn::Tensor> hidden(n, nn::Tensor(1, static_cast<std::size_t>(qcfg.hidden)));
    std::vector<int> last(n, -1);
    replay::Episode episode;
    bool terminal = false;

    while (!terminal && env_steps < cfg.total_env_steps && !stop) {
      double eps = cfg.schedule.at(env_steps);
      for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row(&input.at(0, 0), static_cast<std::size_t>(qcfg.input_dim()));
        write_agent_input(row, qcfg, obs[i], last[i], static_cast<int>(i));
        nn::Tensor q = agent_q_step(online.params, qcfg, input, hidden[i]);
        std::span<const double> qrow(&q.at(0, 0), static_cast<std::size_t>(qcfg.n_actions));
        joint[i] = explore::select_action(cfg.strategy, qrow, groups, avail[i], eps,
                                          streams[i]);
      }
      auto res = environment.step(joint);

      replay::Transition tr;
      tr.obs = obs;
      tr.next_obs = res.next_obs;
      tr.last_actions = last;
      tr.actions = joint;
      tr.avail = avail;
      tr.next_avail = res.avail;
      tr.state = state;
      tr.next_state = res.state;
      tr.reward = res.reward;
      tr.terminal = res.terminal;
      episode.steps.push_back(std::move(tr));

      obs = res.next_obs;
      avail = res.avail;
      state = res.state;
      for (std::size_t i = 0; i < n; ++i) last[i] = joint[i];
      terminal = res.terminal;
      ++env_steps;

      if (cfg.eval_interval > 0 && env_steps % cfg.eval_interval == 0) {
        double r = evaluate_qmix(eval_env, online, cfg.eval_horizon, 0);
        result.eval_steps.push_back(env_steps);
        result.eval_rewards.push_back(r);
        if (cfg.early_stop_consecutive > 0) {
          consecutive_good = r >= cfg.early_stop_reward ? consecutive_good + 1 : 0;
          if (consecutive_good >= cfg.early_stop_consecutive) stop = true;
        }
      }
    }

    if (!episode.steps.empty()) {
      buffer.push_episode(std::move(episode));
      ++episodes_done;
    }

    if (episodes_done % std::max(1, cfg.train_interval_episodes) == 0) {
      auto batch = buffer.sample_uniform(cfg.batch_size, sample_rng);
      if (batch) {
        auto lr = td_loss(*batch, online, target, cfg.gamma);
        if (lr) {
          adam.step(online.params);
          ++opt_steps;
          result.loss_steps.push_back(env_steps);
          result.losses.push_back(lr->loss);
          if (opt_steps % cfg.target_update_interval == 0) target_sync(online, target);
        }
      }
    }
  }

  double final_eval = evaluate_qmix(eval_env, online, cfg.eval_horizon, 0);
  if (result.eval_steps.empty() || result.eval_steps.back() != env_steps) {
    result.eval_steps.push_back(env_steps);
    result.eval_rewards.push_back(final_eval);
  }
  result.final_eval = result.eval_rewards.back();
  result.env_steps_run = env_steps;
  result.optimizer_steps = opt_steps;
  if (out_nets != nullptr) *out_nets = std::move(online);
  return result;
}

}  // namespace segmix::qmix
