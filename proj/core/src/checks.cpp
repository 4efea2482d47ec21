#include "segmix/checks.hpp"

#include <algorithm>
#include <cmath>

#include "segmix/nn/finite_diff.hpp"
#include "segmix/nn/ops.hpp"
#include "segmix/nn/tape.hpp"
#include "segmix/qmix/qmix.hpp"
#include "segmix/repr/action_repr.hpp"

namespace segmix::checks {

namespace {

nn::Tensor random_tensor(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  nn::Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

GradCheckReport check_dense_gru(int instances, std::uint64_t seed) {
  GradCheckReport rep{"dense-gru", 0.0, instances};
  for (int inst = 0; inst < instances; ++inst) {
    Rng rng(seed * 7919ULL + static_cast<std::uint64_t>(inst));
    std::size_t in = 2 + static_cast<std::size_t>(rng.uniform_int(4));      // 2..5
    std::size_t hiddenw = 2 + static_cast<std::size_t>(rng.uniform_int(5)); // 2..6
    std::size_t out = 1 + static_cast<std::size_t>(rng.uniform_int(3));     // 1..3
    std::size_t batch = 1 + static_cast<std::size_t>(rng.uniform_int(3));   // 1..3

    nn::ParamSet ps;
    nn::add_dense_params(ps, "fc1", in, hiddenw, rng);
    nn::add_gru_params(ps, "gru", hiddenw, hiddenw, rng);
    nn::add_dense_params(ps, "fc2", hiddenw, out, rng);

    nn::Tensor x = random_tensor(batch, in, rng);
    nn::Tensor h0 = random_tensor(batch, hiddenw, rng, 0.5);
    nn::Tensor target = random_tensor(batch, out, rng);

    auto loss_fn = [&](nn::ParamSet& p) {
      nn::Tape tape;
      nn::Value xv = tape.constant(x);
      nn::Value hv = tape.constant(h0);
      nn::Value a = nn::dense_node(tape, p, "fc1", xv);
      nn::Value h1 = nn::gru_cell_node(tape, p, "gru", a, hv);
      nn::Value y = nn::dense_node(tape, p, "fc2", h1);
      nn::Value err = tape.sub(y, tape.constant(target));
      return tape.scalar(tape.sum_all(tape.mul(err, err)));
    };
    auto backward_fn = [&](nn::ParamSet& p) {
      nn::Tape tape;
      nn::Value xv = tape.constant(x);
      nn::Value hv = tape.constant(h0);
      nn::Value a = nn::dense_node(tape, p, "fc1", xv);
      nn::Value h1 = nn::gru_cell_node(tape, p, "gru", a, hv);
      nn::Value y = nn::dense_node(tape, p, "fc2", h1);
      nn::Value err = tape.sub(y, tape.constant(target));
      tape.backward(tape.sum_all(tape.mul(err, err)));
    };
    rep.max_rel_error =
        std::max(rep.max_rel_error, nn::max_grad_rel_error(loss_fn, backward_fn, ps));
  }
  return rep;
}

namespace {

replay::EpisodeBatch random_episode_batch(const env::EnvSpec& spec, std::size_t n_episodes,
                                          std::size_t len, Rng& rng) {
  replay::EpisodeBatch batch;
  for (std::size_t e = 0; e < n_episodes; ++e) {
    replay::Episode ep;
    auto n = static_cast<std::size_t>(spec.n_agents);
    std::vector<int> last(n, -1);
    for (std::size_t t = 0; t < len; ++t) {
      replay::Transition tr;
      for (std::size_t i = 0; i < n; ++i) {
        tr.obs.push_back(random_tensor(1, static_cast<std::size_t>(spec.obs_dim), rng).data());
        tr.next_obs.push_back(
            random_tensor(1, static_cast<std::size_t>(spec.obs_dim), rng).data());
        tr.avail.emplace_back(static_cast<std::size_t>(spec.n_actions), 1);
        tr.next_avail.emplace_back(static_cast<std::size_t>(spec.n_actions), 1);
        tr.actions.push_back(rng.uniform_int(spec.n_actions));
      }
      tr.last_actions = last;
      last = tr.actions;
      tr.state = random_tensor(1, static_cast<std::size_t>(spec.state_dim), rng).data();
      tr.next_state = random_tensor(1, static_cast<std::size_t>(spec.state_dim), rng).data();
      tr.reward = rng.uniform(-1.0, 1.0);
      tr.terminal = t + 1 == len && rng.unif01() < 0.5;
      ep.steps.push_back(std::move(tr));
    }
    batch.episodes.push_back(std::make_shared<const replay::Episode>(std::move(ep)));
    batch.max_len = std::max(batch.max_len, len);
  }
  return batch;
}

}  // namespace

GradCheckReport check_td_loss(int instances, std::uint64_t seed) {
  GradCheckReport rep{"qmix-td-loss", 0.0, instances};
  for (int inst = 0; inst < instances; ++inst) {
    Rng rng(seed * 104729ULL + static_cast<std::uint64_t>(inst));
    env::EnvSpec spec;
    spec.n_agents = 2;
    spec.n_actions = 3;
    spec.obs_dim = 2 + rng.uniform_int(2);
    spec.state_dim = 2 + rng.uniform_int(2);
    spec.max_episode_len = 2;
    spec.discount = 0.9;

    qmix::QNetConfig qcfg{spec.obs_dim, spec.n_actions, spec.n_agents,
                          2 + rng.uniform_int(4)};
    qmix::MixConfig mcfg{spec.n_agents, spec.state_dim, 2 + rng.uniform_int(3)};
    qmix::QmixNets online = qmix::QmixNets::build(qcfg, mcfg, rng);
    qmix::QmixNets target = qmix::QmixNets::build(qcfg, mcfg, rng);

    replay::EpisodeBatch batch = random_episode_batch(spec, 2, 2, rng);

    auto loss_fn = [&](nn::ParamSet& p) {
      qmix::QmixNets probe;
      probe.qcfg = online.qcfg;
      probe.mcfg = online.mcfg;
      probe.params = p;
      auto r = qmix::td_loss(batch, probe, target, spec.discount);
      return r->loss;
    };
    auto backward_fn = [&](nn::ParamSet& p) {
      qmix::QmixNets probe;
      probe.qcfg = online.qcfg;
      probe.mcfg = online.mcfg;
      probe.params = std::move(p);
      qmix::td_loss(batch, probe, target, spec.discount);
      p = std::move(probe.params);
    };
    rep.max_rel_error = std::max(
        rep.max_rel_error, nn::max_grad_rel_error(loss_fn, backward_fn, online.params));
  }
  return rep;
}

GradCheckReport check_repr_loss(int instances, std::uint64_t seed) {
  GradCheckReport rep{"repr-loss", 0.0, instances};
  for (int inst = 0; inst < instances; ++inst) {
    Rng rng(seed * 15485863ULL + static_cast<std::uint64_t>(inst));
    repr::ReprConfig cfg;
    cfg.n_agents = 2;
    cfg.n_actions = 3;
    cfg.obs_dim = 2 + rng.uniform_int(2);
    cfg.repr_dim = 2 + rng.uniform_int(3);
    cfg.predictor_hidden = 2 + rng.uniform_int(4);
    cfg.encoder_init_scale = 0.5;

    nn::ParamSet ps;
    repr::add_repr_params(ps, cfg, rng);

    std::vector<replay::Transition> storage;
    for (int s = 0; s < 3; ++s) {
      replay::Transition tr;
      for (int i = 0; i < cfg.n_agents; ++i) {
        tr.obs.push_back(random_tensor(1, static_cast<std::size_t>(cfg.obs_dim), rng).data());
        tr.next_obs.push_back(
            random_tensor(1, static_cast<std::size_t>(cfg.obs_dim), rng).data());
        tr.actions.push_back(rng.uniform_int(cfg.n_actions));
        tr.last_actions.push_back(-1);
        tr.avail.emplace_back(static_cast<std::size_t>(cfg.n_actions), 1);
        tr.next_avail.emplace_back(static_cast<std::size_t>(cfg.n_actions), 1);
      }
      tr.reward = rng.uniform(-1.0, 1.0);
      storage.push_back(std::move(tr));
    }
    std::vector<const replay::Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);

    auto loss_fn = [&](nn::ParamSet& p) { return repr::repr_loss(batch, p, cfg, false); };
    auto backward_fn = [&](nn::ParamSet& p) { repr::repr_loss(batch, p, cfg, true); };
    rep.max_rel_error =
        std::max(rep.max_rel_error, nn::max_grad_rel_error(loss_fn, backward_fn, ps));
  }
  return rep;
}

GradCheckReport check_mixing(int instances, std::uint64_t seed) {
  GradCheckReport rep{"mixing-net", 0.0, instances};
  for (int inst = 0; inst < instances; ++inst) {
    Rng rng(seed * 32452843ULL + static_cast<std::uint64_t>(inst));
    qmix::MixConfig mcfg{2 + rng.uniform_int(2), 2 + rng.uniform_int(3),
                         2 + rng.uniform_int(3)};
    nn::ParamSet ps;
    qmix::add_mixing_params(ps, mcfg, rng);
    std::size_t B = 2;
    nn::Tensor q = random_tensor(B, static_cast<std::size_t>(mcfg.n_agents), rng);
    nn::Tensor st = random_tensor(B, static_cast<std::size_t>(mcfg.state_dim), rng);

    auto loss_fn = [&](nn::ParamSet& p) {
      nn::Tape tape;
      auto nodes = qmix::make_mix_net_nodes(tape, p);
      nn::Value qtot = qmix::mix_node(tape, nodes, mcfg, tape.constant(q), tape.constant(st));
      return tape.scalar(tape.sum_all(tape.mul(qtot, qtot)));
    };
    auto backward_fn = [&](nn::ParamSet& p) {
      nn::Tape tape;
      auto nodes = qmix::make_mix_net_nodes(tape, p);
      nn::Value qtot = qmix::mix_node(tape, nodes, mcfg, tape.constant(q), tape.constant(st));
      tape.backward(tape.sum_all(tape.mul(qtot, qtot)));
    };
    rep.max_rel_error =
        std::max(rep.max_rel_error, nn::max_grad_rel_error(loss_fn, backward_fn, ps));
  }
  return rep;
}

std::vector<GradCheckReport> run_all_grad_checks(int instances, std::uint64_t seed) {
  return {check_dense_gru(instances, seed), check_mixing(instances, seed),
          check_td_loss(instances, seed), check_repr_loss(instances, seed)};
}

}  // namespace segmix::checks
