#include "segmix/cfg/runners.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "segmix/checks.hpp"
#include "segmix/env/coord_game.hpp"
#include "segmix/env/grouped_env.hpp"
#include "segmix/explore/reach.hpp"
#include "segmix/iql/iql.hpp"
#include "segmix/nn/checkpoint.hpp"
#include "segmix/qmix/qmix.hpp"
#include "segmix/repr/action_repr.hpp"
#include "segmix/repr/kmeans.hpp"

namespace segmix::cfg {

namespace {

std::ofstream open_csv(const std::string& out_dir, const std::string& name,
                       const std::string& manifest, const std::string& header) {
  std::filesystem::create_directories(out_dir);
  std::ofstream os(out_dir + "/" + name);
  if (!os) throw std::runtime_error("cannot write " + out_dir + "/" + name);
  os << "# manifest: " << manifest << "\n";
  os << header << "\n";
  os.precision(17);
  return os;
}

explore::Strategy strategy_from(const std::string& name) {
  if (name == "seg") return explore::Strategy::kSeg;
  if (name == "eps" || name == "eps-greedy") return explore::Strategy::kEpsGreedy;
  throw ConfigError("invalid strategy (expected 'seg' or 'eps'): " + name);
}

int run_count_reach(const RunConfig& cfg) {
  std::string out_dir = cfg.get_string("out");
  std::string manifest = write_manifest(cfg, out_dir);
  auto csv = open_csv(out_dir, "counts.csv", manifest,
                      "strategy,n,k,m,eps,steps,seed,count,oracle_expected,oracle_sigma,"
                      "window_probability");
  int n = cfg.get_int("n_agents");
  int m = cfg.get_int("m_actions");
  double eps = cfg.get_double("eps");
  long steps = cfg.get_long("total_steps");
  std::uint64_t seed = cfg.get_seed("seed");
  for (const std::string& sname : cfg.get_string_list("strategies")) {
    explore::Strategy strat = strategy_from(sname);
    for (long nk : cfg.get_long_list("nk_values")) {
      if (nk % n != 0)
        throw ConfigError("nk value " + std::to_string(nk) + " is not divisible by n_agents");
      int k = static_cast<int>(nk / n);
      explore::CountReachConfig cc{n, k, m, eps, steps, strat, seed};
      long count = explore::count_reaches(cc);
      auto oracle = explore::reach_count_oracle_for(cc);
      // Closed-form probability of one full window: all n agents staying in
      // the singleton goal group for k consecutive steps.
      explore::ReachQuery rq{strat, n, k, m, 1, 2, eps};
      csv << sname << "," << n << "," << k << "," << m << "," << eps << "," << steps << ","
          << seed << "," << count << "," << oracle.expected << "," << oracle.sigma << ","
          << explore::reach_probability(rq) << "\n";
    }
  }
  return 0;
}

int run_train_iql(const RunConfig& cfg) {
  std::string out_dir = cfg.get_string("out");
  std::string manifest = write_manifest(cfg, out_dir);

  iql::IQLRunConfig rc;
  rc.n_agents = cfg.get_int("n_agents");
  rc.horizon = cfg.get_int("k_horizon");
  rc.n_actions = cfg.get_int("m_actions");
  rc.alpha = cfg.get_double("alpha");
  rc.gamma = cfg.get_double("gamma");
  rc.schedule = {cfg.get_double("eps_start"), cfg.get_double("eps_end"),
                 cfg.get_long("eps_anneal")};
  rc.total_steps = cfg.get_long("total_steps");
  rc.eval_interval = cfg.get_long("eval_interval");
  rc.episode_len = cfg.get_int("episode_len");
  rc.strategy = strategy_from(cfg.get_string("strategy"));
  auto seeds = cfg.get_long_list("seeds");
  if (seeds.empty()) {
    std::uint64_t base = cfg.get_seed("seed");
    for (int i = 0; i < cfg.get_int("trials"); ++i) rc.seeds.push_back(base + static_cast<std::uint64_t>(i));
  } else {
    for (long s : seeds) rc.seeds.push_back(static_cast<std::uint64_t>(s));
  }

  auto result = iql::run_trials(rc);

  auto curves = open_csv(out_dir, "curves.csv", manifest, "trial,step,eval_reward");
  for (std::size_t tr = 0; tr < result.trials.size(); ++tr)
    for (std::size_t c = 0; c < result.trials[tr].eval_steps.size(); ++c)
      curves << tr << "," << result.trials[tr].eval_steps[c] << ","
             << result.trials[tr].eval_rewards[c] << "\n";

  auto agg = open_csv(out_dir, "aggregate.csv", manifest, "step,mean,std");
  for (std::size_t c = 0; c < result.eval_steps.size(); ++c)
    agg << result.eval_steps[c] << "," << result.mean_rewards[c] << ","
        << result.std_rewards[c] << "\n";

  std::cout << "train-iql: mean final reward " << result.mean_final_reward << " over "
            << result.trials.size() << " trials\n";
  return 0;
}

int run_train_qmix(const RunConfig& cfg) {
  std::string out_dir = cfg.get_string("out");
  std::string manifest = write_manifest(cfg, out_dir);

  std::string env_kind = cfg.get_string("env");
  std::unique_ptr<env::Environment> train_env;
  std::unique_ptr<env::Environment> eval_env;
  int eval_horizon = cfg.get_int("eval_horizon");
  if (env_kind == "coord") {
    env::CoordGameConfig gc;
    gc.n_agents = cfg.get_int("n_agents");
    gc.horizon = cfg.get_int("k_horizon");
    gc.n_actions = cfg.get_int("m_actions");
    double gamma = cfg.get_double("gamma");
    int ep_len = cfg.get_int("episode_len");
    train_env = std::make_unique<env::CoordinationGame>(gc, gamma, ep_len);
    eval_env = std::make_unique<env::CoordinationGame>(gc, gamma, ep_len);
    if (eval_horizon == 0) eval_horizon = gc.horizon + 1;
  } else if (env_kind == "grouped") {
    train_env = env::make_grouped_effects_env(
        cfg.get_int("n_agents"), cfg.get_int("m_actions"), cfg.get_int("n_true_groups"),
        cfg.get_double("noise_scale"), cfg.get_seed("seed"));
    eval_env = env::make_grouped_effects_env(
        cfg.get_int("n_agents"), cfg.get_int("m_actions"), cfg.get_int("n_true_groups"),
        cfg.get_double("noise_scale"), cfg.get_seed("seed"));
  } else {
    throw ConfigError("invalid env (expected 'coord' or 'grouped'): " + env_kind);
  }

  qmix::QmixTrainConfig tc;
  tc.gamma = cfg.get_double("gamma");
  tc.lr = cfg.get_double("lr");
  tc.hidden = cfg.get_int("hidden");
  tc.mix_hidden = cfg.get_int("mix_hidden");
  tc.batch_size = static_cast<std::size_t>(cfg.get_long("batch_size"));
  tc.buffer_capacity = static_cast<std::size_t>(cfg.get_long("buffer_capacity"));
  tc.train_interval_episodes = cfg.get_int("train_interval_episodes");
  tc.target_update_interval = cfg.get_int("target_update_interval");
  tc.schedule = {cfg.get_double("eps_start"), cfg.get_double("eps_end"),
                 cfg.get_long("eps_anneal")};
  tc.strategy = strategy_from(cfg.get_string("strategy"));
  tc.total_env_steps = cfg.get_long("total_env_steps");
  tc.eval_interval = cfg.get_long("eval_interval");
  tc.eval_horizon = eval_horizon;
  tc.early_stop_consecutive = cfg.get_int("early_stop_consecutive");
  tc.seed = cfg.get_seed("seed");

  repr::ActionGroups groups;
  const repr::ActionGroups* groups_ptr = nullptr;
  std::string groups_mode = cfg.get_string("groups");
  if (tc.strategy == explore::Strategy::kSeg) {
    if (groups_mode == "analytic") {
      groups = repr::ActionGroups::coordination_game(cfg.get_int("m_actions"));
    } else {
      std::ifstream is(groups_mode);
      if (!is) throw ConfigError("groups file not found: " + groups_mode);
      groups = repr::ActionGroups::load(is);
    }
    groups_ptr = &groups;
  }

  qmix::QmixNets nets;
  auto result = qmix::train_qmix(*train_env, *eval_env, tc, groups_ptr, &nets);

  auto metrics = open_csv(out_dir, "metrics.csv", manifest, "step,loss,eval_reward");
  std::size_t li = 0, ei = 0;
  while (li < result.loss_steps.size() || ei < result.eval_steps.size()) {
    bool take_loss =
        ei >= result.eval_steps.size() ||
        (li < result.loss_steps.size() && result.loss_steps[li] <= result.eval_steps[ei]);
    if (take_loss) {
      metrics << result.loss_steps[li] << "," << result.losses[li] << ",\n";
      ++li;
    } else {
      metrics << result.eval_steps[ei] << ",," << result.eval_rewards[ei] << "\n";
      ++ei;
    }
  }
  nn::save_checkpoint(nets.params, out_dir + "/qmix_final.ckpt");

  std::cout << "train-qmix: final eval " << result.final_eval << " after "
            << result.env_steps_run << " env steps (" << result.optimizer_steps
            << " optimizer steps)\n";
  return 0;
}

int run_learn_repr(const RunConfig& cfg) {
  std::string out_dir = cfg.get_string("out");
  std::string manifest = write_manifest(cfg, out_dir);

  int n_agents = cfg.get_int("n_agents");
  int n_actions = cfg.get_int("n_actions");
  int n_true_groups = cfg.get_int("n_true_groups");
  std::uint64_t seed = cfg.get_seed("seed");
  auto environment = env::make_grouped_effects_env(n_agents, n_actions, n_true_groups,
                                                   cfg.get_double("noise_scale"), seed);
  const env::EnvSpec& spec = environment->spec();

  repr::ReprConfig rc;
  rc.n_actions = n_actions;
  rc.n_agents = n_agents;
  rc.obs_dim = spec.obs_dim;
  rc.repr_dim = cfg.get_int("repr_dim");
  rc.lambda_reward = cfg.get_double("lambda_reward");
  rc.predictor_hidden = cfg.get_int("predictor_hidden");

  // Collect uniform-random experience, then fit the forward model with one
  // optimizer update per collected environment step.
  long budget = cfg.get_long("encoder_steps");
  replay::EpisodeBuffer buffer(spec, 5000);
  Rng policy_rng(seed * 1000003ULL + 31337ULL);
  long env_steps = 0;
  std::uint64_t episode = 0;
  while (env_steps < budget) {
    auto rr = environment->reset(seed ^ (0x9e3779b97f4a7c15ULL * (episode + 1)));
    ++episode;
    auto obs = rr.obs;
    auto avail = rr.avail;
    auto state = rr.state;
    std::vector<int> last(static_cast<std::size_t>(n_agents), -1);
    replay::Episode ep;
    bool terminal = false;
    while (!terminal && env_steps < budget) {
      std::vector<int> joint(static_cast<std::size_t>(n_agents));
      for (int i = 0; i < n_agents; ++i)
        joint[static_cast<std::size_t>(i)] = policy_rng.uniform_int(n_actions);
      auto res = environment->step(joint);
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
      ep.steps.push_back(std::move(tr));
      obs = res.next_obs;
      avail = res.avail;
      state = res.state;
      last = joint;
      terminal = res.terminal;
      ++env_steps;
    }
    if (!ep.steps.empty()) buffer.push_episode(std::move(ep));
  }

  if (cfg.get_bool("dump_episodes")) {
    std::ofstream os(out_dir + "/episodes.jsonl");
    buffer.dump_jsonl(os);
  }

  repr::EncoderTrainConfig ec;
  ec.repr = rc;
  ec.lr = cfg.get_double("lr");
  ec.batch_size = static_cast<std::size_t>(cfg.get_long("batch_size"));
  ec.updates = budget;
  ec.seed = seed;
  auto frozen = repr::train_encoder(buffer, ec);

  {
    std::ofstream os(out_dir + "/representations.txt");
    repr::save_representations(frozen, os);
  }

  int k = cfg.get_int("k_clusters");
  if (k == 0) k = n_true_groups;
  auto km = repr::kmeans(frozen.z, k, seed);
  auto groups = repr::build_groups(km.assignment, environment->always_available_ids());
  {
    std::ofstream os(out_dir + "/groups.txt");
    groups.save(os);
  }

  double ari = repr::adjusted_rand_index(environment->true_group_labels(), km.assignment);
  auto summary = open_csv(out_dir, "summary.csv", manifest,
                          "n_actions,n_true_groups,k,final_loss,ari");
  summary << n_actions << "," << n_true_groups << "," << k << "," << frozen.final_loss << ","
          << ari << "\n";
  std::cout << "learn-repr: adjusted Rand index " << ari << " (final loss "
            << frozen.final_loss << ")\n";
  return 0;
}

int run_cluster(const RunConfig& cfg) {
  std::string out_dir = cfg.get_string("out");
  std::string manifest = write_manifest(cfg, out_dir);
  std::string repr_path = cfg.get_string("repr_file");
  if (repr_path.empty()) throw ConfigError("cluster: repr_file must be set");
  std::ifstream is(repr_path);
  if (!is) throw ConfigError("cluster: cannot open repr_file: " + repr_path);
  auto frozen = repr::load_representations(is);

  auto km = repr::kmeans(frozen.z, cfg.get_int("k_clusters"), cfg.get_seed("seed"));
  std::vector<int> always;
  for (long a : cfg.get_long_list("always_available")) always.push_back(static_cast<int>(a));
  auto groups = repr::build_groups(km.assignment, always);
  std::ofstream os(out_dir + "/groups.txt");
  groups.save(os);

  auto summary = open_csv(out_dir, "summary.csv", manifest, "n_actions,k,inertia,iterations");
  summary << frozen.z.size() << "," << cfg.get_int("k_clusters") << "," << km.inertia << ","
          << km.iterations << "\n";
  std::cout << "cluster: " << cfg.get_int("k_clusters") << " clusters, inertia " << km.inertia
            << "\n";
  return 0;
}

int run_grad_check(const RunConfig& cfg) {
  std::string out_dir = cfg.get_string("out");
  std::string manifest = write_manifest(cfg, out_dir);
  int instances = cfg.get_int("instances");
  double tol = cfg.get_double("tolerance");
  auto reports = checks::run_all_grad_checks(instances, cfg.get_seed("seed"));
  auto csv = open_csv(out_dir, "report.csv", manifest, "suite,instances,max_rel_error,pass");
  bool all_ok = true;
  for (const auto& r : reports) {
    bool ok = r.max_rel_error <= tol;
    all_ok = all_ok && ok;
    csv << r.name << "," << r.instances << "," << r.max_rel_error << ","
        << (ok ? "1" : "0") << "\n";
    std::cout << "grad-check " << r.name << ": max rel error " << r.max_rel_error
              << (ok ? " (ok)" : " (FAIL)") << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int run_experiment(const RunConfig& cfg) {
  switch (cfg.kind()) {
    case ExperimentKind::kCountReach: return run_count_reach(cfg);
    case ExperimentKind::kTrainIql: return run_train_iql(cfg);
    case ExperimentKind::kTrainQmix: return run_train_qmix(cfg);
    case ExperimentKind::kLearnRepr: return run_learn_repr(cfg);
    case ExperimentKind::kCluster: return run_cluster(cfg);
    case ExperimentKind::kGradCheck: return run_grad_check(cfg);
  }
  return 2;
}

}  // namespace segmix::cfg
