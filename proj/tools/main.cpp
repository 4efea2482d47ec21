#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "segmix/cfg/run_config.hpp"
#include "segmix/cfg/runners.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string seed;
  std::string out;
  std::string trials;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file (key = value lines)");
  cmd->add_option("--seed", args.seed, "Base seed override");
  cmd->add_option("--out", args.out, "Output directory override");
  cmd->add_option("--trials", args.trials, "Trial count override");
  cmd->add_option("--set", args.sets, "Additional key=value override (repeatable)");
}

std::vector<std::pair<std::string, std::string>> collect_overrides(const CommonArgs& args,
                                                                   bool has_trials) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& kv : args.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw segmix::cfg::ConfigError("--set expects key=value, got: " + kv);
    out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.seed.empty()) out.emplace_back("seed", args.seed);
  if (!args.out.empty()) out.emplace_back("out", args.out);
  if (!args.trials.empty()) {
    if (!has_trials)
      throw segmix::cfg::ConfigError("--trials is not applicable to this experiment");
    out.emplace_back("trials", args.trials);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent RL toolkit: QMIX with semantic epsilon-greedy exploration"};
  app.require_subcommand(1);

  struct Sub {
    segmix::cfg::ExperimentKind kind;
    CLI::App* cmd;
    CommonArgs args;
    bool has_trials;
  };
  std::vector<Sub> subs;
  auto add_sub = [&](segmix::cfg::ExperimentKind kind, const char* help, bool has_trials) {
    CLI::App* cmd = app.add_subcommand(segmix::cfg::kind_name(kind), help);
    subs.push_back({kind, cmd, {}, has_trials});
    add_common(cmd, subs.back().args);
  };
  subs.reserve(6);
  add_sub(segmix::cfg::ExperimentKind::kCountReach,
          "Count goal-state visits under frozen Q-values", false);
  add_sub(segmix::cfg::ExperimentKind::kTrainIql,
          "Train tabular independent Q-learning on the coordination game", true);
  add_sub(segmix::cfg::ExperimentKind::kTrainQmix, "Train the QMIX learner", false);
  add_sub(segmix::cfg::ExperimentKind::kLearnRepr,
          "Learn action representations on the grouped-effects environment", false);
  add_sub(segmix::cfg::ExperimentKind::kCluster,
          "Cluster a representation table into action groups", false);
  add_sub(segmix::cfg::ExperimentKind::kGradCheck,
          "Check analytic gradients against finite differences", false);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const Sub& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      auto overrides = collect_overrides(sub.args, sub.has_trials);
      segmix::cfg::RunConfig cfg =
          segmix::cfg::parse_config(sub.kind, sub.args.config_path, overrides);
      return segmix::cfg::run_experiment(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
