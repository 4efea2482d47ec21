#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace segmix::env {

using Obs = std::vector<double>;
using AvailMask = std::vector<std::uint8_t>;

// Static description of a cooperative multi-agent environment.
struct EnvSpec {
  int n_agents = 1;
  int n_actions = 2;
  int obs_dim = 1;
  int state_dim = 1;
  int max_episode_len = 1;
  double discount = 0.99;

  void validate() const;
};

struct ResetResult {
  std::vector<Obs> obs;          // one per agent
  std::vector<AvailMask> avail;  // one per agent
  std::vector<double> state;
};

struct StepResult {
  std::vector<Obs> next_obs;
  std::vector<AvailMask> avail;
  std::vector<double> state;
  double reward = 0.0;  // shared by all agents
  bool terminal = false;
};

// Environment contract. A single instance is single-threaded; independent
// instances share no mutable state.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual const EnvSpec& spec() const = 0;
  // Deterministic given the seed.
  virtual ResetResult reset(std::uint64_t seed) = 0;
  // Rejects unavailable or out-of-range action ids with std::invalid_argument.
  virtual StepResult step(std::span<const int> joint_action) = 0;
};

}  // namespace segmix::env
