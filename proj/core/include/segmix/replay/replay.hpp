#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "segmix/env/env.hpp"
#include "segmix/rng.hpp"

namespace segmix::replay {

// One joint transition. last_actions holds the action each agent took on the
// previous step, or -1 on the first step of an episode.
struct Transition {
  std::vector<env::Obs> obs;        // [n_agents][obs_dim]
  std::vector<env::Obs> next_obs;   // [n_agents][obs_dim]
  std::vector<int> last_actions;    // [n_agents]
  std::vector<int> actions;         // [n_agents]
  std::vector<env::AvailMask> avail;       // masks at obs
  std::vector<env::AvailMask> next_avail;  // masks at next_obs
  std::vector<double> state;
  std::vector<double> next_state;
  double reward = 0.0;
  bool terminal = false;
};

struct Episode {
  std::vector<Transition> steps;
  std::size_t length() const { return steps.size(); }
};

// Sampled batch. Episodes of different lengths are aligned to max_len; the
// padding mask marks appended steps, which must contribute nothing to any
// loss.
struct EpisodeBatch {
  std::vector<std::shared_ptr<const Episode>> episodes;
  std::size_t max_len = 0;

  std::size_t size() const { return episodes.size(); }
  // True when step t of batch entry b is a real (non-padded) step.
  bool real(std::size_t b, std::size_t t) const { return t < episodes[b]->length(); }
  std::size_t real_step_count() const;
};

// Episode-granular ring buffer with uniform sampling (with replacement).
class EpisodeBuffer {
 public:
  EpisodeBuffer(env::EnvSpec spec, std::size_t capacity_episodes = 5000);

  // Validates that the episode is non-empty and dimensioned per the owning
  // EnvSpec; evicts the oldest episode when over capacity.
  void push_episode(Episode episode);

  // Returns std::nullopt while fewer than batch_size episodes are stored.
  std::optional<EpisodeBatch> sample_uniform(std::size_t batch_size, Rng& rng) const;

  // Uniform with replacement over all stored transitions; std::nullopt while
  // the buffer is empty.
  std::optional<std::vector<const Transition*>> sample_transitions(std::size_t count,
                                                                   Rng& rng) const;

  std::size_t size() const { return episodes_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t total_transitions() const { return total_transitions_; }
  const env::EnvSpec& spec() const { return spec_; }
  const Episode& episode(std::size_t i) const { return *episodes_[i]; }

  // Debug dump, one JSON object per line per episode. Schema documented in
  // the repository README.
  void dump_jsonl(std::ostream& os) const;

 private:
  env::EnvSpec spec_;
  std::size_t capacity_;
  std::deque<std::shared_ptr<const Episode>> episodes_;
  std::size_t total_transitions_ = 0;

  void validate_episode(const Episode& e) const;
};

}  // namespace segmix::replay
