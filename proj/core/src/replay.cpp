#include "segmix/replay/replay.hpp"

#include <json.hpp>
#include <stdexcept>

namespace segmix::replay {

std::size_t EpisodeBatch::real_step_count() const {
  std::size_t n = 0;
  for (const auto& e : episodes) n += e->length();
  return n;
}

EpisodeBuffer::EpisodeBuffer(env::EnvSpec spec, std::size_t capacity_episodes)
    : spec_(spec), capacity_(capacity_episodes) {
  if (capacity_ == 0) throw std::invalid_argument("EpisodeBuffer: capacity must be positive");
}

void EpisodeBuffer::validate_episode(const Episode& e) const {
  if (e.steps.empty()) throw std::invalid_argument("EpisodeBuffer: empty episode");
  auto n = static_cast<std::size_t>(spec_.n_agents);
  for (const Transition& t : e.steps) {
    if (t.obs.size() != n || t.next_obs.size() != n || t.actions.size() != n ||
        t.last_actions.size() != n || t.avail.size() != n || t.next_avail.size() != n)
      throw std::invalid_argument("EpisodeBuffer: per-agent field count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (t.obs[i].size() != static_cast<std::size_t>(spec_.obs_dim) ||
          t.next_obs[i].size() != static_cast<std::size_t>(spec_.obs_dim))
        throw std::invalid_argument("EpisodeBuffer: observation width mismatch");
      if (t.avail[i].size() != static_cast<std::size_t>(spec_.n_actions) ||
          t.next_avail[i].size() != static_cast<std::size_t>(spec_.n_actions))
        throw std::invalid_argument("EpisodeBuffer: avail mask width mismatch");
      if (t.actions[i] < 0 || t.actions[i] >= spec_.n_actions)
        throw std::invalid_argument("EpisodeBuffer: action id out of range");
    }
    if (t.state.size() != static_cast<std::size_t>(spec_.state_dim) ||
        t.next_state.size() != static_cast<std::size_t>(spec_.state_dim))
      throw std::invalid_argument("EpisodeBuffer: state width mismatch");
  }
}

void EpisodeBuffer::push_episode(Episode episode) {
  validate_episode(episode);
  total_transitions_ += episode.length();
  episodes_.push_back(std::make_shared<const Episode>(std::move(episode)));
  while (episodes_.size() > capacity_) {
    total_transitions_ -= episodes_.front()->length();
    episodes_.pop_front();
  }
}

std::optional<EpisodeBatch> EpisodeBuffer::sample_uniform(std::size_t batch_size,
                                                          Rng& rng) const {
  if (episodes_.size() < batch_size) return std::nullopt;
  EpisodeBatch batch;
  batch.episodes.reserve(batch_size);
  for (std::size_t k = 0; k < batch_size; ++k) {
    auto idx = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(episodes_.size())));
    batch.episodes.push_back(episodes_[idx]);
    batch.max_len = std::max(batch.max_len, episodes_[idx]->length());
  }
  return batch;
}

std::optional<std::vector<const Transition*>> EpisodeBuffer::sample_transitions(
    std::size_t count, Rng& rng) const {
  if (total_transitions_ == 0) return std::nullopt;
  std::vector<const Transition*> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Uniform over all stored transitions: pick a flat index, then locate it.
    auto flat = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(total_transitions_)));
    for (const auto& ep : episodes_) {
      if (flat < ep->length()) {
        out.push_back(&ep->steps[flat]);
        break;
      }
      flat -= ep->length();
    }
  }
  return out;
}

void EpisodeBuffer::dump_jsonl(std::ostream& os) const {
  for (const auto& ep : episodes_) {
    nlohmann::json j;
    j["length"] = ep->length();
    auto& steps = j["steps"] = nlohmann::json::array();
    for (const Transition& t : ep->steps) {
      nlohmann::json s;
      s["obs"] = t.obs;
      s["actions"] = t.actions;
      s["last_actions"] = t.last_actions;
      s["reward"] = t.reward;
      s["terminal"] = t.terminal;
      s["state"] = t.state;
      steps.push_back(std::move(s));
    }
    os << j.dump() << "\n";
  }
}

}  // namespace segmix::replay
