#include "segmix/explore/explore.hpp"

#include <cmath>
#include <stdexcept>

namespace segmix::explore {

double EpsilonSchedule::at(long step) const {
  if (step < 0) throw std::invalid_argument("EpsilonSchedule: negative step");
  if (anneal_steps <= 0 || step >= anneal_steps) return end;
  double frac = static_cast<double>(step) / static_cast<double>(anneal_steps);
  return start + (end - start) * frac;
}

double epsilon_at(const EpsilonSchedule& schedule, long step) { return schedule.at(step); }

int masked_argmax(std::span<const double> q, const env::AvailMask& avail) {
  if (q.size() != avail.size())
    throw std::invalid_argument("masked_argmax: mask width mismatch");
  int best = -1;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (!avail[a]) continue;
    if (best < 0 || q[a] > q[static_cast<std::size_t>(best)]) best = static_cast<int>(a);
  }
  if (best < 0) throw std::invalid_argument("masked_argmax: no available action");
  return best;
}

namespace {

std::vector<int> available_members(const std::vector<int>& group, const env::AvailMask& avail) {
  std::vector<int> out;
  for (int a : group)
    if (avail[static_cast<std::size_t>(a)]) out.push_back(a);
  return out;
}

int argmax_of(std::span<const double> q, const std::vector<int>& members) {
  int best = members[0];
  for (int a : members)
    if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
  return best;
}

}  // namespace

int select_eps_greedy(std::span<const double> q, const env::AvailMask& avail, double eps,
                      Rng& rng) {
  int greedy = masked_argmax(q, avail);  // also validates the mask
  if (rng.unif01() < 1.0 - eps) return greedy;
  std::vector<int> options;
  for (std::size_t a = 0; a < avail.size(); ++a)
    if (avail[a]) options.push_back(static_cast<int>(a));
  return options[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(options.size())))];
}

int select_seg(std::span<const double> q, const repr::ActionGroups& groups,
               const env::AvailMask& avail, double eps, Rng& rng) {
  int greedy = masked_argmax(q, avail);
  if (rng.unif01() < 1.0 - eps) return greedy;
  int j = rng.uniform_int(groups.group_count());
  std::vector<int> members = available_members(groups.group(j), avail);
  if (members.empty())
    throw std::logic_error("select_seg: selected group has no available action; "
                           "groups were built without always-available augmentation");
  if (rng.unif01() < 1.0 - eps) return argmax_of(q, members);
  return members[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(members.size())))];
}

int select_action(Strategy strategy, std::span<const double> q,
                  const repr::ActionGroups* groups, const env::AvailMask& avail, double eps,
                  Rng& rng) {
  if (strategy == Strategy::kEpsGreedy) return select_eps_greedy(q, avail, eps, rng);
  if (groups == nullptr) throw std::invalid_argument("select_action: SEG requires groups");
  return select_seg(q, *groups, avail, eps, rng);
}

std::vector<double> action_probabilities(Strategy strategy, std::span<const double> q,
                                         const repr::ActionGroups* groups,
                                         const env::AvailMask& avail, double eps) {
  std::vector<double> p(q.size(), 0.0);
  int greedy = masked_argmax(q, avail);
  p[static_cast<std::size_t>(greedy)] += 1.0 - eps;

  if (strategy == Strategy::kEpsGreedy) {
    std::size_t n_avail = 0;
    for (auto m : avail) n_avail += m ? 1 : 0;
    for (std::size_t a = 0; a < avail.size(); ++a)
      if (avail[a]) p[a] += eps / static_cast<double>(n_avail);
    return p;
  }

  if (groups == nullptr)
    throw std::invalid_argument("action_probabilities: SEG requires groups");
  double per_group = eps / static_cast<double>(groups->group_count());
  for (int j = 0; j < groups->group_count(); ++j) {
    std::vector<int> members = available_members(groups->group(j), avail);
    if (members.empty())
      throw std::logic_error("action_probabilities: group has no available action");
    int gbest = argmax_of(q, members);
    p[static_cast<std::size_t>(gbest)] += per_group * (1.0 - eps);
    for (int a : members)
      p[static_cast<std::size_t>(a)] +=
          per_group * eps / static_cast<double>(members.size());
  }
  return p;
}

double action_probability(Strategy strategy, std::span<const double> q,
                          const repr::ActionGroups* groups, const env::AvailMask& avail,
                          double eps, int action_id) {
  auto p = action_probabilities(strategy, q, groups, avail, eps);
  if (action_id < 0 || action_id >= static_cast<int>(p.size()))
    throw std::invalid_argument("action_probability: action id out of range");
  return p[static_cast<std::size_t>(action_id)];
}

double reach_probability(const ReachQuery& query) {
  if (query.n_agents < 1 || query.t_steps < 0 || query.n_actions < 1 ||
      query.target_group_size < 1 || query.group_count < 1)
    throw std::invalid_argument("reach_probability: counts must be positive");
  if (query.eps < 0.0 || query.eps > 1.0)
    throw std::invalid_argument("reach_probability: eps must lie in [0, 1]");
  double per_agent_step;
  if (query.strategy == Strategy::kEpsGreedy) {
    per_agent_step = query.eps * static_cast<double>(query.target_group_size) /
                     static_cast<double>(query.n_actions);
  } else {
    per_agent_step = query.eps / static_cast<double>(query.group_count);
  }
  double exponent = static_cast<double>(query.n_agents) * static_cast<double>(query.t_steps);
  return std::pow(per_agent_step, exponent);
}

}  // namespace segmix::explore
