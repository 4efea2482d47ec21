#pragma once

#include <span>
#include <vector>

#include "segmix/env/env.hpp"
#include "segmix/repr/groups.hpp"
#include "segmix/rng.hpp"

namespace segmix::explore {

enum class Strategy { kEpsGreedy, kSeg };

// Linear anneal from start to end over anneal_steps environment steps, then
// constant. Evaluation always runs with epsilon 0.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  long anneal_steps = 30000;

  double at(long step) const;
};

double epsilon_at(const EpsilonSchedule& schedule, long step);

// Argmax over available actions, ties to the lowest action id. Throws when
// no action is available.
int masked_argmax(std::span<const double> q, const env::AvailMask& avail);

// Plain epsilon-greedy: with probability 1-eps the masked argmax, otherwise
// uniform over available actions.
int select_eps_greedy(std::span<const double> q, const env::AvailMask& avail, double eps,
                      Rng& rng);

// Bi-level selection: with probability 1-eps the global masked argmax;
// otherwise a group is drawn uniformly, then within the group's available
// actions another epsilon-greedy choice is made (argmax with probability
// 1-eps, else uniform). The same eps drives both levels. Every group must
// retain at least one available action, which the always-available
// augmentation guarantees; a violation throws std::logic_error.
int select_seg(std::span<const double> q, const repr::ActionGroups& groups,
               const env::AvailMask& avail, double eps, Rng& rng);

// Dispatch helper; groups may be null for kEpsGreedy.
int select_action(Strategy strategy, std::span<const double> q,
                  const repr::ActionGroups* groups, const env::AvailMask& avail, double eps,
                  Rng& rng);

// Exact selection probabilities obtained by summing over the finite
// selection tree. Closed-form oracle for the samplers above.
std::vector<double> action_probabilities(Strategy strategy, std::span<const double> q,
                                         const repr::ActionGroups* groups,
                                         const env::AvailMask& avail, double eps);

double action_probability(Strategy strategy, std::span<const double> q,
                          const repr::ActionGroups* groups, const env::AvailMask& avail,
                          double eps, int action_id);

// Probability that all n agents pick actions from a given target group for t
// consecutive steps, under the standing assumption that greedy actions lie
// outside the target group. Epsilon-greedy depends on the group's size
// relative to the action set; the bi-level strategy depends only on the
// group count (singleton target group).
struct ReachQuery {
  Strategy strategy = Strategy::kEpsGreedy;
  int n_agents = 1;
  int t_steps = 1;
  int n_actions = 2;         // |A|
  int target_group_size = 1;  // |A^i|
  int group_count = 2;        // m
  double eps = 0.5;
};

double reach_probability(const ReachQuery& query);

}  // namespace segmix::explore
