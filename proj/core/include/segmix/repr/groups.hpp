#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace segmix::repr {

// Partition of the action set into groups with similar effects, each
// augmented with the always-available actions. Groups may overlap (the
// augmentation introduces shared members); together they cover every action.
class ActionGroups {
 public:
  ActionGroups() = default;
  explicit ActionGroups(std::vector<std::vector<int>> groups, int n_actions);

  int group_count() const { return static_cast<int>(groups_.size()); }
  int n_actions() const { return n_actions_; }
  const std::vector<int>& group(int j) const { return groups_[static_cast<std::size_t>(j)]; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }

  // Coordination-game analytic partition: {a_0} and {a_1, ..., a_{M-1}}.
  static ActionGroups coordination_game(int n_actions);
  // One group per action.
  static ActionGroups singletons(int n_actions);
  // Single group containing every action.
  static ActionGroups whole_action_set(int n_actions);

  void save(std::ostream& os) const;
  static ActionGroups load(std::istream& is);

 private:
  std::vector<std::vector<int>> groups_;  // each sorted ascending, unique
  int n_actions_ = 0;

  void validate() const;
};

// Builds groups from a cluster assignment (action id -> cluster id in
// [0, m)), unioning every group with the always-available ids.
ActionGroups build_groups(const std::vector<int>& assignment,
                          const std::vector<int>& always_available_ids);

}  // namespace segmix::repr
