#include "segmix/repr/groups.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace segmix::repr {

ActionGroups::ActionGroups(std::vector<std::vector<int>> groups, int n_actions)
    : groups_(std::move(groups)), n_actions_(n_actions) {
  for (auto& g : groups_) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  validate();
}

void ActionGroups::validate() const {
  if (groups_.empty()) throw std::invalid_argument("ActionGroups: no groups");
  std::set<int> covered;
  for (const auto& g : groups_) {
    if (g.empty()) throw std::invalid_argument("ActionGroups: empty group");
    for (int a : g) {
      if (a < 0 || a >= n_actions_)
        throw std::invalid_argument("ActionGroups: action id out of range");
      covered.insert(a);
    }
  }
  if (static_cast<int>(covered.size()) != n_actions_)
    throw std::invalid_argument("ActionGroups: groups must cover every action id");
}

ActionGroups ActionGroups::coordination_game(int n_actions) {
  std::vector<int> rest;
  for (int a = 1; a < n_actions; ++a) rest.push_back(a);
  return ActionGroups({{0}, rest}, n_actions);
}

ActionGroups ActionGroups::singletons(int n_actions) {
  std::vector<std::vector<int>> gs;
  for (int a = 0; a < n_actions; ++a) gs.push_back({a});
  return ActionGroups(std::move(gs), n_actions);
}

ActionGroups ActionGroups::whole_action_set(int n_actions) {
  std::vector<int> all;
  for (int a = 0; a < n_actions; ++a) all.push_back(a);
  return ActionGroups({all}, n_actions);
}

void ActionGroups::save(std::ostream& os) const {
  os << "action-groups v1\n";
  os << "n_actions " << n_actions_ << "\n";
  os << "m " << groups_.size() << "\n";
  for (const auto& g : groups_) {
    os << "group";
    for (int a : g) os << " " << a;
    os << "\n";
  }
}

ActionGroups ActionGroups::load(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "action-groups v1")
    throw std::runtime_error("ActionGroups: bad header");
  int n_actions = 0;
  std::size_t m = 0;
  std::string key;
  is >> key >> n_actions;
  if (key != "n_actions") throw std::runtime_error("ActionGroups: expected n_actions");
  is >> key >> m;
  if (key != "m") throw std::runtime_error("ActionGroups: expected m");
  std::getline(is, line);
  std::vector<std::vector<int>> gs;
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::getline(is, line)) throw std::runtime_error("ActionGroups: truncated file");
    std::istringstream ls(line);
    ls >> key;
    if (key != "group") throw std::runtime_error("ActionGroups: expected group line");
    std::vector<int> g;
    int a;
    while (ls >> a) g.push_back(a);
    gs.push_back(std::move(g));
  }
  return ActionGroups(std::move(gs), n_actions);
}

ActionGroups build_groups(const std::vector<int>& assignment,
                          const std::vector<int>& always_available_ids) {
  if (assignment.empty()) throw std::invalid_argument("build_groups: empty assignment");
  int m = *std::max_element(assignment.begin(), assignment.end()) + 1;
  if (m < 1) throw std::invalid_argument("build_groups: bad cluster ids");
  std::vector<std::vector<int>> gs(static_cast<std::size_t>(m));
  for (std::size_t a = 0; a < assignment.size(); ++a) {
    int c = assignment[a];
    if (c < 0) throw std::invalid_argument("build_groups: negative cluster id");
    gs[static_cast<std::size_t>(c)].push_back(static_cast<int>(a));
  }
  for (auto& g : gs) {
    if (g.empty()) throw std::invalid_argument("build_groups: empty cluster in assignment");
    for (int id : always_available_ids) g.push_back(id);
  }
  return ActionGroups(std::move(gs), static_cast<int>(assignment.size()));
}

}  // namespace segmix::repr
