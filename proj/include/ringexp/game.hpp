#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <vector>

namespace ringexp {

// Two-player Buchi game on an explicit arena. States belong to the
// controller, who picks one of the state's actions; the opponent then picks
// one successor state of that action. The controller wins an infinite play
// that visits accepting states infinitely often. A state without actions is
// lost for the controller.
class BuchiGame {
 public:
  int add_state(bool accepting) {
    accepting_.push_back(accepting);
    actions_of_.emplace_back();
    return static_cast<int>(accepting_.size()) - 1;
  }

  // Successors must be nonempty; duplicates are dropped.
  int add_action(int state, std::vector<int> successors) {
    std::sort(successors.begin(), successors.end());
    successors.erase(std::unique(successors.begin(), successors.end()), successors.end());
    owner_.push_back(state);
    successors_.push_back(std::move(successors));
    const int id = static_cast<int>(owner_.size()) - 1;
    actions_of_[static_cast<std::size_t>(state)].push_back(id);
    return id;
  }

  std::size_t state_count() const { return accepting_.size(); }
  const std::vector<int>& actions(int state) const { return actions_of_[static_cast<std::size_t>(state)]; }
  const std::vector<int>& successors(int action) const { return successors_[static_cast<std::size_t>(action)]; }

  struct Solution {
    std::vector<bool> winning;  // per state, controller wins from here
    std::vector<int> strategy;  // per winning state, an action that keeps winning (-1 elsewhere)
  };

  Solution solve() const {
    const std::size_t ns = accepting_.size();
    const std::size_t na = owner_.size();
    std::vector<bool> alive_s(ns, true);
    std::vector<bool> alive_a(na, true);
    const auto preds = predecessors();

    auto remove = [&](const std::vector<bool>& in_s, const std::vector<bool>& in_a) {
      for (std::size_t s = 0; s < ns; ++s) {
        if (in_s[s]) alive_s[s] = false;
      }
      for (std::size_t a = 0; a < na; ++a) {
        if (in_a[a]) alive_a[a] = false;
      }
    };

    // Dead ends first.
    {
      std::vector<bool> target(ns, false);
      bool any = false;
      for (std::size_t s = 0; s < ns; ++s) {
        if (actions_of_[s].empty()) target[s] = any = true;
      }
      if (any) {
        auto [as, aa] = opponent_attractor(preds, target, alive_s, alive_a);
        remove(as, aa);
      }
    }

    while (true) {
      std::vector<bool> target(ns, false);
      for (std::size_t s = 0; s < ns; ++s) target[s] = alive_s[s] && accepting_[s];
      std::vector<int> unused;
      auto [rs, ra] = controller_attractor(preds, target, alive_s, alive_a, unused);
      std::vector<bool> rest(ns, false);
      bool any = false;
      for (std::size_t s = 0; s < ns; ++s) {
        if (alive_s[s] && !rs[s]) rest[s] = any = true;
      }
      if (!any) break;
      auto [ws, wa] = opponent_attractor(preds, rest, alive_s, alive_a);
      remove(ws, wa);
    }

    Solution sol;
    sol.winning = alive_s;
    sol.strategy.assign(ns, -1);
    std::vector<bool> target(ns, false);
    for (std::size_t s = 0; s < ns; ++s) target[s] = alive_s[s] && accepting_[s];
    std::vector<int> via;
    controller_attractor(preds, target, alive_s, alive_a, via);
    for (std::size_t s = 0; s < ns; ++s) {
      if (!alive_s[s]) continue;
      if (via[s] >= 0) {
        sol.strategy[s] = via[s];
        continue;
      }
      for (int a : actions_of_[s]) {
        if (alive_a[static_cast<std::size_t>(a)]) {
          sol.strategy[s] = a;
          break;
        }
      }
    }
    return sol;
  }

 private:
  using Preds = std::vector<std::vector<int>>;

  Preds predecessors() const {
    Preds preds(accepting_.size());
    for (std::size_t a = 0; a < owner_.size(); ++a) {
      for (int s : successors_[a]) preds[static_cast<std::size_t>(s)].push_back(static_cast<int>(a));
    }
    return preds;
  }

  // Controller attractor within the alive sub-arena. `via[s]` records the
  // action that pulled a non-target state in.
  std::pair<std::vector<bool>, std::vector<bool>> controller_attractor(const Preds& preds,
                                                                       const std::vector<bool>& target,
                                                                       const std::vector<bool>& alive_s,
                                                                       const std::vector<bool>& alive_a,
                                                                       std::vector<int>& via) const {
    const std::size_t ns = accepting_.size();
    const std::size_t na = owner_.size();
    std::vector<bool> in_s(ns, false);
    std::vector<bool> in_a(na, false);
    via.assign(ns, -1);
    std::vector<int> missing(na, 0);
    for (std::size_t a = 0; a < na; ++a) {
      if (alive_a[a]) missing[a] = static_cast<int>(successors_[a].size());
    }
    std::deque<int> queue;
    for (std::size_t s = 0; s < ns; ++s) {
      if (alive_s[s] && target[s]) {
        in_s[s] = true;
        queue.push_back(static_cast<int>(s));
      }
    }
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      for (int a : preds[static_cast<std::size_t>(s)]) {
        const auto ua = static_cast<std::size_t>(a);
        if (!alive_a[ua] || in_a[ua]) continue;
        if (--missing[ua] > 0) continue;
        in_a[ua] = true;
        const auto owner = static_cast<std::size_t>(owner_[ua]);
        if (alive_s[owner] && !in_s[owner]) {
          in_s[owner] = true;
          via[owner] = a;
          queue.push_back(owner_[ua]);
        }
      }
    }
    return {in_s, in_a};
  }

  std::pair<std::vector<bool>, std::vector<bool>> opponent_attractor(const Preds& preds,
                                                                     const std::vector<bool>& target,
                                                                     const std::vector<bool>& alive_s,
                                                                     const std::vector<bool>& alive_a) const {
    const std::size_t ns = accepting_.size();
    const std::size_t na = owner_.size();
    std::vector<bool> in_s(ns, false);
    std::vector<bool> in_a(na, false);
    std::vector<int> remaining(ns, 0);
    for (std::size_t s = 0; s < ns; ++s) {
      for (int a : actions_of_[s]) remaining[s] += alive_a[static_cast<std::size_t>(a)] ? 1 : 0;
    }
    std::deque<int> queue;
    for (std::size_t s = 0; s < ns; ++s) {
      if (alive_s[s] && (target[s] || remaining[s] == 0)) {
        in_s[s] = true;
        queue.push_back(static_cast<int>(s));
      }
    }
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      for (int a : preds[static_cast<std::size_t>(s)]) {
        const auto ua = static_cast<std::size_t>(a);
        if (!alive_a[ua] || in_a[ua]) continue;
        in_a[ua] = true;
        const auto owner = static_cast<std::size_t>(owner_[ua]);
        if (alive_s[owner] && !in_s[owner] && --remaining[owner] == 0) {
          in_s[owner] = true;
          queue.push_back(owner_[ua]);
        }
      }
    }
    return {in_s, in_a};
  }

  std::vector<bool> accepting_;
  std::vector<std::vector<int>> actions_of_;
  std::vector<int> owner_;
  std::vector<std::vector<int>> successors_;
};

}  // namespace ringexp
