#pragma once

#include <algorithm>
#include <string>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

#include "modae/assess/front.hpp"
#include "modae/planning/task.hpp"

namespace modae::test {

// Exhaustive search over left-shifted schedules of a grounded task: every start
// happens at time 0 or at some action's end. Starts at one instant are taken
// in increasing action id order. No symmetry reduction; pruning only by the
// secondary value of identical schedule states and by an admissible remaining-
// time bound against the points found so far.
class BruteForceFront {
 public:
  BruteForceFront(const planning::GroundedTask& task, planning::Ticks bound)
      : task_(task), bound_(bound) {}

  std::vector<planning::ObjectiveVector> run() {
    Node root{0, task_.init(), {}, 0, 0};
    dfs(root);
    return assess::nondominated(found_);
  }

  std::size_t visited() const { return best_.size(); }

 private:
  struct Running {
    planning::Ticks end;
    planning::ActionId id;
    bool operator<(const Running& o) const { return end != o.end ? end < o.end : id < o.id; }
  };
  struct Node {
    planning::Ticks t;
    planning::State s;
    std::vector<Running> running;
    planning::Ticks secondary;
    planning::ActionId next_id;
  };

  std::string key(const Node& n) const {
    std::string k;
    auto put = [&k](std::int64_t v) { k.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(n.t);
    put(n.next_id);
    for (auto w : n.s.words()) put(static_cast<std::int64_t>(w));
    for (const auto& r : n.running) {
      put(r.end);
      put(r.id);
    }
    return k;
  }

  // Earliest time all goals can hold, ignoring deletes; running actions
  // contribute their adds at their end.
  planning::Ticks lower_bound(const Node& n) const {
    constexpr auto inf = std::numeric_limits<planning::Ticks>::max();
    const auto& actions = task_.actions();
    std::vector<planning::Ticks> h(task_.atom_count(), inf);
    using E = std::pair<planning::Ticks, planning::AtomId>;
    std::priority_queue<E, std::vector<E>, std::greater<>> q;
    for (auto a : n.s.atoms()) {
      h[a] = n.t;
      q.push({n.t, a});
    }
    for (const auto& r : n.running) {
      for (auto a : actions[r.id].add_effects) {
        if (r.end < h[a]) {
          h[a] = r.end;
          q.push({r.end, a});
        }
      }
    }
    std::vector<int> missing(actions.size());
    std::vector<planning::Ticks> ready(actions.size(), n.t);
    for (const auto& a : actions) missing[a.id] = static_cast<int>(a.preconditions.size());
    while (!q.empty()) {
      auto [t, p] = q.top();
      q.pop();
      if (t > h[p]) continue;
      for (auto id : task_.consumers(p)) {
        ready[id] = std::max(ready[id], t);
        if (--missing[id] == 0) {
          const auto end = ready[id] + actions[id].duration;
          for (auto a : actions[id].add_effects) {
            if (end < h[a]) {
              h[a] = end;
              q.push({end, a});
            }
          }
        }
      }
    }
    planning::Ticks lb = n.running.empty() ? n.t : n.running.back().end;
    for (auto g : task_.goal()) lb = std::max(lb, h[g]);
    return lb;
  }

  void dfs(const Node& n) {
    auto k = key(n);
    auto it = best_.find(k);
    if (it != best_.end() && it->second <= n.secondary) return;
    best_[std::move(k)] = n.secondary;
    if (n.running.empty() && n.s.contains_all(task_.goal())) {
      found_.push_back({n.t, n.secondary});
      return;
    }
    const auto lb = lower_bound(n);
    if (lb > bound_) return;
    for (const auto& f : found_) {
      if (f.makespan <= lb && f.secondary <= n.secondary) return;
    }
    const auto& actions = task_.actions();
    for (planning::ActionId a = n.next_id; a < actions.size(); ++a) {
      const auto& act = actions[a];
      if (n.t + act.duration > bound_ || !planning::applicable(task_, n.s, act)) continue;
      bool clash = false;
      for (const auto& r : n.running) {
        if (task_.interferes(a, r.id)) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      Node c = n;
      c.running.push_back({n.t + act.duration, a});
      std::sort(c.running.begin(), c.running.end());
      c.secondary = task_.mode() == planning::ObjectiveMode::CostSum
                        ? n.secondary + act.cost
                        : std::max(n.secondary, act.risk);
      c.next_id = a + 1;
      dfs(c);
    }
    if (!n.running.empty()) {
      Node c = n;
      c.t = n.running.front().end;
      while (!c.running.empty() && c.running.front().end == c.t) {
        const auto& act = actions[c.running.front().id];
        for (auto d : act.del_effects) c.s.reset(d);
        for (auto p : act.add_effects) c.s.set(p);
        c.running.erase(c.running.begin());
      }
      c.next_id = 0;
      dfs(c);
    }
  }

  const planning::GroundedTask& task_;
  planning::Ticks bound_;
  std::unordered_map<std::string, planning::Ticks> best_;
  std::vector<planning::ObjectiveVector> found_;
};

}  // namespace modae::test
