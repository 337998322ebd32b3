#include "modae/planner/planner.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_set>

namespace modae::planner {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
// Secondary weight of duration inside cost/risk supporter selection.
constexpr std::int64_t kScale = std::int64_t{1} << 20;

// Among equally good achievers, the one with fewer side effects wins.
std::int64_t support_weight(const planning::GroundedAction& a, Strategy s,
                            planning::ObjectiveMode mode) {
  const auto side = static_cast<std::int64_t>(a.add_effects.size() + a.del_effects.size());
  if (s.kind == StrategyKind::Makespan) return a.duration * 64 + side;
  const auto v = mode == planning::ObjectiveMode::CostSum ? a.cost : a.risk;
  return (v * kScale + a.duration) * 64 + side;
}

struct Accum {
  std::int64_t duration = 0;
  std::int64_t cost = 0;
  std::int64_t risk = 0;

  void add(const planning::GroundedAction& a) {
    duration += a.duration;
    cost += a.cost;
    risk = std::max(risk, a.risk);
  }
};

}  // namespace

Solver::Solver(const GroundedTask& task) : task_(task) {
  atom_cost_.resize(task.atom_count());
  supporter_.resize(task.atom_count());
  marked_.resize(task.atom_count());
  unsatisfied_.resize(task.action_count());
  action_cost_.resize(task.action_count());
  in_plan_.resize(task.action_count());
  helpful_.resize(task.action_count());
  words_ = (task.atom_count() + 63) / 64;
  pre_mask_.assign(task.action_count() * words_, 0);
  for (const auto& a : task.actions()) {
    if (a.preconditions.empty()) no_precondition_.push_back(a.id);
    for (AtomId p : a.preconditions) pre_mask_[a.id * words_ + (p >> 6)] |= std::uint64_t{1} << (p & 63);
  }
}

bool Solver::can_apply(const State& s, ActionId id) const {
  const auto w = s.words();
  const std::uint64_t* m = &pre_mask_[id * words_];
  for (std::size_t i = 0; i < words_; ++i) {
    if ((w[i] & m[i]) != m[i]) return false;
  }
  return true;
}

State Solver::successor(const State& s, ActionId id) const {
  State out = s;
  const auto& a = task_.actions()[id];
  for (AtomId p : a.del_effects) out.reset(p);
  for (AtomId p : a.add_effects) out.set(p);
  return out;
}

Solver::Estimate Solver::estimate(const State& state, std::span<const AtomId> goal,
                                  Strategy strategy) {
  Estimate out;
  const auto& actions = task_.actions();
  const auto mode = task_.mode();
  std::fill(atom_cost_.begin(), atom_cost_.end(), kInf);
  std::fill(supporter_.begin(), supporter_.end(), -1);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    unsatisfied_[i] = static_cast<std::int32_t>(actions[i].preconditions.size());
    action_cost_[i] = 0;
  }

  auto& heap = heap_;
  heap.clear();
  const auto push = [&](std::int64_t c, AtomId p) {
    heap.push_back({c, p});
    std::push_heap(heap.begin(), heap.end(), std::greater<>{});
  };
  const auto words = state.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
      const auto p = static_cast<AtomId>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
      atom_cost_[p] = 0;
      push(0, p);
    }
  }
  auto fire = [&](ActionId id) {
    const auto& a = actions[id];
    const std::int64_t c = action_cost_[id] + support_weight(a, strategy, mode);
    for (AtomId q : a.add_effects) {
      if (c < atom_cost_[q]) {
        atom_cost_[q] = c;
        supporter_[q] = static_cast<std::int32_t>(id);
        push(c, q);
      }
    }
  };
  for (ActionId id : no_precondition_) fire(id);

  std::size_t goals_left = 0;
  std::fill(marked_.begin(), marked_.end(), 0);
  for (AtomId g : goal) {
    if (!marked_[g]) {
      marked_[g] = 1;
      ++goals_left;
    }
  }
  while (!heap.empty() && goals_left > 0) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
    auto [c, p] = heap.back();
    heap.pop_back();
    if (c > atom_cost_[p]) continue;
    if (marked_[p] == 1) {
      marked_[p] = 2;
      --goals_left;
    }
    for (ActionId id : task_.consumers(p)) {
      action_cost_[id] += c;  // additive accumulation
      if (--unsatisfied_[id] == 0) fire(id);
    }
  }
  if (goals_left > 0) return out;

  // Backchain supporters from the goals.
  std::fill(marked_.begin(), marked_.end(), 0);
  auto& stack = stack_;
  stack.assign(goal.begin(), goal.end());
  std::vector<ActionId> chosen;
  auto& in_plan = in_plan_;
  while (!stack.empty()) {
    AtomId p = stack.back();
    stack.pop_back();
    if (marked_[p]) continue;
    marked_[p] = 1;
    if (state.test(p)) continue;
    const auto sup = static_cast<ActionId>(supporter_[p]);
    if (in_plan[sup]) continue;
    in_plan[sup] = 1;
    chosen.push_back(sup);
    for (AtomId q : actions[sup].preconditions) stack.push_back(q);
  }
  for (ActionId id : chosen) in_plan[id] = 0;
  std::sort(chosen.begin(), chosen.end(), [&](ActionId x, ActionId y) {
    if (action_cost_[x] != action_cost_[y]) return action_cost_[x] < action_cost_[y];
    return x < y;
  });

  Accum acc;
  for (ActionId id : chosen) acc.add(actions[id]);
  out.reachable = true;
  out.actions = std::move(chosen);
  if (strategy.kind == StrategyKind::Makespan) {
    out.primary = acc.duration;
    out.secondary = 0;
  } else {
    out.primary = mode == planning::ObjectiveMode::CostSum ? acc.cost : acc.risk;
    out.secondary = acc.duration;
  }
  return out;
}

std::optional<std::vector<ActionId>> Solver::relaxed_plan(const State& state,
                                                          std::span<const AtomId> goal,
                                                          Strategy strategy) {
  auto e = estimate(state, goal, strategy);
  if (!e.reachable) return std::nullopt;
  return std::move(e.actions);
}

namespace {

struct SplitMix {
  std::uint64_t state;
  std::uint64_t operator()() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

struct Node {
  std::int32_t parent = -1;
  std::vector<ActionId> ops;  // actions leading from the parent
  State state;
  Accum g;
  std::int64_t h_primary = 0;
  std::int64_t h_secondary = 0;
  std::vector<ActionId> relaxed;  // relaxed plan of `state`, for the lookahead
};

struct OpenEntry {
  std::int64_t primary;
  std::int64_t secondary;
  int helpful;  // 0 for lookahead / relaxed-plan moves
  std::int64_t g;
  std::uint64_t tie;
  std::int32_t node;

  bool operator>(const OpenEntry& o) const {
    if (primary != o.primary) return primary > o.primary;
    if (secondary != o.secondary) return secondary > o.secondary;
    if (helpful != o.helpful) return helpful > o.helpful;
    if (g != o.g) return g > o.g;
    if (tie != o.tie) return tie > o.tie;
    return node > o.node;
  }
};

}  // namespace

SolveResult Solver::solve(const State& start, std::span<const AtomId> goal, Strategy strategy,
                          SearchBudget budget, std::uint64_t seed) {
  SolveResult result;
  auto satisfied = [&](const State& s) {
    return std::all_of(goal.begin(), goal.end(), [&](AtomId g) { return s.test(g); });
  };
  if (satisfied(start)) {
    result.plan = std::vector<ActionId>{};
    return result;
  }

  const auto& actions = task_.actions();
  const auto mode = task_.mode();
  SplitMix rng{seed};
  std::vector<Node> nodes;
  std::unordered_set<State, planning::StateHash> seen;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

  // Greedy: the estimate orders the queue; accumulated cost/risk and duration
  // only break ties.
  auto priority = [&](const Node& n, int helpful, std::int32_t id) {
    OpenEntry e{};
    e.primary = n.h_primary;
    e.secondary = n.h_secondary;
    e.helpful = helpful;
    if (strategy.kind == StrategyKind::Makespan) {
      e.g = n.g.duration;
    } else {
      e.g = (mode == planning::ObjectiveMode::CostSum ? n.g.cost : n.g.risk) * kScale +
            n.g.duration;
    }
    e.tie = rng();
    e.node = id;
    return e;
  };
  auto reconstruct = [&](std::int32_t id) {
    std::vector<std::vector<ActionId>*> chain;
    for (std::int32_t i = id; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent) {
      chain.push_back(&nodes[static_cast<std::size_t>(i)].ops);
    }
    std::vector<ActionId> plan;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      plan.insert(plan.end(), (*it)->begin(), (*it)->end());
    }
    return plan;
  };
  // Evaluates and queues a new node; returns true when it satisfies the goal.
  auto generate = [&](Node&& n, int helpful) {
    if (!seen.insert(n.state).second) return false;
    ++result.evaluated;
    if (satisfied(n.state)) {
      nodes.push_back(std::move(n));
      result.plan = reconstruct(static_cast<std::int32_t>(nodes.size() - 1));
      return true;
    }
    auto est = estimate(n.state, goal, strategy);
    if (!est.reachable) return false;
    n.h_primary = est.primary;
    n.h_secondary = est.secondary;
    n.relaxed = std::move(est.actions);
    nodes.push_back(std::move(n));
    const auto id = static_cast<std::int32_t>(nodes.size() - 1);
    open.push(priority(nodes.back(), helpful, id));
    return false;
  };

  {
    Node root;
    root.state = start;
    generate(std::move(root), 0);
    if (open.empty()) {
      result.proven_unreachable = true;
      return result;
    }
  }

  auto undoes_goal = [&](const State& s, const planning::GroundedAction& a) {
    for (AtomId d : a.del_effects) {
      if (s.test(d) && std::find(goal.begin(), goal.end(), d) != goal.end()) return true;
    }
    return false;
  };

  std::vector<ActionId> remaining;
  while (!open.empty()) {
    if (result.expanded >= budget.max_expanded_nodes ||
        result.evaluated >= budget.max_evaluated_states) {
      return result;
    }
    const auto id = open.top().node;
    open.pop();
    ++result.expanded;
    const State state = nodes[static_cast<std::size_t>(id)].state;
    const Accum g = nodes[static_cast<std::size_t>(id)].g;
    const std::vector<ActionId> relaxed = nodes[static_cast<std::size_t>(id)].relaxed;

    // Lookahead: greedily execute the relaxed plan, first applicable action first.
    {
      Node look;
      look.parent = id;
      look.state = state;
      look.g = g;
      remaining = relaxed;
      bool progress = true;
      while (progress) {
        progress = false;
        for (auto it = remaining.begin(); it != remaining.end(); ++it) {
          const auto& a = actions[*it];
          if (!can_apply(look.state, a.id) || undoes_goal(look.state, a)) continue;
          look.state = successor(look.state, a.id);
          look.ops.push_back(a.id);
          look.g.add(a);
          remaining.erase(it);
          progress = true;
          break;
        }
      }
      if (look.ops.size() > 1 && generate(std::move(look), 0)) return result;
    }

    for (ActionId r : relaxed) helpful_[r] = 1;
    bool finished = false;
    for (const auto& a : actions) {
      if (!can_apply(state, a.id)) continue;
      Node child;
      child.parent = id;
      child.ops = {a.id};
      child.state = successor(state, a.id);
      child.g = g;
      child.g.add(a);
      if (generate(std::move(child), helpful_[a.id] ? 0 : 1)) {
        finished = true;
        break;
      }
    }
    for (ActionId r : relaxed) helpful_[r] = 0;
    if (finished) return result;
  }
  return result;
}

std::optional<std::vector<ActionId>> relaxed_plan(const GroundedTask& task, const State& state,
                                                  std::span<const AtomId> goal, Strategy strategy) {
  Solver solver(task);
  return solver.relaxed_plan(state, goal, strategy);
}

SolveResult solve(const GroundedTask& task, Strategy strategy, SearchBudget budget,
                  std::uint64_t seed) {
  Solver solver(task);
  return solver.solve(task.init(), task.goal(), strategy, budget, seed);
}

}  // namespace modae::planner
