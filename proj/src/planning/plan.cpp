#include "modae/planning/plan.hpp"

#include <algorithm>
#include <numeric>

#include "modae/core/error.hpp"

namespace modae::planning {

namespace {

struct Running {
  Ticks end;
  std::size_t order;  // position in processing order
  ActionId action;
};

void apply_effects(const GroundedAction& a, State& state) {
  for (AtomId x : a.del_effects) state.reset(x);
  for (AtomId x : a.add_effects) state.set(x);
}

}  // namespace

ObjectiveVector validate_and_score(const GroundedTask& task, const Plan& plan) {
  const auto& steps = plan.steps;
  for (const auto& s : steps) (void)task.action(s.action);

  std::vector<std::size_t> order(steps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return steps[a] < steps[b]; });

  State state = task.init();
  std::vector<Running> running;
  ObjectiveVector result;

  auto retire_until = [&](Ticks t, bool inclusive_all) {
    std::sort(running.begin(), running.end(), [](const Running& a, const Running& b) {
      return a.end != b.end ? a.end < b.end : a.order < b.order;
    });
    std::size_t k = 0;
    while (k < running.size() && (inclusive_all || running[k].end <= t)) {
      apply_effects(task.action(running[k].action), state);
      ++k;
    }
    running.erase(running.begin(), running.begin() + static_cast<std::ptrdiff_t>(k));
  };

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t idx = order[pos];
    const auto& step = steps[idx];
    const auto& act = task.action(step.action);
    if (step.start < 0) throw ValidationError(idx, act.name + " starts before time 0");

    retire_until(step.start, false);

    for (AtomId p : act.preconditions) {
      if (!state.test(p)) {
        throw ValidationError(idx, act.name + " at t=" + std::to_string(step.start) +
                                       ": precondition " + task.atom(p).name + " does not hold");
      }
    }
    if (act.duration > 0) {
      for (const auto& r : running) {
        if (task.interferes(r.action, step.action)) {
          throw ValidationError(idx, act.name + " at t=" + std::to_string(step.start) +
                                         " overlaps interfering action " +
                                         task.action(r.action).name);
        }
      }
    }
    running.push_back(Running{step.start + act.duration, pos, step.action});

    result.makespan = std::max(result.makespan, step.start + act.duration);
    if (task.mode() == ObjectiveMode::CostSum) {
      result.secondary += act.cost;
    } else {
      result.secondary = std::max(result.secondary, act.risk);
    }
  }
  retire_until(0, true);

  for (AtomId g : task.goal()) {
    if (!state.test(g)) {
      throw ValidationError(steps.size(), "goal atom " + task.atom(g).name + " not reached");
    }
  }
  return result;
}

State validate_sequential(const GroundedTask& task, std::span<const ActionId> actions) {
  State state = task.init();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& act = task.action(actions[i]);
    for (AtomId p : act.preconditions) {
      if (!state.test(p)) {
        throw ValidationError(i, act.name + ": precondition " + task.atom(p).name +
                                     " does not hold");
      }
    }
    apply_effects(act, state);
  }
  for (AtomId g : task.goal()) {
    if (!state.test(g)) {
      throw ValidationError(actions.size(), "goal atom " + task.atom(g).name + " not reached");
    }
  }
  return state;
}

Plan compress(const GroundedTask& task, std::span<const ActionId> actions) {
  validate_sequential(task, actions);

  const auto n = task.atom_count();
  // Per atom: end of the latest adder so far, and the latest end among earlier
  // actions that delete it / that require or add it.
  std::vector<Ticks> provider_end(n, 0);
  std::vector<Ticks> deleter_end(n, 0);
  std::vector<Ticks> user_end(n, 0);

  Plan plan;
  plan.steps.reserve(actions.size());
  for (ActionId id : actions) {
    const auto& act = task.action(id);
    Ticks start = 0;
    for (AtomId p : act.preconditions) {
      start = std::max({start, provider_end[p], deleter_end[p]});
    }
    for (AtomId p : act.add_effects) start = std::max(start, deleter_end[p]);
    for (AtomId p : act.del_effects) start = std::max(start, user_end[p]);

    const Ticks end = start + act.duration;
    for (AtomId p : act.preconditions) user_end[p] = std::max(user_end[p], end);
    for (AtomId p : act.add_effects) {
      user_end[p] = std::max(user_end[p], end);
      provider_end[p] = end;
    }
    for (AtomId p : act.del_effects) deleter_end[p] = std::max(deleter_end[p], end);
    plan.steps.push_back(PlanStep{start, id});
  }
  std::stable_sort(plan.steps.begin(), plan.steps.end());
  plan.objectives = validate_and_score(task, plan);
  return plan;
}

Ticks sequential_makespan(const GroundedTask& task, std::span<const ActionId> actions) {
  Ticks total = 0;
  for (ActionId id : actions) total += task.action(id).duration;
  return total;
}

}  // namespace modae::planning
