#pragma once

#include <span>
#include <vector>

#include "modae/planning/task.hpp"

namespace modae::planning {

struct PlanStep {
  Ticks start = 0;
  ActionId action = 0;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
  friend auto operator<=>(const PlanStep&, const PlanStep&) = default;
};

struct Plan {
  std::vector<PlanStep> steps;  // sorted by (start, action)
  ObjectiveVector objectives;
};

/// Event-wise simulation of a schedule. Conditions are checked at action
/// start against the effects of every already-started action that has ended
/// by then; effects take place at action end; two overlapping actions may not
/// interfere. Throws ValidationError naming the first offending step.
ObjectiveVector validate_and_score(const GroundedTask& task, const Plan& plan);

/// Checks that `actions` is executable in order from the initial state and
/// reaches the goal. Throws ValidationError otherwise. Returns the final state.
State validate_sequential(const GroundedTask& task, std::span<const ActionId> actions);

/// Greedy earliest-start rescheduling of a valid sequential plan. Each action
/// starts once the providers of its preconditions and every earlier action it
/// interferes with have ended.
Plan compress(const GroundedTask& task, std::span<const ActionId> actions);

/// Sum of durations: the makespan of executing `actions` strictly one after the other.
Ticks sequential_makespan(const GroundedTask& task, std::span<const ActionId> actions);

}  // namespace modae::planning
