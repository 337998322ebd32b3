#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <span>
#include <vector>

#include "modae/planning/task.hpp"

namespace modae::planner {

using planning::ActionId;
using planning::AtomId;
using planning::GroundedTask;
using planning::State;

enum class StrategyKind { Makespan, CostOrRisk };

/// Which objective the planner optimizes; the other one is only computed
/// afterwards by the validator.
struct Strategy {
  StrategyKind kind = StrategyKind::Makespan;

  static Strategy makespan() { return {StrategyKind::Makespan}; }
  static Strategy cost() { return {StrategyKind::CostOrRisk}; }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct SearchBudget {
  std::int64_t max_expanded_nodes = 100000;
  std::int64_t max_evaluated_states = 1000000;
};

struct SolveResult {
  std::optional<std::vector<ActionId>> plan;  // sequential actions reaching the goal
  std::int64_t expanded = 0;
  std::int64_t evaluated = 0;
  bool proven_unreachable = false;  // the delete relaxation already fails
};

/// Forward best-first search guided by relaxed plans, with
/// lookahead: every expanded node also spawns the state obtained by greedily
/// executing its relaxed plan. Reuses scratch buffers, so one Solver per thread.
class Solver {
 public:
  explicit Solver(const GroundedTask& task);

  /// Relaxed plan from `state` to `goal`, ordered by the additive cost at which
  /// each action became reachable; nullopt when some goal atom is unreachable
  /// even ignoring deletes.
  std::optional<std::vector<ActionId>> relaxed_plan(const State& state,
                                                    std::span<const AtomId> goal,
                                                    Strategy strategy);

  SolveResult solve(const State& start, std::span<const AtomId> goal, Strategy strategy,
                    SearchBudget budget, std::uint64_t seed);

 private:
  struct Estimate {
    bool reachable = false;
    std::int64_t primary = 0;
    std::int64_t secondary = 0;
    std::vector<ActionId> actions;
  };
  Estimate estimate(const State& state, std::span<const AtomId> goal, Strategy strategy);
  bool can_apply(const State& s, ActionId id) const;
  State successor(const State& s, ActionId id) const;

  const GroundedTask& task_;
  std::vector<std::int64_t> atom_cost_;
  std::vector<std::int32_t> supporter_;
  std::vector<std::int32_t> unsatisfied_;
  std::vector<std::int64_t> action_cost_;
  std::vector<std::uint8_t> marked_;
  std::vector<ActionId> no_precondition_;
  std::vector<std::uint8_t> in_plan_;
  std::vector<std::uint8_t> helpful_;
  std::vector<AtomId> stack_;
  std::vector<std::pair<std::int64_t, AtomId>> heap_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> pre_mask_;
};

std::optional<std::vector<ActionId>> relaxed_plan(const GroundedTask& task, const State& state,
                                                  std::span<const AtomId> goal,
                                                  Strategy strategy = Strategy::makespan());

/// Solves the task's own problem (initial state to goal).
SolveResult solve(const GroundedTask& task, Strategy strategy, SearchBudget budget,
                  std::uint64_t seed);

}  // namespace modae::planner
