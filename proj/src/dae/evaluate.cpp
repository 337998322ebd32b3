#include <algorithm>

#include "modae/core/error.hpp"
#include "modae/dae/dae.hpp"

namespace modae::dae {

EvaluationResult evaluate(const Individual& ind, const Heuristics& heur,
                          planner::Solver& solver, double w_makespan, double w_cost,
                          planner::SearchBudget per_call, Rng& rng) {
  const auto& task = heur.task();
  EvaluationResult r;
  const double total_w = w_makespan + w_cost;
  const double p_makespan = total_w > 0 ? w_makespan / total_w : 1.0;
  r.makespan_strategy = std::uniform_real_distribution<double>(0, 1)(rng) < p_makespan;
  const auto strategy =
      r.makespan_strategy ? planner::Strategy::makespan() : planner::Strategy::cost();

  const int parts = static_cast<int>(ind.states.size()) + 1;
  r.total_subproblems = parts;
  planner::SearchBudget sub{std::max<std::int64_t>(1, per_call.max_expanded_nodes / parts),
                            std::max<std::int64_t>(1, per_call.max_evaluated_states / parts)};

  planning::State state = task.init();
  std::vector<ActionId> sequence;
  for (int k = 0; k < parts; ++k) {
    const auto& goal = k + 1 < parts ? ind.states[static_cast<std::size_t>(k)].atoms : task.goal();
    auto res = solver.solve(state, goal, strategy, sub, rng());
    r.expanded_nodes += res.expanded;
    if (!res.plan) return r;
    for (ActionId id : *res.plan) {
      state = planning::apply(task, state, task.action(id));
      sequence.push_back(id);
    }
    r.solved_subproblems = k + 1;
  }
  r.plan = planning::compress(task, sequence);
  r.objectives = r.plan->objectives;
  r.feasible = true;
  return r;
}

void Penalty::observe(const ObjectiveVector& v) {
  max_makespan_ = std::max(max_makespan_, v.makespan);
  max_secondary_ = std::max(max_secondary_, v.secondary);
}

ObjectiveVector Penalty::penalize(int solved, int total) const {
  constexpr Ticks kFloor = 1000000;
  const Ticks m = std::max(kFloor, 10 * max_makespan_);
  const Ticks c = std::max(kFloor, 10 * max_secondary_);
  if (total <= 0) return {2 * m, 2 * c};
  const Ticks unsolved = std::clamp<Ticks>(total - solved, 0, total);
  // X * (1 + u) with u = unsolved / total, rounded down.
  return {m + m * unsolved / total, c + c * unsolved / total};
}

}  // namespace modae::dae
