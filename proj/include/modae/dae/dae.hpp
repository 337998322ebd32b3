#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "modae/planner/planner.hpp"
#include "modae/planning/plan.hpp"

namespace modae::dae {

using planning::ActionId;
using planning::AtomId;
using planning::GroundedTask;
using planning::ObjectiveVector;
using planning::Ticks;

using Rng = std::mt19937_64;

constexpr Ticks kUnreachable = std::numeric_limits<Ticks>::max();

/// Earliest time each atom can become true: 0 for initial atoms, otherwise the
/// best (duration + latest precondition) over its achievers. kUnreachable if never.
std::vector<Ticks> h1_earliest(const GroundedTask& task);

/// Pairwise (h²) reachability: a pair is mutex when the fixpoint never makes
/// both atoms true together. Atoms that are unreachable on their own are mutex
/// with everything. Symmetric and irreflexive.
class MutexTable {
 public:
  MutexTable() = default;
  explicit MutexTable(std::size_t atom_count);

  bool mutex(AtomId a, AtomId b) const {
    return a != b && bits_[static_cast<std::size_t>(a) * n_ + b] != 0;
  }
  void set(AtomId a, AtomId b);
  std::size_t atom_count() const noexcept { return n_; }
  std::size_t pair_count() const;  // unordered pairs

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

MutexTable mutex_pairs(const GroundedTask& task);

struct PartialState {
  std::vector<AtomId> atoms;  // sorted, non-empty, pairwise non-mutex
  Ticks anchor = 0;           // max h1 over atoms

  friend bool operator==(const PartialState&, const PartialState&) = default;
};

struct EvaluationResult {
  bool feasible = false;
  ObjectiveVector objectives;  // penalized by the engine when infeasible
  int solved_subproblems = 0;
  int total_subproblems = 0;
  std::optional<planning::Plan> plan;
  std::int64_t expanded_nodes = 0;
  bool makespan_strategy = true;
};

struct Individual {
  std::vector<PartialState> states;
  std::optional<EvaluationResult> evaluation;
};

struct EvoParams {
  int pop_size = 30;
  double proba_cross = 0.5;
  double proba_mut = 0.8;
  double w_addgoal = 3;
  double w_delgoal = 1;
  double w_addatom = 1;
  double w_delatom = 1;
  double proba_change = 0.5;
  double proba_delatom = 0.3;
  int radius = 2;
  double w_makespan = 1;
  double w_cost = 1;
  // Not in the tuned space.
  int max_length = 20;
  int max_atoms = 5;
  int crossover_retries = 10;

  void validate() const;  // throws modae::Error on out-of-range values
  friend bool operator==(const EvoParams&, const EvoParams&) = default;
};

/// Per-task tables shared by all operators: h1 times, mutexes and the atoms
/// grouped by their h1 value.
class Heuristics {
 public:
  explicit Heuristics(const GroundedTask& task);

  const GroundedTask& task() const noexcept { return *task_; }
  const std::vector<Ticks>& h1() const noexcept { return h1_; }
  Ticks h1(AtomId a) const { return h1_[a]; }
  const MutexTable& mutex() const noexcept { return mutex_; }

  // Sorted distinct finite h1 values, and the atoms having each of them.
  const std::vector<Ticks>& times() const noexcept { return times_; }
  const std::vector<AtomId>& atoms_at(std::size_t time_index) const {
    return by_time_[time_index];
  }
  std::size_t time_index(Ticks t) const;  // index of t in times(); t must be present

  bool compatible(const std::vector<AtomId>& atoms, AtomId candidate) const;
  bool valid(const Individual& ind) const;  // non-empty, non-mutex, anchors consistent

 private:
  const GroundedTask* task_;
  std::vector<Ticks> h1_;
  MutexTable mutex_;
  std::vector<Ticks> times_;
  std::vector<std::vector<AtomId>> by_time_;
};

Individual init_individual(const Heuristics& heur, const EvoParams& params, Rng& rng);

/// p1[0, cut1) ++ p2[cut2, end); nullopt when the anchors would decrease at the
/// junction or the child would exceed max_length.
std::optional<Individual> crossover_at(const Individual& p1, const Individual& p2,
                                       std::size_t cut1, std::size_t cut2,
                                       int max_length = 1 << 30);
Individual crossover(const Individual& p1, const Individual& p2, const EvoParams& params,
                     Rng& rng);

enum class MutationKind { AddState, DelState, AddChangeAtom, DelAtom };

Individual mutate(const Individual& ind, const Heuristics& heur, const EvoParams& params,
                  Rng& rng);
/// Applies one specific operator; returns the input unchanged when it does not
/// apply (e.g. DelState on an empty individual).
Individual mutate_with(MutationKind kind, const Individual& ind, const Heuristics& heur,
                       const EvoParams& params, Rng& rng);

/// Solves init → S1 → ... → Sn → goal with one strategy drawn by the weights,
/// splitting the per-call budget equally over the n+1 subproblems.
EvaluationResult evaluate(const Individual& ind, const Heuristics& heur,
                          planner::Solver& solver, double w_makespan, double w_cost,
                          planner::SearchBudget per_call, Rng& rng);

/// Objective vectors for infeasible individuals: (M*(1+u), C*(1+u)) with M*, C*
/// ten times the largest feasible values observed (at least 10^6) and u the
/// fraction of unsolved subproblems.
class Penalty {
 public:
  void observe(const ObjectiveVector& feasible);
  ObjectiveVector penalize(int solved, int total) const;
  void apply(EvaluationResult& r) const {
    if (!r.feasible) r.objectives = penalize(r.solved_subproblems, r.total_subproblems);
  }

 private:
  Ticks max_makespan_ = 0;
  Ticks max_secondary_ = 0;
};

}  // namespace modae::dae
