#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "modae/planning/state.hpp"

namespace modae::planning {

// Durations, costs and risks are integers in units of a per-task quantum
// (1 / denominator), so all objective arithmetic is exact.
using Ticks = std::int64_t;

enum class ObjectiveMode { CostSum, RiskMax };

std::string_view to_string(ObjectiveMode mode);
ObjectiveMode objective_mode_from_string(std::string_view text);

struct Atom {
  AtomId id = 0;
  std::string name;
};

struct GroundedAction {
  ActionId id = 0;
  std::string name;
  std::vector<AtomId> preconditions;  // sorted, unique
  std::vector<AtomId> add_effects;    // sorted, unique
  std::vector<AtomId> del_effects;    // sorted, unique, disjoint from add_effects
  Ticks duration = 0;
  Ticks cost = 0;
  Ticks risk = 0;
};

struct ObjectiveVector {
  Ticks makespan = 0;
  Ticks secondary = 0;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
  friend auto operator<=>(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct TaskScales {
  std::int64_t time_denominator = 1;
  std::int64_t cost_denominator = 1;
  std::int64_t risk_denominator = 1;
};

/// Fully grounded temporal planning task. Immutable once constructed; the
/// constructor checks every atom reference and builds the per-atom indexes
/// used by the validator, the planner and the DaE heuristics.
class GroundedTask {
 public:
  using Scales = TaskScales;

  GroundedTask(std::vector<std::string> atom_names, std::vector<GroundedAction> actions,
               std::vector<AtomId> init_atoms, std::vector<AtomId> goal,
               ObjectiveMode mode, Scales scales = {});

  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::size_t action_count() const noexcept { return actions_.size(); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(AtomId id) const { return atoms_.at(id); }
  std::optional<AtomId> find_atom(std::string_view name) const;
  AtomId atom_id(std::string_view name) const;  // throws StructuralError if unknown

  const std::vector<GroundedAction>& actions() const noexcept { return actions_; }
  const GroundedAction& action(ActionId id) const;  // throws StructuralError if out of range
  std::optional<ActionId> find_action(std::string_view name) const;
  ActionId action_id(std::string_view name) const;

  const State& init() const noexcept { return init_; }
  const std::vector<AtomId>& goal() const noexcept { return goal_; }
  ObjectiveMode mode() const noexcept { return mode_; }
  const Scales& scales() const noexcept { return scales_; }

  // Actions listing the atom as precondition / add effect.
  const std::vector<ActionId>& consumers(AtomId atom) const { return consumers_[atom]; }
  const std::vector<ActionId>& achievers(AtomId atom) const { return achievers_[atom]; }

  // Mutex-interference between two actions: one deletes something the other
  // requires or adds. Such actions may never overlap in time.
  bool interferes(ActionId a, ActionId b) const;

  State make_state(const std::vector<AtomId>& atoms) const;

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, AtomId> atom_index_;
  std::vector<GroundedAction> actions_;
  std::unordered_map<std::string, ActionId> action_index_;
  State init_;
  std::vector<AtomId> goal_;
  ObjectiveMode mode_;
  Scales scales_;
  std::vector<std::vector<ActionId>> consumers_;
  std::vector<std::vector<ActionId>> achievers_;
};

bool applicable(const GroundedTask& task, const State& state, const GroundedAction& action);
State apply(const GroundedTask& task, const State& state, const GroundedAction& action);

}  // namespace modae::planning
