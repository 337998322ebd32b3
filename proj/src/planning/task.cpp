#include "modae/planning/task.hpp"

#include <algorithm>
#include <bit>

#include "modae/core/error.hpp"

namespace modae::planning {

std::size_t State::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<AtomId> State::atoms() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(static_cast<AtomId>(i))) out.push_back(static_cast<AtomId>(i));
  }
  return out;
}

std::size_t StateHash::operator()(const State& s) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.size();
  for (auto w : s.words()) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

std::string_view to_string(ObjectiveMode mode) {
  return mode == ObjectiveMode::CostSum ? "cost" : "risk";
}

ObjectiveMode objective_mode_from_string(std::string_view text) {
  if (text == "cost" || text == "cost-sum") return ObjectiveMode::CostSum;
  if (text == "risk" || text == "risk-max") return ObjectiveMode::RiskMax;
  throw Error("unknown objective mode '" + std::string(text) + "'");
}

namespace {

void normalize(std::vector<AtomId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool intersects(const std::vector<AtomId>& a, const std::vector<AtomId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

}  // namespace

GroundedTask::GroundedTask(std::vector<std::string> atom_names,
                           std::vector<GroundedAction> actions,
                           std::vector<AtomId> init_atoms, std::vector<AtomId> goal,
                           ObjectiveMode mode, Scales scales)
    : actions_(std::move(actions)), goal_(std::move(goal)), mode_(mode), scales_(scales) {
  const auto n = atom_names.size();
  atoms_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = atom_index_.emplace(atom_names[i], static_cast<AtomId>(i));
    if (!inserted) throw StructuralError("duplicate atom name '" + atom_names[i] + "'");
    atoms_.push_back(Atom{static_cast<AtomId>(i), std::move(atom_names[i])});
  }
  auto check = [n](AtomId a, const std::string& where) {
    if (a >= n) {
      throw StructuralError("atom id " + std::to_string(a) + " out of range in " + where);
    }
  };
  init_ = State(n);
  for (AtomId a : init_atoms) {
    check(a, "initial state");
    init_.set(a);
  }
  normalize(goal_);
  for (AtomId a : goal_) check(a, "goal");

  consumers_.assign(n, {});
  achievers_.assign(n, {});
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    auto& act = actions_[i];
    if (act.id != i) throw StructuralError("action ids must be dense and ordered: " + act.name);
    normalize(act.preconditions);
    normalize(act.add_effects);
    normalize(act.del_effects);
    for (auto* list : {&act.preconditions, &act.add_effects, &act.del_effects}) {
      for (AtomId a : *list) check(a, "action " + act.name);
    }
    if (intersects(act.add_effects, act.del_effects)) {
      throw StructuralError("action " + act.name + " adds and deletes the same atom");
    }
    if (act.duration < 0 || act.cost < 0 || act.risk < 0) {
      throw StructuralError("action " + act.name + " has a negative duration, cost or risk");
    }
    if (!action_index_.emplace(act.name, act.id).second) {
      throw StructuralError("duplicate action name '" + act.name + "'");
    }
    for (AtomId a : act.preconditions) consumers_[a].push_back(act.id);
    for (AtomId a : act.add_effects) achievers_[a].push_back(act.id);
  }
  if (scales_.time_denominator <= 0 || scales_.cost_denominator <= 0 ||
      scales_.risk_denominator <= 0) {
    throw StructuralError("quantum denominators must be positive");
  }
}

std::optional<AtomId> GroundedTask::find_atom(std::string_view name) const {
  auto it = atom_index_.find(std::string(name));
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

AtomId GroundedTask::atom_id(std::string_view name) const {
  if (auto id = find_atom(name)) return *id;
  throw StructuralError("unknown atom '" + std::string(name) + "'");
}

const GroundedAction& GroundedTask::action(ActionId id) const {
  if (id >= actions_.size()) {
    throw StructuralError("action id " + std::to_string(id) + " out of range");
  }
  return actions_[id];
}

std::optional<ActionId> GroundedTask::find_action(std::string_view name) const {
  auto it = action_index_.find(std::string(name));
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

ActionId GroundedTask::action_id(std::string_view name) const {
  if (auto id = find_action(name)) return *id;
  throw StructuralError("unknown action '" + std::string(name) + "'");
}

bool GroundedTask::interferes(ActionId a, ActionId b) const {
  const auto& x = action(a);
  const auto& y = action(b);
  return intersects(x.del_effects, y.preconditions) || intersects(x.del_effects, y.add_effects) ||
         intersects(y.del_effects, x.preconditions) || intersects(y.del_effects, x.add_effects);
}

State GroundedTask::make_state(const std::vector<AtomId>& atoms) const {
  State s(atom_count());
  for (AtomId a : atoms) {
    if (a >= atom_count()) throw StructuralError("atom id out of range");
    s.set(a);
  }
  return s;
}

namespace {

void check_shape(const GroundedTask& task, const State& state, const GroundedAction& action) {
  if (state.size() != task.atom_count()) {
    throw StructuralError("state size does not match the task's atom count");
  }
  for (auto* list : {&action.preconditions, &action.add_effects, &action.del_effects}) {
    for (AtomId a : *list) {
      if (a >= task.atom_count()) {
        throw StructuralError("action " + action.name + " references atom " + std::to_string(a) +
                              " out of range");
      }
    }
  }
}

}  // namespace

bool applicable(const GroundedTask& task, const State& state, const GroundedAction& action) {
  check_shape(task, state, action);
  return state.contains_all(action.preconditions);
}

State apply(const GroundedTask& task, const State& state, const GroundedAction& action) {
  if (!applicable(task, state, action)) {
    throw ContractViolation("action " + action.name + " is not applicable");
  }
  State next = state;
  for (AtomId a : action.del_effects) next.reset(a);
  for (AtomId a : action.add_effects) next.set(a);
  return next;
}

}  // namespace modae::planning
