#pragma once

#include <string>
#include <vector>

#include "modae/pddl/pddl.hpp"
#include "modae/planning/plan.hpp"
#include "modae/zeno/zeno.hpp"

namespace modae::test {

inline planning::GroundedTask zeno_task(const zeno::ZenoConfig& cfg) {
  auto pair = zeno::generate(cfg);
  auto d = pddl::parse_domain(pair.domain);
  return pddl::ground(d, pddl::parse_problem(pair.problem, d));
}

inline planning::GroundedTask zeno_task(zeno::Variant v, int passengers,
                                        planning::ObjectiveMode mode) {
  return zeno_task(zeno::default_config(v, passengers, mode));
}

// Same atoms and actions, different goal (and optionally initial state).
inline planning::GroundedTask with_goal(const planning::GroundedTask& t,
                                        std::vector<planning::AtomId> goal) {
  std::vector<std::string> names;
  for (const auto& a : t.atoms()) names.push_back(a.name);
  return planning::GroundedTask(names, t.actions(), t.init().atoms(), std::move(goal), t.mode(),
                                t.scales());
}

inline planning::ActionId act(const planning::GroundedTask& t, const std::string& name) {
  return t.action_id(name);
}

inline planning::AtomId atom(const planning::GroundedTask& t, const std::string& name) {
  return t.atom_id(name);
}

}  // namespace modae::test
