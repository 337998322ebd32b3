#include <sstream>

#include "modae/pddl/pddl.hpp"

namespace modae::pddl {

namespace {

std::string typed(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i].name;
    const bool last_of_group = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_group) out += " - " + names[i].type;
  }
  return out;
}

std::string app(const Application& a) {
  std::string out = "(" + a.head;
  for (const auto& x : a.args) out += " " + x;
  return out + ")";
}

std::string numeric(const NumericExpr& e) { return e.literal ? *e.literal : app(e.term); }

void print_action(std::ostringstream& os, const ActionSchema& a) {
  const bool d = a.durative;
  os << "  (" << (d ? ":durative-action " : ":action ") << a.name << "\n";
  os << "    :parameters (" << typed(a.params) << ")\n";
  if (d && a.duration) os << "    :duration (= ?duration " << numeric(*a.duration) << ")\n";
  os << (d ? "    :condition (and" : "    :precondition (and");
  for (const auto& p : a.preconditions) {
    os << (d ? " (at start " + app(p) + ")" : " " + app(p));
  }
  os << ")\n    :effect (and";
  auto wrap = [d](const std::string& s) { return d ? "(at end " + s + ")" : s; };
  for (const auto& p : a.del_effects) os << " " << wrap("(not " + app(p) + ")");
  for (const auto& p : a.add_effects) os << " " << wrap(app(p));
  if (a.cost) os << " " << wrap(std::string("(increase (") + kCostFluent + ") " + numeric(*a.cost) + ")");
  if (a.risk) os << " " << wrap(std::string("(increase (") + kRiskFluent + ") " + numeric(*a.risk) + ")");
  os << "))\n";
}

}  // namespace

std::string print_domain(const DomainAst& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  os << "  (:requirements";
  for (const auto& r : d.requirements) os << ' ' << r;
  os << ")\n";
  if (!d.types.empty()) os << "  (:types " << typed(d.types) << ")\n";
  os << "  (:predicates";
  for (const auto& p : d.predicates) os << " (" << p.name << (p.params.empty() ? "" : " ") << typed(p.params) << ")";
  os << ")\n";
  if (!d.functions.empty()) {
    os << "  (:functions";
    for (const auto& f : d.functions) os << " (" << f.name << (f.params.empty() ? "" : " ") << typed(f.params) << ")";
    os << ")\n";
  }
  for (const auto& a : d.actions) print_action(os, a);
  os << ")\n";
  return os.str();
}

std::string print_problem(const ProblemAst& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain_name << ")\n";
  os << "  (:objects " << typed(p.objects) << ")\n";
  os << "  (:init";
  for (const auto& a : p.init) os << "\n    " << app(a);
  for (const auto& f : p.numeric_init) os << "\n    (= " << app(f.term) << " " << f.value << ")";
  os << ")\n";
  os << "  (:goal (and";
  for (const auto& g : p.goal) os << " " << app(g);
  os << "))\n";
  os << "  (:metric minimize ("
     << (p.metric == planning::ObjectiveMode::CostSum ? kCostFluent : kRiskFluent) << ")))\n";
  return os.str();
}

}  // namespace modae::pddl
