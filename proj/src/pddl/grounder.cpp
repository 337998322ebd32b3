#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "modae/core/decimal.hpp"
#include "modae/pddl/pddl.hpp"

namespace modae::pddl {

namespace {

using planning::ActionId;
using planning::AtomId;

std::string atom_name(const std::string& head, const std::vector<std::string>& args) {
  std::string out = "(" + head;
  for (const auto& a : args) out += " " + a;
  return out + ")";
}

struct Candidate {
  std::string name;
  std::vector<std::string> pre, add, del;
  Decimal duration{1, 1};
  Decimal cost{0, 1};
  Decimal risk{0, 1};
};

class Grounder {
 public:
  Grounder(const DomainAst& d, const ProblemAst& p) : domain_(d), problem_(p) {
    parent_["object"] = "";
    for (const auto& t : d.types) parent_[t.name] = t.type;
    for (const auto& a : d.actions) {
      for (const auto& e : a.add_effects) fluent_.insert(e.head);
      for (const auto& e : a.del_effects) fluent_.insert(e.head);
    }
    for (const auto& f : p.init) {
      const auto name = atom_name(f.head, f.args);
      if (fluent_.count(f.head)) {
        init_fluents_.push_back(name);
      } else {
        static_facts_.insert(name);
      }
    }
    for (const auto& f : p.numeric_init) {
      numeric_[atom_name(f.term.head, f.term.args)] = parse_decimal(f.value);
    }
  }

  planning::GroundedTask run() {
    enumerate_atoms();
    for (const auto& schema : domain_.actions) instantiate(schema);

    std::map<std::string, AtomId> atom_ids;
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_ids[atoms_[i]] = static_cast<AtomId>(i);

    // Delete-relaxed reachability from the initial state.
    std::set<std::string> reached(init_fluents_.begin(), init_fluents_.end());
    std::vector<bool> kept(candidates_.size(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < candidates_.size(); ++i) {
        if (kept[i]) continue;
        const auto& c = candidates_[i];
        if (!std::all_of(c.pre.begin(), c.pre.end(),
                         [&](const std::string& a) { return reached.count(a) != 0; })) {
          continue;
        }
        kept[i] = true;
        changed = true;
        for (const auto& a : c.add) reached.insert(a);
      }
    }

    std::vector<Candidate> live;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      if (kept[i]) live.push_back(std::move(candidates_[i]));
    }
    std::sort(live.begin(), live.end(),
              [](const Candidate& a, const Candidate& b) { return a.name < b.name; });

    planning::GroundedTask::Scales scales;
    for (const auto& c : live) {
      scales.time_denominator = std::max(scales.time_denominator, c.duration.denominator);
      scales.cost_denominator = std::max(scales.cost_denominator, c.cost.denominator);
      scales.risk_denominator = std::max(scales.risk_denominator, c.risk.denominator);
    }

    auto ids = [&](const std::vector<std::string>& names) {
      std::vector<AtomId> out;
      out.reserve(names.size());
      for (const auto& n : names) out.push_back(atom_ids.at(n));
      return out;
    };

    std::vector<planning::GroundedAction> actions;
    actions.reserve(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      auto& c = live[i];
      planning::GroundedAction a;
      a.id = static_cast<ActionId>(i);
      a.name = c.name;
      a.preconditions = ids(c.pre);
      a.add_effects = ids(c.add);
      a.del_effects = ids(c.del);
      // Atoms both added and deleted end up true.
      std::erase_if(a.del_effects, [&](AtomId x) {
        return std::find(a.add_effects.begin(), a.add_effects.end(), x) != a.add_effects.end();
      });
      a.duration = c.duration.scaled_to(scales.time_denominator);
      a.cost = c.cost.scaled_to(scales.cost_denominator);
      a.risk = c.risk.scaled_to(scales.risk_denominator);
      if (a.duration < 0 || a.cost < 0 || a.risk < 0) {
        throw Error("action " + a.name + " has a negative duration, cost or risk");
      }
      actions.push_back(std::move(a));
    }

    std::vector<AtomId> init = ids(init_fluents_);
    std::vector<AtomId> goal;
    for (const auto& g : problem_.goal) {
      const auto name = atom_name(g.head, g.args);
      if (fluent_.count(g.head)) {
        goal.push_back(atom_ids.at(name));
      } else if (!static_facts_.count(name)) {
        throw Error("goal requires static fact " + name + " which is false");
      }
    }
    return planning::GroundedTask(atoms_, std::move(actions), std::move(init), std::move(goal),
                                  problem_.metric, scales);
  }

 private:
  bool is_subtype(std::string t, const std::string& of) const {
    for (int guard = 0; guard < 1000 && !t.empty(); ++guard) {
      if (t == of) return true;
      auto it = parent_.find(t);
      if (it == parent_.end()) return false;
      t = it->second;
    }
    return false;
  }

  std::vector<std::string> objects_of(const std::string& type) const {
    std::vector<std::string> out;
    for (const auto& o : problem_.objects) {
      if (is_subtype(o.type, type)) out.push_back(o.name);
    }
    return out;
  }

  void enumerate_atoms() {
    for (const auto& pred : domain_.predicates) {
      if (!fluent_.count(pred.name)) continue;
      std::vector<std::vector<std::string>> domains;
      for (const auto& p : pred.params) domains.push_back(objects_of(p.type));
      std::vector<std::string> args(pred.params.size());
      product(domains, args, 0, [&] { atoms_.push_back(atom_name(pred.name, args)); });
    }
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  }

  template <class F>
  void product(const std::vector<std::vector<std::string>>& domains,
               std::vector<std::string>& args, std::size_t k, F&& emit) {
    if (k == domains.size()) {
      emit();
      return;
    }
    for (const auto& v : domains[k]) {
      args[k] = v;
      product(domains, args, k + 1, emit);
    }
  }

  Decimal evaluate(const NumericExpr& e, const std::map<std::string, std::string>& binding) const {
    if (e.literal) return parse_decimal(*e.literal);
    auto name = atom_name(e.term.head, substitute(e.term.args, binding));
    auto it = numeric_.find(name);
    if (it == numeric_.end()) throw Error("no value given for numeric term " + name);
    return it->second;
  }

  static std::vector<std::string> substitute(const std::vector<std::string>& args,
                                             const std::map<std::string, std::string>& binding) {
    std::vector<std::string> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(binding.at(a));
    return out;
  }

  void instantiate(const ActionSchema& schema) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : schema.params) domains.push_back(objects_of(p.type));

    // Static preconditions are checked as soon as their last variable is bound.
    std::vector<std::vector<const Application*>> checks(schema.params.size() + 1);
    for (const auto& pre : schema.preconditions) {
      if (fluent_.count(pre.head)) continue;
      std::size_t last = 0;
      for (const auto& arg : pre.args) {
        for (std::size_t k = 0; k < schema.params.size(); ++k) {
          if (schema.params[k].name == arg) last = std::max(last, k + 1);
        }
      }
      checks[last].push_back(&pre);
    }

    std::map<std::string, std::string> binding;
    auto holds = [&](std::size_t level) {
      for (const auto* pre : checks[level]) {
        if (!static_facts_.count(atom_name(pre->head, substitute(pre->args, binding)))) {
          return false;
        }
      }
      return true;
    };
    if (!holds(0)) return;

    std::vector<std::string> values(schema.params.size());
    auto recurse = [&](auto&& self, std::size_t k) -> void {
      if (k == schema.params.size()) {
        emit(schema, binding, values);
        return;
      }
      for (const auto& v : domains[k]) {
        binding[schema.params[k].name] = v;
        values[k] = v;
        if (holds(k + 1)) self(self, k + 1);
      }
      binding.erase(schema.params[k].name);
    };
    recurse(recurse, 0);
  }

  void emit(const ActionSchema& schema, const std::map<std::string, std::string>& binding,
            const std::vector<std::string>& values) {
    Candidate c;
    c.name = atom_name(schema.name, values);
    for (const auto& p : schema.preconditions) {
      if (fluent_.count(p.head)) c.pre.push_back(atom_name(p.head, substitute(p.args, binding)));
    }
    for (const auto& p : schema.add_effects) {
      c.add.push_back(atom_name(p.head, substitute(p.args, binding)));
    }
    for (const auto& p : schema.del_effects) {
      c.del.push_back(atom_name(p.head, substitute(p.args, binding)));
    }
    if (schema.duration) c.duration = evaluate(*schema.duration, binding);
    if (schema.cost) c.cost = evaluate(*schema.cost, binding);
    if (schema.risk) c.risk = evaluate(*schema.risk, binding);
    candidates_.push_back(std::move(c));
  }

  const DomainAst& domain_;
  const ProblemAst& problem_;
  std::map<std::string, std::string> parent_;
  std::set<std::string> fluent_;
  std::set<std::string> static_facts_;
  std::vector<std::string> init_fluents_;
  std::map<std::string, Decimal> numeric_;
  std::vector<std::string> atoms_;
  std::vector<Candidate> candidates_;
};

}  // namespace

planning::GroundedTask ground(const DomainAst& domain, const ProblemAst& problem) {
  return Grounder(domain, problem).run();
}

std::string dump_grounding(const planning::GroundedTask& task) {
  std::ostringstream os;
  const auto& sc = task.scales();
  auto list = [&os](const std::vector<AtomId>& ids) {
    for (auto id : ids) os << ' ' << id;
    os << '\n';
  };
  os << "mode " << planning::to_string(task.mode()) << '\n';
  os << "atoms " << task.atom_count() << '\n';
  for (const auto& a : task.atoms()) os << a.id << ' ' << a.name << '\n';
  os << "actions " << task.action_count() << '\n';
  for (const auto& a : task.actions()) {
    os << a.id << ' ' << a.name << " duration " << format_scaled(a.duration, sc.time_denominator)
       << " cost " << format_scaled(a.cost, sc.cost_denominator) << " risk "
       << format_scaled(a.risk, sc.risk_denominator) << '\n';
    os << "  pre";
    list(a.preconditions);
    os << "  add";
    list(a.add_effects);
    os << "  del";
    list(a.del_effects);
  }
  os << "init";
  list(task.init().atoms());
  os << "goal";
  list(task.goal());
  return os.str();
}

}  // namespace modae::pddl
