#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "modae/core/decimal.hpp"
#include "modae/pddl/pddl.hpp"
#include "sexpr.hpp"

namespace modae::pddl {

using detail::SExpr;

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& what) {
  throw ParseError(at.line, at.column, what);
}

const SExpr& expect_list(const SExpr& e, const std::string& what) {
  if (!e.is_list) fail(e, "expected " + what);
  return e;
}

const std::string& expect_symbol(const SExpr& e, const std::string& what) {
  if (e.is_list || e.symbol.empty()) fail(e, "expected " + what);
  return e.symbol;
}

bool is_variable(const std::string& s) { return !s.empty() && s.front() == '?'; }

// `a b - t c - u d` → {(a,t),(b,t),(c,u),(d,object)}.
std::vector<TypedName> typed_list(const std::vector<SExpr>& items, std::size_t from) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = from; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.is_list) fail(it, "unexpected list in typed list (either-types are not supported)");
    if (it.symbol == "-") {
      if (i + 1 >= items.size()) fail(it, "missing type after '-'");
      const auto& type = items[i + 1];
      if (type.is_list) fail(type, "either-types are not supported");
      if (pending == 0) fail(it, "type annotation without names");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type.symbol;
      pending = 0;
      ++i;
      continue;
    }
    out.push_back(TypedName{it.symbol, "object"});
    ++pending;
  }
  return out;
}

const std::set<std::string>& supported_requirements() {
  static const std::set<std::string> flags{":strips",          ":typing",
                                           ":durative-actions", ":numeric-fluents",
                                           ":fluents",          ":action-costs"};
  return flags;
}

// Lookup tables shared by the domain validator and the problem parser.
struct DomainIndex {
  std::map<std::string, std::string> parent;  // type -> parent
  std::map<std::string, const Signature*> predicates;
  std::map<std::string, const Signature*> functions;

  explicit DomainIndex(const DomainAst& d) {
    parent["object"] = "";
    for (const auto& t : d.types) parent[t.name] = t.type;
    for (const auto& p : d.predicates) predicates[p.name] = &p;
    for (const auto& f : d.functions) functions[f.name] = &f;
  }

  bool has_type(const std::string& t) const { return parent.count(t) != 0; }

  bool is_subtype(std::string t, const std::string& of) const {
    for (int guard = 0; guard < 1000 && !t.empty(); ++guard) {
      if (t == of) return true;
      auto it = parent.find(t);
      if (it == parent.end()) return false;
      t = it->second;
    }
    return false;
  }
};

class DomainParser {
 public:
  DomainAst parse(const SExpr& root) {
    expect_list(root, "(define ...)");
    if (!root.has_head("define")) fail(root, "expected (define (domain ...) ...)");
    if (root.items.size() < 2) fail(root, "missing domain name");
    const auto& header = expect_list(root.items[1], "(domain NAME)");
    if (!header.has_head("domain") || header.items.size() != 2) {
      fail(header, "expected (domain NAME)");
    }
    ast_.name = expect_symbol(header.items[1], "domain name");

    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const auto& section = expect_list(root.items[i], "domain section");
      if (section.items.empty()) fail(section, "empty section");
      const auto& key = expect_symbol(section.items[0], "section keyword");
      if (key == ":requirements") {
        requirements(section);
      } else if (key == ":types") {
        types(section);
      } else if (key == ":predicates") {
        signatures(section, ast_.predicates, "predicate");
      } else if (key == ":functions") {
        functions(section);
      } else if (key == ":action" || key == ":durative-action") {
        actions_src_.push_back(&section);
      } else {
        fail(section.items[0], "unsupported domain section '" + key + "'");
      }
    }
    index_ = std::make_unique<DomainIndex>(ast_);
    check_types();
    for (const auto* a : actions_src_) ast_.actions.push_back(action(*a));
    return std::move(ast_);
  }

 private:
  void requirements(const SExpr& s) {
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      const auto& flag = expect_symbol(s.items[i], "requirement flag");
      if (!supported_requirements().count(flag)) {
        fail(s.items[i], "unknown requirement flag '" + flag + "'");
      }
      ast_.requirements.push_back(flag);
    }
  }

  void types(const SExpr& s) {
    for (auto& t : typed_list(s.items, 1)) ast_.types.push_back(std::move(t));
    types_at_ = &s;
  }

  void check_types() {
    for (const auto& t : ast_.types) {
      if (t.type != "object" && !index_->has_type(t.type)) {
        fail(*types_at_, "undeclared parent type '" + t.type + "'");
      }
    }
  }

  void signatures(const SExpr& s, std::vector<Signature>& out, const std::string& what) {
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      const auto& item = s.items[i];
      if (!item.is_list && item.symbol == "-") {
        // `- number` after a function list
        if (i + 1 < s.items.size() && s.items[i + 1].is_symbol("number")) {
          ++i;
          continue;
        }
        fail(item, "unexpected '-' in " + what + " list");
      }
      expect_list(item, what + " declaration");
      if (item.items.empty()) fail(item, "empty " + what + " declaration");
      Signature sig;
      sig.name = expect_symbol(item.items[0], what + " name");
      sig.params = typed_list(item.items, 1);
      out.push_back(std::move(sig));
    }
  }

  void functions(const SExpr& s) { signatures(s, ast_.functions, "function"); }

  void check_param_type(const SExpr& at, const std::string& type) {
    if (!index_->has_type(type)) fail(at, "undeclared type '" + type + "'");
  }

  Application application(const SExpr& e, const std::map<std::string, std::string>& params,
                          bool function) {
    expect_list(e, function ? "function term" : "atom");
    if (e.items.empty()) fail(e, "empty atom");
    Application app;
    app.head = expect_symbol(e.items[0], function ? "function name" : "predicate name");
    const auto& table = function ? index_->functions : index_->predicates;
    auto it = table.find(app.head);
    if (it == table.end()) {
      fail(e, std::string(function ? "undeclared function '" : "undeclared predicate '") +
                  app.head + "'");
    }
    const Signature& sig = *it->second;
    if (sig.params.size() + 1 != e.items.size()) {
      fail(e, "arity mismatch for '" + app.head + "'");
    }
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      const auto& arg = expect_symbol(e.items[k], "argument");
      if (!is_variable(arg)) fail(e.items[k], "constants in action schemas are not supported");
      auto p = params.find(arg);
      if (p == params.end()) fail(e.items[k], "unbound variable '" + arg + "'");
      if (!index_->is_subtype(p->second, sig.params[k - 1].type)) {
        fail(e.items[k], "variable '" + arg + "' of type " + p->second +
                             " does not match parameter type " + sig.params[k - 1].type);
      }
      app.args.push_back(arg);
    }
    return app;
  }

  NumericExpr numeric(const SExpr& e, const std::map<std::string, std::string>& params) {
    NumericExpr out;
    if (!e.is_list) {
      try {
        (void)parse_decimal(e.symbol);
      } catch (const Error&) {
        fail(e, "expected a number or function term, got '" + e.symbol + "'");
      }
      out.literal = e.symbol;
      return out;
    }
    out.term = application(e, params, true);
    return out;
  }

  void condition(const SExpr& e, bool durative, bool timed,
                 const std::map<std::string, std::string>& params, ActionSchema& a) {
    expect_list(e, "condition");
    if (e.items.empty()) fail(e, "empty condition");
    if (e.has_head("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) condition(e.items[i], durative, timed, params, a);
      return;
    }
    if (durative && !timed && (e.has_head("at") || e.has_head("over")) && e.items.size() == 3 &&
        !e.items[1].is_list && !is_variable(e.items[1].symbol)) {
      const auto& when = e.items[1].symbol;
      if (e.has_head("at") && when == "start") {
        condition(e.items[2], durative, true, params, a);
        return;
      }
      fail(e, "only 'at start' conditions are supported");
    }
    if (durative && !timed) fail(e, "durative conditions must be wrapped in (at start ...)");
    if (e.has_head("not")) fail(e, "negative preconditions are not supported");
    if (e.has_head("or") || e.has_head("forall") || e.has_head("exists") || e.has_head("imply")) {
      fail(e, "unsupported condition '" + e.items[0].symbol + "'");
    }
    a.preconditions.push_back(application(e, params, false));
  }

  void effect(const SExpr& e, bool durative, bool timed,
              const std::map<std::string, std::string>& params, ActionSchema& a) {
    expect_list(e, "effect");
    if (e.items.empty()) fail(e, "empty effect");
    if (e.has_head("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) effect(e.items[i], durative, timed, params, a);
      return;
    }
    if (durative && !timed && e.has_head("at") && e.items.size() == 3 && !e.items[1].is_list &&
        !is_variable(e.items[1].symbol)) {
      if (e.items[1].symbol == "end") {
        effect(e.items[2], durative, true, params, a);
        return;
      }
      fail(e, "only 'at end' effects are supported");
    }
    if (durative && !timed) fail(e, "durative effects must be wrapped in (at end ...)");
    if (e.has_head("not")) {
      if (e.items.size() != 2) fail(e, "malformed negative effect");
      a.del_effects.push_back(application(e.items[1], params, false));
      return;
    }
    if (e.has_head("increase")) {
      if (e.items.size() != 3) fail(e, "malformed increase effect");
      const auto& target = expect_list(e.items[1], "fluent");
      if (target.items.size() != 1) fail(target, "only 0-ary bookkeeping fluents may be increased");
      const auto& fluent = expect_symbol(target.items[0], "fluent name");
      if (!index_->functions.count(fluent)) fail(target, "undeclared function '" + fluent + "'");
      auto value = numeric(e.items[2], params);
      if (fluent == kCostFluent) {
        if (a.cost) fail(e, "duplicate total-cost increase");
        a.cost = std::move(value);
      } else if (fluent == kRiskFluent) {
        if (a.risk) fail(e, "duplicate max-risk increase");
        a.risk = std::move(value);
      } else {
        fail(target, "only total-cost and max-risk may be increased");
      }
      return;
    }
    if (e.has_head("decrease") || e.has_head("assign") || e.has_head("forall") ||
        e.has_head("when") || e.has_head("scale-up") || e.has_head("scale-down")) {
      fail(e, "unsupported effect '" + e.items[0].symbol + "'");
    }
    a.add_effects.push_back(application(e, params, false));
  }

  ActionSchema action(const SExpr& s) {
    ActionSchema a;
    a.durative = s.items[0].symbol == ":durative-action";
    if (s.items.size() < 2) fail(s, "missing action name");
    a.name = expect_symbol(s.items[1], "action name");
    std::map<std::string, std::string> params;
    const SExpr* cond = nullptr;
    const SExpr* eff = nullptr;
    const SExpr* dur = nullptr;
    for (std::size_t i = 2; i < s.items.size(); i += 2) {
      const auto& key = expect_symbol(s.items[i], "action keyword");
      if (i + 1 >= s.items.size()) fail(s.items[i], "missing value for " + key);
      const auto& value = s.items[i + 1];
      if (key == ":parameters") {
        expect_list(value, "parameter list");
        a.params = typed_list(value.items, 0);
        for (const auto& p : a.params) {
          if (!is_variable(p.name)) fail(value, "parameter '" + p.name + "' must start with '?'");
          check_param_type(value, p.type);
          if (!params.emplace(p.name, p.type).second) fail(value, "duplicate parameter " + p.name);
        }
      } else if (key == ":duration" && a.durative) {
        dur = &value;
      } else if ((key == ":condition" && a.durative) || (key == ":precondition" && !a.durative)) {
        cond = &value;
      } else if (key == ":effect") {
        eff = &value;
      } else {
        fail(s.items[i], "unsupported action keyword '" + key + "'");
      }
    }
    if (a.durative) {
      if (!dur) fail(s, "durative action '" + a.name + "' has no :duration");
      expect_list(*dur, "(= ?duration ...)");
      if (!dur->has_head("=") || dur->items.size() != 3 || !dur->items[1].is_symbol("?duration")) {
        fail(*dur, "expected (= ?duration <number or function term>)");
      }
      a.duration = numeric(dur->items[2], params);
    }
    if (cond) condition(*cond, a.durative, false, params, a);
    if (eff) effect(*eff, a.durative, false, params, a);
    return a;
  }

  DomainAst ast_;
  std::vector<const SExpr*> actions_src_;
  const SExpr* types_at_ = nullptr;
  std::unique_ptr<DomainIndex> index_;
};

class ProblemParser {
 public:
  explicit ProblemParser(const DomainAst& d) : domain_(d), index_(d) {}

  ProblemAst parse(const SExpr& root) {
    expect_list(root, "(define ...)");
    if (!root.has_head("define")) fail(root, "expected (define (problem ...) ...)");
    if (root.items.size() < 2) fail(root, "missing problem name");
    const auto& header = expect_list(root.items[1], "(problem NAME)");
    if (!header.has_head("problem") || header.items.size() != 2) {
      fail(header, "expected (problem NAME)");
    }
    ast_.name = expect_symbol(header.items[1], "problem name");
    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const auto& section = expect_list(root.items[i], "problem section");
      if (section.items.empty()) fail(section, "empty section");
      const auto& key = expect_symbol(section.items[0], "section keyword");
      if (key == ":domain") {
        if (section.items.size() != 2) fail(section, "expected (:domain NAME)");
        ast_.domain_name = expect_symbol(section.items[1], "domain name");
        if (ast_.domain_name != domain_.name) {
          fail(section, "problem is for domain '" + ast_.domain_name + "', not '" +
                            domain_.name + "'");
        }
      } else if (key == ":objects") {
        for (auto& o : typed_list(section.items, 1)) {
          if (!index_.has_type(o.type)) fail(section, "unknown type '" + o.type + "'");
          if (!objects_.emplace(o.name, o.type).second) {
            fail(section, "duplicate object '" + o.name + "'");
          }
          ast_.objects.push_back(std::move(o));
        }
      } else if (key == ":init") {
        init = &section;
      } else if (key == ":goal") {
        goal = &section;
      } else if (key == ":metric") {
        metric(section);
      } else if (key == ":requirements") {
        continue;
      } else {
        fail(section.items[0], "unsupported problem section '" + key + "'");
      }
    }
    if (ast_.domain_name.empty()) fail(root, "problem does not name its domain");
    if (init) {
      for (std::size_t i = 1; i < init->items.size(); ++i) init_item(init->items[i]);
    }
    if (!goal) fail(root, "problem has no :goal");
    if (goal->items.size() != 2) fail(*goal, "expected (:goal <condition>)");
    goal_item(goal->items[1]);
    return std::move(ast_);
  }

 private:
  Application ground_app(const SExpr& e, bool function) {
    expect_list(e, function ? "function term" : "ground atom");
    if (e.items.empty()) fail(e, "empty atom");
    Application app;
    app.head = expect_symbol(e.items[0], "name");
    const auto& table = function ? index_.functions : index_.predicates;
    auto it = table.find(app.head);
    if (it == table.end()) {
      fail(e, std::string(function ? "undeclared function '" : "undeclared predicate '") +
                  app.head + "'");
    }
    const Signature& sig = *it->second;
    if (sig.params.size() + 1 != e.items.size()) fail(e, "arity mismatch for '" + app.head + "'");
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      const auto& arg = expect_symbol(e.items[k], "object");
      if (is_variable(arg)) fail(e.items[k], "non-ground argument '" + arg + "'");
      auto o = objects_.find(arg);
      if (o == objects_.end()) fail(e.items[k], "unknown object '" + arg + "'");
      if (!index_.is_subtype(o->second, sig.params[k - 1].type)) {
        fail(e.items[k], "object '" + arg + "' of type " + o->second +
                             " does not match parameter type " + sig.params[k - 1].type);
      }
      app.args.push_back(arg);
    }
    return app;
  }

  void init_item(const SExpr& e) {
    expect_list(e, "initial literal");
    if (e.has_head("=")) {
      if (e.items.size() != 3 || e.items[2].is_list) fail(e, "expected (= (f args) number)");
      NumericFact fact;
      fact.term = ground_app(e.items[1], true);
      try {
        (void)parse_decimal(e.items[2].symbol);
      } catch (const Error&) {
        fail(e.items[2], "malformed number '" + e.items[2].symbol + "'");
      }
      fact.value = e.items[2].symbol;
      ast_.numeric_init.push_back(std::move(fact));
      return;
    }
    if (e.has_head("not")) fail(e, "negative initial literals are not supported");
    ast_.init.push_back(ground_app(e, false));
  }

  void goal_item(const SExpr& e) {
    expect_list(e, "goal condition");
    if (e.has_head("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) goal_item(e.items[i]);
      return;
    }
    if (e.has_head("not") || e.has_head("or") || e.has_head("preference")) {
      fail(e, "only conjunctions of atoms are supported as goals");
    }
    ast_.goal.push_back(ground_app(e, false));
  }

  void metric(const SExpr& s) {
    if (s.items.size() != 3 || !s.items[1].is_symbol("minimize")) {
      fail(s, "expected (:metric minimize (<fluent>))");
    }
    const auto& f = expect_list(s.items[2], "metric fluent");
    if (f.items.size() != 1) fail(f, "metric must be a 0-ary fluent");
    const auto& name = expect_symbol(f.items[0], "fluent");
    if (name == kCostFluent) {
      ast_.metric = planning::ObjectiveMode::CostSum;
    } else if (name == kRiskFluent) {
      ast_.metric = planning::ObjectiveMode::RiskMax;
    } else {
      fail(f, "metric must be total-cost or max-risk");
    }
  }

  const DomainAst& domain_;
  DomainIndex index_;
  std::map<std::string, std::string> objects_;
  ProblemAst ast_;
};

}  // namespace

DomainAst parse_domain(std::string_view text) {
  return DomainParser().parse(detail::read_document(text));
}

ProblemAst parse_problem(std::string_view text, const DomainAst& domain) {
  return ProblemParser(domain).parse(detail::read_document(text));
}

}  // namespace modae::pddl
