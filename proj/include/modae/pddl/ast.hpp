#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modae/planning/task.hpp"

namespace modae::pddl {

struct TypedName {
  std::string name;
  std::string type;  // "object" when untyped

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

// Predicate or function application; arguments are ?variables or object names.
struct Application {
  std::string head;
  std::vector<std::string> args;

  friend bool operator==(const Application&, const Application&) = default;
};

// Either a numeric literal (kept verbatim) or a function application.
struct NumericExpr {
  std::optional<std::string> literal;
  Application term;

  friend bool operator==(const NumericExpr&, const NumericExpr&) = default;
};

struct Signature {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct ActionSchema {
  std::string name;
  bool durative = false;
  std::vector<TypedName> params;
  std::optional<NumericExpr> duration;
  std::vector<Application> preconditions;
  std::vector<Application> add_effects;
  std::vector<Application> del_effects;
  std::optional<NumericExpr> cost;  // (increase (total-cost) e)
  std::optional<NumericExpr> risk;  // (increase (max-risk) e)

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // name - parent
  std::vector<Signature> predicates;
  std::vector<Signature> functions;
  std::vector<ActionSchema> actions;

  friend bool operator==(const DomainAst&, const DomainAst&) = default;
};

struct NumericFact {
  Application term;
  std::string value;

  friend bool operator==(const NumericFact&, const NumericFact&) = default;
};

struct ProblemAst {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Application> init;
  std::vector<NumericFact> numeric_init;
  std::vector<Application> goal;
  planning::ObjectiveMode metric = planning::ObjectiveMode::CostSum;

  friend bool operator==(const ProblemAst&, const ProblemAst&) = default;
};

inline constexpr const char* kCostFluent = "total-cost";
inline constexpr const char* kRiskFluent = "max-risk";

}  // namespace modae::pddl
