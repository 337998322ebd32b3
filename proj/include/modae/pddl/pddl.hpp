#pragma once

#include <string>
#include <string_view>

#include "modae/core/error.hpp"
#include "modae/pddl/ast.hpp"
#include "modae/planning/task.hpp"

namespace modae::pddl {

/// Syntax or semantic error in a PDDL document, located at line:column (1-based).
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Supported subset: :strips, :typing, :durative-actions, numeric constants read
// into durations and the total-cost / max-risk bookkeeping fluents. Durative
// conditions must be `at start`, durative effects `at end`. Plain `:action`
// schemas get unit duration.
DomainAst parse_domain(std::string_view text);
ProblemAst parse_problem(std::string_view text, const DomainAst& domain);

std::string print_domain(const DomainAst& domain);
std::string print_problem(const ProblemAst& problem);

/// Instantiates every type-consistent action whose static preconditions hold
/// in the initial state, keeps those reachable in the delete relaxation, and
/// numbers atoms and actions in lexicographic name order.
planning::GroundedTask ground(const DomainAst& domain, const ProblemAst& problem);

/// Deterministic plain-text listing of a grounded task.
std::string dump_grounding(const planning::GroundedTask& task);

}  // namespace modae::pddl
