#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace modae::pddl::detail {

// One node of a PDDL s-expression tree. Symbols are lower-cased.
struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
  bool has_head(std::string_view s) const {
    return is_list && !items.empty() && items.front().is_symbol(s);
  }
};

// Reads exactly one top-level expression; trailing content is an error.
SExpr read_document(std::string_view text);

}  // namespace modae::pddl::detail
