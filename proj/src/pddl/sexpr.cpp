#include "sexpr.hpp"

#include <cctype>

#include "modae/pddl/pddl.hpp"

namespace modae::pddl::detail {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr document() {
    skip_blank();
    if (at_end()) throw ParseError(line_, column_, "unexpected end of input");
    SExpr root = expr();
    skip_blank();
    if (!at_end()) throw ParseError(line_, column_, "unexpected content after the document");
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (!at_end() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr expr() {
    SExpr node;
    node.line = line_;
    node.column = column_;
    const char c = text_[pos_];
    if (c == ')') throw ParseError(line_, column_, "unexpected ')'");
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_blank();
        if (at_end()) throw ParseError(line_, column_, "unexpected end of input, missing ')'");
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        node.items.push_back(expr());
      }
    }
    while (!at_end()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      node.symbol.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

SExpr read_document(std::string_view text) { return Reader(text).document(); }

}  // namespace modae::pddl::detail
