#pragma once

#include <map>
#include <string>

#include "gfm/expr.hpp"

namespace gfm {

struct ParseError : KernelError {
  int line, col;
  ParseError(const std::string& what, int line_, int col_)
      : KernelError(what), line(line_), col(col_) {}
};

// Recursive-descent parser for the expression grammar:
//   infix + - * / ^, integer literals, declared atom names,
//   exp(...ration linear forms...), log(...), root(expr, k),
//   jets v', v'', v^(3).
// Scope maps declared names to coordinate/parameter atoms; anything else
// raises UndeclaredAtom (as a ParseError with position).
class ExprParser {
 public:
  explicit ExprParser(std::map<std::string, AtomId> scope)
      : scope_(std::move(scope)) {}

  Expr parse(const std::string& text, int line_for_errors = 0) const;

 private:
  std::map<std::string, AtomId> scope_;
};

}  // namespace gfm
