#include "gfm/parser.hpp"

#include <cctype>

namespace gfm {

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  int line;
  const std::map<std::string, AtomId>& scope;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, (int)i + 1);
  }
  void skip_ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool peek(char c) {
    skip_ws();
    return i < s.size() && s[i] == c;
  }
  bool at_end() {
    skip_ws();
    return i >= s.size();
  }

  long integer() {
    skip_ws();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    if (i >= s.size() || !std::isdigit((unsigned char)s[i])) fail("expected integer");
    long v = 0;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) {
      v = v * 10 + (s[i++] - '0');
      if (v < 0) fail("integer literal too large");
    }
    return neg ? -v : v;
  }

  std::string ident() {
    skip_ws();
    if (i >= s.size() ||
        !(std::isalpha((unsigned char)s[i]) || s[i] == '_'))
      fail("expected identifier");
    size_t b = i;
    while (i < s.size() &&
           (std::isalnum((unsigned char)s[i]) || s[i] == '_'))
      ++i;
    return s.substr(b, i - b);
  }

  Expr parse_expr();
  Expr parse_term();
  Expr parse_factor();
  Expr parse_primary();
};

Expr Cursor::parse_expr() {
  bool neg = false;
  skip_ws();
  if (peek('-')) {
    ++i;
    neg = true;
  } else if (peek('+')) {
    ++i;
  }
  Expr acc = parse_term();
  if (neg) acc = -acc;
  while (true) {
    skip_ws();
    if (peek('+')) {
      ++i;
      acc += parse_term();
    } else if (peek('-')) {
      ++i;
      acc -= parse_term();
    } else {
      break;
    }
  }
  return acc;
}

Expr Cursor::parse_term() {
  Expr acc = parse_factor();
  while (true) {
    skip_ws();
    if (peek('*')) {
      ++i;
      acc = acc * parse_factor();
    } else if (peek('/')) {
      ++i;
      Expr d = parse_factor();
      if (d.is_zero()) fail("division by zero expression");
      acc = acc / d;
    } else {
      break;
    }
  }
  return acc;
}

Expr Cursor::parse_factor() {
  Expr base = parse_primary();
  skip_ws();
  if (peek('^')) {
    size_t save = i;
    ++i;
    skip_ws();
    if (i < s.size() && s[i] == '(') {
      // jet syntax handled inside primary; '^(' after a general factor is
      // not a power.
      i = save;
      return base;
    }
    long e = integer();
    return base.pow(e);
  }
  return base;
}

Expr Cursor::parse_primary() {
  skip_ws();
  if (at_end()) fail("unexpected end of expression");
  char c = s[i];
  if (std::isdigit((unsigned char)c)) {
    long v = integer();
    return Expr(Rat(v));
  }
  if (c == '(') {
    ++i;
    Expr e = parse_expr();
    expect(')');
    return e;
  }
  if (c == '-') {
    ++i;
    return -parse_primary();
  }
  std::string name = ident();
  if (name == "exp" && peek('(')) {
    ++i;
    Expr inner = parse_expr();
    expect(')');
    return exp_of_expr(inner);
  }
  if (name == "log" && peek('(')) {
    ++i;
    Expr inner = parse_expr();
    expect(')');
    if (inner.is_rat()) {
      // log of a rational constant splits into prime logs.
      return log_of(inner);
    }
    return log_of(inner);
  }
  if (name == "root" && peek('(')) {
    ++i;
    Expr inner = parse_expr();
    expect(',');
    long k = integer();
    expect(')');
    if (k < 1) fail("root index must be >= 1");
    return root_of(inner, (int)k);
  }
  auto it = scope.find(name);
  if (it == scope.end()) fail("undeclared atom '" + name + "'");
  AtomId id = it->second;
  // Jet suffixes.
  int order = 0;
  while (i < s.size() && s[i] == '\'') {
    ++order;
    ++i;
  }
  if (order == 0 && i + 1 < s.size() && s[i] == '^' && s[i + 1] == '(') {
    size_t save = i;
    i += 2;
    skip_ws();
    if (i < s.size() && std::isdigit((unsigned char)s[i])) {
      long o = integer();
      skip_ws();
      if (i < s.size() && s[i] == ')') {
        ++i;
        order = (int)o;
      } else {
        i = save;
      }
    } else {
      i = save;
    }
  }
  if (order > 0) {
    if (atom_info(id).kind != AtomKind::Coord)
      fail("jet of a non-coordinate '" + name + "'");
    return Expr::atom(AtomTable::instance().jet(id, order));
  }
  return Expr::atom(id);
}

}  // namespace

Expr ExprParser::parse(const std::string& text, int line_for_errors) const {
  Cursor c{text, 0, line_for_errors, scope_};
  try {
    Expr e = c.parse_expr();
    c.skip_ws();
    if (!c.at_end()) c.fail("trailing input");
    return e;
  } catch (const ParseError&) {
    throw;
  } catch (const KernelError& e) {
    throw ParseError(e.what(), line_for_errors, (int)c.i + 1);
  }
}

}  // namespace gfm
