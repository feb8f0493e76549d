#include <ostream>
#include <sstream>

#include "gfm/expr.hpp"

namespace gfm {

namespace {

std::string atom_str(AtomId id) {
  const AtomInfo& info = atom_info(id);
  switch (info.kind) {
    case AtomKind::Coord:
    case AtomKind::Param:
      return info.name;
    case AtomKind::Jet: {
      std::string base = atom_info(info.base).name;
      if (info.order <= 2) return base + std::string(info.order, '\'');
      return base + "^(" + std::to_string(info.order) + ")";
    }
    case AtomKind::Exp:
      return "exp(" + atom_info(info.base).name + ")";
    case AtomKind::Log:
      return "log(" + info.arg->str() + ")";
    case AtomKind::LogPrime:
      return "log(" + std::to_string(info.prime) + ")";
    case AtomKind::Root:
      return "root(" + info.arg->str() + ", " + std::to_string(info.order) + ")";
  }
  return "?";
}

void print_poly(std::ostream& os, const Poly& p) {
  if (p.is_zero()) {
    os << "0";
    return;
  }
  bool first = true;
  for (auto& term : p.terms()) {
    Rat c = term.c;
    if (first) {
      if (c.sgn() < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c.sgn() < 0 ? " - " : " + ");
      c = c.abs();
    }
    first = false;
    bool printed = false;
    if (!c.is_one() || term.m.is_one()) {
      os << c.str();
      printed = true;
    }
    for (auto& [id, e] : term.m.entries()) {
      if (printed) os << "*";
      os << atom_str(id);
      if (e != 1) os << "^" << e;
      printed = true;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  if (den_.is_one()) {
    print_poly(os, num_);
  } else {
    os << "(";
    print_poly(os, num_);
    os << ")/(";
    print_poly(os, den_);
    os << ")";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  return os << e.str();
}

}  // namespace gfm
