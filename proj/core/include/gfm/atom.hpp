#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gfm/rat.hpp"

namespace gfm {

class Expr;

using AtomId = int32_t;

enum class AtomKind : uint8_t {
  Coord,     // declared base coordinate (also used for lattice symbols)
  Param,     // formal parameter: zero x-derivative (eps, lambda, z, ...)
  Jet,       // s-th x-derivative of a coordinate, s >= 1
  Exp,       // exp(c) for a coordinate c; exp(k*c) is this atom to the k-th power
  Log,       // log of a normalized primitive argument expression
  LogPrime,  // log(p) for a prime p; x-derivative zero
  Root,      // k-th root of a normalized root-free polynomial base, k >= 2
};

struct AtomInfo {
  AtomKind kind;
  std::string name;  // Coord/Param only
  AtomId base = -1;  // Jet/Exp: the underlying coordinate
  int order = 0;     // Jet: derivative order; Root: index k
  long prime = 0;    // LogPrime
  std::shared_ptr<const Expr> arg;  // Log argument / Root base
};

// Process-wide interning table. Atoms are immutable once created; creation
// order fixes the deterministic variable order used by normal forms.
class AtomTable {
 public:
  static AtomTable& instance();

  AtomId coord(const std::string& name);
  AtomId param(const std::string& name);
  AtomId jet(AtomId coordinate, int order);
  AtomId exp_atom(AtomId coordinate);
  AtomId log_prime(long p);
  // `arg` must already be in the canonical key form produced by log_of /
  // root_of (primitive, positive leading coefficient).
  AtomId log_atom(const Expr& arg);
  AtomId root_atom(const Expr& base, int k);

  // Lookup without creation; returns -1 if absent.
  AtomId find_name(const std::string& name) const;

  const AtomInfo& info(AtomId id) const;
  size_t size() const;

 private:
  AtomTable() = default;
  struct Impl;
  Impl& impl() const;
};

inline const AtomInfo& atom_info(AtomId id) {
  return AtomTable::instance().info(id);
}

}  // namespace gfm
