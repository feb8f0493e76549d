#pragma once

// Randomized kernel property checks shared by the unit tests and the
// acceptance suite: ring laws, Leibniz, jet/derivative commutation,
// antiderivative round-trip, substitution-derivation commutation and
// root-atom reduction.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gfm/expr.hpp"
#include "gfm/subst.hpp"

namespace gfm::props {

// xorshift PRNG so runs are reproducible across platforms.
struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  int range(int lo, int hi) { return lo + (int)(next() % (uint64_t)(hi - lo + 1)); }
};

struct Pool {
  std::vector<AtomId> atoms;      // leaves for random expressions
  std::vector<AtomId> jet_coords; // coordinates whose jets may appear
};

inline Pool default_pool() {
  auto& t = AtomTable::instance();
  AtomId v = t.coord("v");
  AtomId u = t.coord("u");
  Pool p;
  p.atoms = {v, u, t.jet(v, 1), t.jet(v, 2), t.jet(u, 1), t.exp_atom(u)};
  p.jet_coords = {v, u};
  return p;
}

inline Expr random_expr(Rng& rng, const Pool& pool, int depth) {
  if (depth <= 0 || rng.range(0, 4) == 0) {
    int pick = rng.range(0, (int)pool.atoms.size());
    if (pick == (int)pool.atoms.size()) return Expr(Rat(rng.range(-4, 4)));
    return Expr::atom(pool.atoms[pick], rng.range(1, 2));
  }
  Expr a = random_expr(rng, pool, depth - 1);
  Expr b = random_expr(rng, pool, depth - 1);
  switch (rng.range(0, 3)) {
    case 0:
      return a + b;
    case 1:
      return a - b;
    case 2:
      return a * b;
    default:
      return b.is_zero() ? a : a / b;
  }
}

struct PropResult {
  std::string name;
  int cases = 0;
  int failures = 0;
};

// Each property runs `n` randomized cases and reports failures.
std::vector<PropResult> run_kernel_properties(int n, uint64_t seed = 12345);

}  // namespace gfm::props
