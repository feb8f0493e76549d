#pragma once

#include "gfm/manifold.hpp"
#include "gfm/psido.hpp"

namespace gfm {

struct BandExhausted : KernelError {
  using KernelError::KernelError;
};
struct NonInvertible : KernelError {
  using KernelError::KernelError;
};
struct UnsupportedFlow : KernelError {
  using KernelError::KernelError;
};

// Lattice symbols U[j] with integer shift tags; shifts act as ring
// automorphisms by relabeling. Auxiliary symbols A with (Lambda + 1) A = g
// are eliminated to their zero-shift representative:
//   A[j] = -A[j-1] + g[j-1]  (j > 0),   A[j] = -A[j+1] + g[j]  (j < 0).
// Auxiliaries are interned by the normal form of g (with sign folding), so
// independently derived occurrences share one symbol.
class LatticeRing {
 public:
  AtomId sym(const std::string& name, int shift);
  Expr sym_expr(const std::string& name, int shift) {
    return Expr::atom(sym(name, shift));
  }
  // (Lambda + 1) result = g ; returns the zero-shift auxiliary as an Expr
  // (possibly negated when -g was interned first).
  Expr aux_for(const Expr& g);

  // Relabels every lattice symbol by `by` and eliminates shifted auxiliaries.
  Expr shift(const Expr& e, int by);

 private:
  struct AuxInfo {
    std::string name;
    Expr g;
  };
  std::map<std::string, AuxInfo> aux_by_key_;  // normalized g -> aux
  std::map<std::string, Expr> aux_g_by_name_;  // base name -> g
  int aux_counter_ = 0;

  Expr eliminate(const Expr& e);
  static std::string base_of(const std::string& full, int* shift);
};

// Truncated shift-operator series sum_k a_k Lambda^k; composition uses
// Lambda^k f = f^{(+k)} Lambda^k. `floor` marks the lowest trusted order,
// `ceil` the highest (untruncated ends use the sentinels).
class ShiftOp {
 public:
  static constexpr int kNegInf = -1 << 20;
  static constexpr int kPosInf = 1 << 20;

  ShiftOp() = default;
  static ShiftOp term(LatticeRing& ring, int k, Expr coeff);

  const std::map<int, Expr>& coef() const { return c_; }
  Expr at(int k) const;
  int floor_order() const { return floor_; }
  int ceil_order() const { return ceil_; }
  void set_floor(int f);
  void set_ceil(int c);
  int top() const { return c_.empty() ? kNegInf : c_.rbegin()->first; }
  int bottom() const { return c_.empty() ? kPosInf : c_.begin()->first; }

  ShiftOp add(const ShiftOp& b) const;
  ShiftOp sub(const ShiftOp& b) const;
  ShiftOp neg() const;
  ShiftOp compose(LatticeRing& ring, const ShiftOp& b) const;
  static ShiftOp bracket(LatticeRing& ring, const ShiftOp& a, const ShiftOp& b);
  ShiftOp mul_expr(const Expr& e) const;

  ShiftOp plus_part() const;   // orders >= 0
  ShiftOp minus_part() const;  // orders < 0
  Expr residue() const { return at(0); }

  // Geometric inversion around the top or bottom term; the chosen end must
  // be a single invertible term.
  ShiftOp inverse_from_top(LatticeRing& ring, int floor) const;
  ShiftOp inverse_from_bottom(LatticeRing& ring, int ceil) const;

  // Square root of Lambda^2 + U Lambda type operators: Lambda + a_0 + ...,
  // each a_k a fresh (interned) auxiliary; verified to the floor.
  static ShiftOp sqrt_quadratic(LatticeRing& ring, const ShiftOp& L, int floor);

 private:
  std::map<int, Expr> c_;
  int floor_ = kNegInf, ceil_ = kPosInf;
  void trim();
};

// --- corpus hierarchies -------------------------------------------------------

// Toda lattice state: symbols V, EU (= e^U).
struct TodaLattice {
  LatticeRing ring;
  Expr V(int s = 0) { return ring.sym_expr("tdV", s); }
  Expr EU(int s = 0) { return ring.sym_expr("tdEU", s); }
  ShiftOp lax();  // Lambda + V + e^U Lambda^{-1}
  // first flow: eps dV/dt = e^{U+} - e^U, eps dU/dt = V - V^-
  StructureReport check_first_flow();
  StructureReport two_point_checks();
};

// Ablowitz-Ladik state: symbols P, Q; V = Q - P, e^U = Q.
struct ALLattice {
  LatticeRing ring;
  Expr P(int s = 0) { return ring.sym_expr("alP", s); }
  Expr Q(int s = 0) { return ring.sym_expr("alQ", s); }
  Expr V(int s = 0) { return Q(s) - P(s); }
  Expr EU(int s = 0) { return Q(s); }
  // eps dP/dt^{2,0}, eps dQ/dt^{2,0} (printed first positive flow)
  Expr flowP() { return P() * (Q(1) - Q()); }
  Expr flowQ() { return Q() * (Q(1) - Q(-1) - P() + P(-1)); }
  // Lax operator (1 - Q Lambda^{-1})^{-1} (Lambda - P) to the band.
  ShiftOp lax(int floor);
  StructureReport check_lax_flow(int floor);
  StructureReport check_inverse(int band);
  // discrete shift: P -> P(Q^{++} - P^+)/(Q^+ - P), Q -> Q^+ (...)/(...)
  Expr P_oplus(int power);  // power in {+1,-1}
  Expr Q_oplus(int power);
  StructureReport check_discrete_symmetry();
  StructureReport two_point_checks();
  // the full-genera AL -> Toda identification
  StructureReport check_al_to_toda();
};

// q-deformed KdV: symbol U with auxiliaries from (Lambda+1)-inversions.
struct QKdVLattice {
  LatticeRing ring;
  Expr U(int s = 0) { return ring.sym_expr("qU", s); }
  ShiftOp lax();  // Lambda^2 + U Lambda
  // printed first flows of the extended hierarchy
  StructureReport check_flows(int depth);
  // -8 Res(Lambda L^{1/2}) equals 8 Lambda/(Lambda+1) [((Lambda+1)^{-1} U)^2]
  StructureReport check_residue_identity();
};

}  // namespace gfm
