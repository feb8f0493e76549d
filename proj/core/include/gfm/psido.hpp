#pragma once

#include "gfm/expr.hpp"

namespace gfm {

struct TruncationExhausted : KernelError {
  using KernelError::KernelError;
};
struct NotASquare : KernelError {
  using KernelError::KernelError;
};

// Truncated pseudo-differential operator sum_k a_k D^k with D = eps d/dx,
// so composition obeys D f = f D + eps f_x. Coefficients below `floor` are
// unknown (dropped); finite differential operators use a -infinity floor.
class PsiDO {
 public:
  static constexpr int kNegInf = -1 << 20;

  PsiDO() = default;
  static PsiDO zero() { return PsiDO(); }
  static PsiDO term(int k, Expr coeff);
  static PsiDO symbol(int k) { return term(k, Expr(Rat(1))); }

  const std::map<int, Expr>& coef() const { return c_; }
  Expr at(int k) const;
  int top() const { return c_.empty() ? kNegInf : c_.rbegin()->first; }
  int floor_order() const { return floor_; }
  void set_floor(int f);

  friend PsiDO operator+(const PsiDO& a, const PsiDO& b);
  friend PsiDO operator-(const PsiDO& a, const PsiDO& b);
  PsiDO operator-() const;
  friend PsiDO operator*(const PsiDO& a, const PsiDO& b);  // composition
  PsiDO mul_expr(const Expr& e) const;                     // left multiply
  static PsiDO bracket(const PsiDO& a, const PsiDO& b);

  PsiDO plus_part() const;   // orders >= 0 (exact)
  PsiDO minus_part() const;  // orders < 0 (inherits the floor)
  Expr residue() const { return at(-1); }

  // Square root with the same top order parity; leading coefficient must be
  // a perfect square in the ring extended by quadratic root atoms.
  static PsiDO sqrt(const PsiDO& L, int floor);
  PsiDO pow(int n) const;  // n >= 1

  bool is_zero() const { return c_.empty(); }
  void add_at(int k, const Expr& e);

 private:
  std::map<int, Expr> c_;
  int floor_ = kNegInf;
  void trim();
};

// eps-weighted symbol commutation: D^m f = sum_j binom(m, j) eps^j f^(j) D^(m-j).
extern const AtomId kEpsAtomSentinel;  // declared for documentation only

// The KdV Lax operator L = D^2/2 + U over the named coordinate, and the
// hierarchy right-hand side dU/dt^{1,p} from the bracket with
// 2^(p+1/2)/(2p+1)!! (L^(p+1/2))_+ .
struct KdVLax {
  AtomId u;    // dependent coordinate
  AtomId eps;  // expansion parameter
  PsiDO L() const;
  // exact flow of U; asserts the bracket collapses to order zero
  Expr flow(int p) const;
};

}  // namespace gfm
