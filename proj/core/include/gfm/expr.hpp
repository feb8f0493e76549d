#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfm/poly.hpp"

namespace gfm {

// Kernel error hierarchy. Every failure mode named by the contract throws a
// subclass of KernelError carrying a printable reason.
struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndeclaredAtom : KernelError {
  using KernelError::KernelError;
};
struct DivisionByZero : KernelError {
  using KernelError::KernelError;
};
struct NonDifferentiableTarget : KernelError {
  using KernelError::KernelError;
};
struct MissingImage : KernelError {
  using KernelError::KernelError;
};
struct NotIntegrableInClass : KernelError {
  using KernelError::KernelError;
};
struct OutOfRangeDegree : KernelError {
  using KernelError::KernelError;
};
struct UnsupportedForm : KernelError {  // log in denominator, root index > 2 ...
  using KernelError::KernelError;
};

// Exact rational expression: reduced fraction of two normal-form polynomials.
// Canonical invariants:
//   - denominator is primitive (content 1), has positive leading coefficient,
//     and contains no root or log atoms;
//   - numerator and denominator share no common polynomial factor;
//   - root atoms appear with exponents below their index;
//   - zero is (0, 1); equal values have identical representations.
class Expr {
 public:
  Expr() : den_(Rat(1)) {}
  explicit Expr(const Rat& r) : num_(r), den_(Rat(1)) {}
  explicit Expr(long n) : num_(Rat(n)), den_(Rat(1)) {}

  static Expr atom(AtomId a, int e = 1);
  static Expr from_poly(Poly p) { return Expr(std::move(p), Poly(Rat(1))); }
  // Builds a reduced fraction from arbitrary numerator/denominator.
  static Expr fraction(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_rat() const { return num_.is_rat() && den_.is_one(); }
  Rat rat_value() const;  // requires is_rat()
  bool is_poly() const { return den_.is_one(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }
  Expr& operator/=(const Expr& b) { return *this = *this / b; }
  friend Expr operator*(const Rat& r, const Expr& e);
  friend Expr operator*(const Expr& e, const Rat& r) { return r * e; }

  // Integer power; pow(0,0) = 1 by the empty-product convention.
  Expr pow(long k) const;
  Expr inv() const;

  bool operator==(const Expr& b) const {
    return num_ == b.num_ && den_ == b.den_;
  }
  bool operator!=(const Expr& b) const { return !(*this == b); }
  size_t hash() const;

  bool contains_atom(AtomId a) const {
    return num_.contains_atom(a) || den_.contains_atom(a);
  }
  bool contains_kind(AtomKind k) const {
    return num_.contains_kind(k) || den_.contains_kind(k);
  }
  void collect_atoms(std::vector<AtomId>& out) const;
  bool jet_free() const { return !contains_kind(AtomKind::Jet); }
  // True when the value is a rational combination of LogPrime atoms only.
  bool is_constant() const;

  std::string str() const;  // canonical printable form (parser round-trips)

 private:
  Expr(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {}
  Poly num_, den_;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

// --- Smart constructors ----------------------------------------------------

// exp of a rational linear form over coordinates: product of Exp-atom powers.
// Integer coefficients map to plain powers; a rational coefficient a/b maps
// to root(exp(c), b)^a.
Expr exp_of(const std::vector<std::pair<AtomId, Rat>>& linear_form);
// exp of an expression that is a rational linear combination of coordinates,
// logs of expressions and log-primes (so the result stays in the ring).
Expr exp_of_expr(const Expr& e);

// log with argument canonicalization: splits rational content into prime
// logs, monomial factors into atom logs (log(exp c) = c, log(root(B,k)) =
// log(B)/k), and keeps one Log atom per primitive multi-term factor.
Expr log_of(const Expr& arg);

// k-th root with canonicalization: root(N/D,k) = root(N*D^(k-1),k)/D, k-th
// power parts of the rational content and of monomial factors are extracted,
// and the residual primitive polynomial base is interned as a Root atom.
Expr root_of(const Expr& base, int k);

// --- Jet frames and derivations --------------------------------------------

struct JetFrame {
  std::vector<AtomId> coords;
  int max_order = 0;  // informational; derivations auto-extend
  bool contains(AtomId coord) const;
};

// Total x-derivative: jets shift up, coordinates become first jets, atoms
// with defining rules (exp/log/root) differentiate accordingly, parameters
// and log-primes are constants.
Expr total_x_derivative(const Expr& e);
Expr total_x_derivative(const Expr& e, int times);

// Formal partial derivative with respect to a coordinate, jet or parameter
// atom; chains through exp/log/root atoms that reference the target.
Expr partial_derivative(const Expr& e, AtomId target);

// Antiderivative in a coordinate on the jet-free subring; integration
// constant fixed to zero. Supported term classes: c^n (n != -1), 1/c,
// c^n * exp(m c), c^n * log(c), root-of-c monomials.
Expr antiderivative(const Expr& e, AtomId coordinate);

// Exact coefficient extraction of a Laurent polynomial in `parameter`.
// Returns coefficients indexed min..max; throws OutOfRangeDegree if e has
// degrees outside the window or is not Laurent in the parameter.
std::vector<Expr> grade_coefficients(const Expr& e, AtomId parameter, int min_deg,
                                     int max_deg);
// Convenience: coefficient of parameter^k.
Expr coefficient_of(const Expr& e, AtomId parameter, int k);
// Truncate: drop parameter powers above max_deg.
Expr truncate_in(const Expr& e, AtomId parameter, int max_deg);

}  // namespace gfm

template <>
struct std::hash<gfm::Expr> {
  size_t operator()(const gfm::Expr& e) const { return e.hash(); }
};
