#pragma once

#include <functional>
#include <map>
#include <vector>

#include "gfm/atom.hpp"
#include "gfm/rat.hpp"

namespace gfm {

// Monomial: finite map atom -> positive integer exponent, sorted by atom id.
class Mono {
 public:
  using Entry = std::pair<AtomId, int>;

  Mono() = default;
  explicit Mono(AtomId a, int e = 1) {
    if (e != 0) e_.push_back({a, e});
  }
  static Mono from_sorted(std::vector<Entry> v) {
    Mono m;
    m.e_ = std::move(v);
    return m;
  }

  bool is_one() const { return e_.empty(); }
  const std::vector<Entry>& entries() const { return e_; }
  int exponent(AtomId a) const;
  int total_degree() const;

  // Raw product: exponents add; root-atom reduction happens in Poly::mul.
  static Mono mul(const Mono& a, const Mono& b);
  // Divides a by b; all exponents of b must be <= those of a.
  static Mono div(const Mono& a, const Mono& b);
  static bool divides(const Mono& b, const Mono& a);
  static Mono gcd(const Mono& a, const Mono& b);
  Mono pow(int k) const;

  // Deterministic total order (declaration order of atoms, then exponents).
  static int cmp(const Mono& a, const Mono& b);
  bool operator==(const Mono& b) const { return e_ == b.e_; }
  size_t hash() const;

 private:
  std::vector<Entry> e_;
};

// Multivariate polynomial with Rat coefficients, terms sorted descending.
// Invariant: root atoms appear with exponents in [1, k); reduction of k-th
// powers into the root base is applied by mul().
class Poly {
 public:
  struct Term {
    Mono m;
    Rat c;
  };

  Poly() = default;
  explicit Poly(const Rat& r) {
    if (!r.is_zero()) t_.push_back({Mono(), r});
  }
  static Poly atom(AtomId a, int e = 1) {
    Poly p;
    p.t_.push_back({Mono(a, e), Rat(1)});
    return p;
  }
  static Poly from_terms(std::vector<Term> terms);  // collects + sorts

  bool is_zero() const { return t_.empty(); }
  bool is_rat() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  bool is_one() const { return is_rat() && !t_.empty() && t_[0].c.is_one(); }
  bool is_monomial() const { return t_.size() == 1; }
  const std::vector<Term>& terms() const { return t_; }
  Rat rat_value() const {  // requires is_rat()
    return t_.empty() ? Rat(0) : t_[0].c;
  }
  size_t size() const { return t_.size(); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  Poly operator-() const;
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly mul_rat(const Rat& r) const;
  Poly mul_mono(const Mono& m, const Rat& c) const;  // root-carry aware
  Poly pow(int k) const;                             // k >= 0

  bool operator==(const Poly& b) const;
  size_t hash() const;

  // Positive rational c such that (*this)/c has integer coefficients with
  // gcd 1; sign excluded. Zero polynomial has content 1.
  Rat content() const;
  // Leading coefficient in the term order.
  Rat lead_coeff() const { return t_.empty() ? Rat(0) : t_[0].c; }
  const Mono& lead_mono() const { return t_[0].m; }

  int degree_in(AtomId a) const;
  bool contains_atom(AtomId a) const;
  void collect_atoms(std::vector<AtomId>& out) const;
  bool contains_kind(AtomKind k) const;

  // Univariate view in atom a: index = exponent, value = coefficient poly.
  std::vector<Poly> coeffs_in(AtomId a) const;
  static Poly assemble_in(AtomId a, const std::vector<Poly>& coeffs);

  // Exact division; throws if not divisible.
  static Poly exact_div(const Poly& a, const Poly& b);
  static bool try_exact_div(const Poly& a, const Poly& b, Poly& quot);

  // Multivariate gcd (primitive Euclidean scheme, deterministic variable
  // order). Result is primitive with positive leading coefficient.
  static Poly gcd(const Poly& a, const Poly& b);

  // Substitute each coordinate-like atom via the functional; atoms mapping
  // to nullptr stay untouched. Used by generic substitution machinery.
  // (High-level substitution lives in subst.hpp.)

 private:
  std::vector<Term> t_;
  static void normalize(std::vector<Term>& t);
};

}  // namespace gfm

template <>
struct std::hash<gfm::Mono> {
  size_t operator()(const gfm::Mono& m) const { return m.hash(); }
};
