#pragma once

#include <gmp.h>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace gfm {

// Arbitrary-precision rational with gcd-reduced representation and
// positive denominator (maintained by mpq_canonicalize).
class Rat {
  mpq_t q_;

 public:
  Rat() { mpq_init(q_); }
  Rat(long n) {
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rat(long n, long d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, n, d < 0 ? -d : d);
    if (d < 0) mpq_neg(q_, q_);
    mpq_canonicalize(q_);
  }
  Rat(const Rat& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    if (this != &o) mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rat() { mpq_clear(q_); }

  // Parses "p", "-p", "p/q".
  static Rat parse(const std::string& s);

  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
  int sgn() const { return mpq_sgn(q_); }

  // Numerator/denominator as long; throws if out of range.
  long num_long() const;
  long den_long() const;

  friend Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    mpq_add(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat r;
    mpq_sub(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    mpq_mul(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::domain_error("Rat: division by zero");
    Rat r;
    mpq_div(r.q_, a.q_, b.q_);
    return r;
  }
  Rat operator-() const {
    Rat r;
    mpq_neg(r.q_, q_);
    return r;
  }
  Rat& operator+=(const Rat& b) {
    mpq_add(q_, q_, b.q_);
    return *this;
  }
  Rat& operator-=(const Rat& b) {
    mpq_sub(q_, q_, b.q_);
    return *this;
  }
  Rat& operator*=(const Rat& b) {
    mpq_mul(q_, q_, b.q_);
    return *this;
  }
  Rat& operator/=(const Rat& b) {
    if (b.is_zero()) throw std::domain_error("Rat: division by zero");
    mpq_div(q_, q_, b.q_);
    return *this;
  }

  Rat inv() const {
    if (is_zero()) throw std::domain_error("Rat: inverse of zero");
    Rat r;
    mpq_inv(r.q_, q_);
    return r;
  }
  Rat abs() const {
    Rat r;
    mpq_abs(r.q_, q_);
    return r;
  }
  // Integer exponent; pow(0,0) == 1.
  Rat pow(long e) const;

  friend bool operator==(const Rat& a, const Rat& b) {
    return mpq_equal(a.q_, b.q_) != 0;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return mpq_cmp(a.q_, b.q_) < 0;
  }
  friend bool operator<=(const Rat& a, const Rat& b) {
    return mpq_cmp(a.q_, b.q_) <= 0;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

  // gcd(p1/q1, p2/q2) = gcd(p1,p2)/lcm(q1,q2); used for polynomial content.
  static Rat gcd(const Rat& a, const Rat& b);

  std::string str() const;
  size_t hash() const;

  // Exact conversion checks used by grading/window code.
  bool fits_long() const;
  long to_long() const;  // requires integer value in range

  const mpq_t& raw() const { return q_; }
  mpq_t& raw() { return q_; }
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

// Exact combinatorial helpers (all results are Rat).
Rat rat_factorial(long n);               // n >= 0
Rat rat_double_factorial(long n);        // (-1)!! = 1, n odd or even >= -1
Rat rat_binomial(long n, long k);
// Gamma(1/2) / Gamma(p + 1/2) for any integer p, as an exact rational.
Rat gamma_half_ratio(long p);
// Gamma(a + m) / Gamma(a) for rational a and integer m >= 0: rising factorial.
Rat rising_factorial(const Rat& a, long m);
// Harmonic number H_k = 1 + 1/2 + ... + 1/k (H_0 = 0).
Rat harmonic(long k);

}  // namespace gfm

template <>
struct std::hash<gfm::Rat> {
  size_t operator()(const gfm::Rat& r) const { return r.hash(); }
};
