#include "gfm/rat.hpp"

#include <ostream>

namespace gfm {

Rat Rat::parse(const std::string& s) {
  Rat r;
  if (mpq_set_str(r.q_, s.c_str(), 10) != 0)
    throw std::invalid_argument("Rat::parse: bad literal '" + s + "'");
  if (mpz_sgn(mpq_denref(r.q_)) == 0)
    throw std::domain_error("Rat::parse: zero denominator");
  if (mpz_sgn(mpq_denref(r.q_)) < 0) {
    mpz_neg(mpq_numref(r.q_), mpq_numref(r.q_));
    mpz_neg(mpq_denref(r.q_), mpq_denref(r.q_));
  }
  mpq_canonicalize(r.q_);
  return r;
}

long Rat::num_long() const {
  if (!mpz_fits_slong_p(mpq_numref(q_)))
    throw std::overflow_error("Rat: numerator out of long range");
  return mpz_get_si(mpq_numref(q_));
}

long Rat::den_long() const {
  if (!mpz_fits_slong_p(mpq_denref(q_)))
    throw std::overflow_error("Rat: denominator out of long range");
  return mpz_get_si(mpq_denref(q_));
}

Rat Rat::pow(long e) const {
  if (e == 0) return Rat(1);
  Rat base = e < 0 ? inv() : *this;
  unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
  Rat r;
  mpz_pow_ui(mpq_numref(r.q_), mpq_numref(base.q_), n);
  mpz_pow_ui(mpq_denref(r.q_), mpq_denref(base.q_), n);
  return r;
}

Rat Rat::gcd(const Rat& a, const Rat& b) {
  if (a.is_zero()) return b.abs();
  if (b.is_zero()) return a.abs();
  Rat r;
  mpz_gcd(mpq_numref(r.q_), mpq_numref(a.q_), mpq_numref(b.q_));
  mpz_lcm(mpq_denref(r.q_), mpq_denref(a.q_), mpq_denref(b.q_));
  mpq_canonicalize(r.q_);
  return r;
}

std::string Rat::str() const {
  char* c = mpq_get_str(nullptr, 10, q_);
  std::string s(c);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(c, s.size() + 1);
  return s;
}

size_t Rat::hash() const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](const mpz_t z) {
    size_t n = mpz_size(z);
    for (size_t i = 0; i < n; ++i) {
      h ^= (size_t)mpz_getlimbn(z, i);
      h *= 1099511628211ull;
    }
    h ^= (size_t)(mpz_sgn(z) + 1);
    h *= 1099511628211ull;
  };
  mix(mpq_numref(q_));
  mix(mpq_denref(q_));
  return h;
}

bool Rat::fits_long() const {
  return is_integer() && mpz_fits_slong_p(mpq_numref(q_));
}

long Rat::to_long() const {
  if (!fits_long()) throw std::overflow_error("Rat: not an in-range integer");
  return mpz_get_si(mpq_numref(q_));
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.str();
}

Rat rat_factorial(long n) {
  if (n < 0) throw std::domain_error("rat_factorial: negative argument");
  Rat r(1);
  for (long i = 2; i <= n; ++i) r *= Rat(i);
  return r;
}

Rat rat_double_factorial(long n) {
  if (n < -1) throw std::domain_error("rat_double_factorial: n < -1");
  Rat r(1);
  for (long i = n; i >= 2; i -= 2) r *= Rat(i);
  return r;
}

Rat rat_binomial(long n, long k) {
  if (k < 0) return Rat(0);
  Rat r(1);
  for (long i = 0; i < k; ++i) r *= Rat(n - i, i + 1);
  return r;
}

Rat gamma_half_ratio(long p) {
  // Gamma(1/2)/Gamma(p+1/2) = 2^p/(2p-1)!! for p >= 0,
  // and (-1)^q (2q-1)!!/2^q for p = -q < 0.
  if (p >= 0) return Rat(2).pow(p) / rat_double_factorial(2 * p - 1);
  long q = -p;
  Rat r = rat_double_factorial(2 * q - 1) / Rat(2).pow(q);
  if (q % 2) r = -r;
  return r;
}

Rat rising_factorial(const Rat& a, long m) {
  if (m < 0) throw std::domain_error("rising_factorial: m < 0");
  Rat r(1);
  for (long i = 0; i < m; ++i) r *= a + Rat(i);
  return r;
}

Rat harmonic(long k) {
  Rat r(0);
  for (long i = 1; i <= k; ++i) r += Rat(1, i);
  return r;
}

}  // namespace gfm
