#include "gfm/poly.hpp"

#include <algorithm>
#include <unordered_map>

#include "gfm/expr.hpp"

namespace gfm {

int Mono::exponent(AtomId a) const {
  for (auto& [id, e] : e_)
    if (id == a) return e;
  return 0;
}

int Mono::total_degree() const {
  int d = 0;
  for (auto& [id, e] : e_) d += e;
  return d;
}

Mono Mono::mul(const Mono& a, const Mono& b) {
  std::vector<Entry> out;
  out.reserve(a.e_.size() + b.e_.size());
  size_t i = 0, j = 0;
  while (i < a.e_.size() && j < b.e_.size()) {
    if (a.e_[i].first == b.e_[j].first) {
      int e = a.e_[i].second + b.e_[j].second;
      if (e != 0) out.push_back({a.e_[i].first, e});
      ++i, ++j;
    } else if (a.e_[i].first < b.e_[j].first) {
      out.push_back(a.e_[i++]);
    } else {
      out.push_back(b.e_[j++]);
    }
  }
  while (i < a.e_.size()) out.push_back(a.e_[i++]);
  while (j < b.e_.size()) out.push_back(b.e_[j++]);
  return from_sorted(std::move(out));
}

Mono Mono::div(const Mono& a, const Mono& b) {
  std::vector<Entry> out;
  size_t i = 0, j = 0;
  while (i < a.e_.size()) {
    if (j < b.e_.size() && a.e_[i].first == b.e_[j].first) {
      int e = a.e_[i].second - b.e_[j].second;
      if (e < 0) throw std::logic_error("Mono::div: not divisible");
      if (e != 0) out.push_back({a.e_[i].first, e});
      ++i, ++j;
    } else if (j < b.e_.size() && b.e_[j].first < a.e_[i].first) {
      throw std::logic_error("Mono::div: not divisible");
    } else {
      out.push_back(a.e_[i++]);
    }
  }
  if (j != b.e_.size()) throw std::logic_error("Mono::div: not divisible");
  return from_sorted(std::move(out));
}

bool Mono::divides(const Mono& b, const Mono& a) {
  size_t i = 0;
  for (auto& [id, e] : b.e_) {
    while (i < a.e_.size() && a.e_[i].first < id) ++i;
    if (i == a.e_.size() || a.e_[i].first != id || a.e_[i].second < e)
      return false;
  }
  return true;
}

Mono Mono::gcd(const Mono& a, const Mono& b) {
  std::vector<Entry> out;
  size_t i = 0, j = 0;
  while (i < a.e_.size() && j < b.e_.size()) {
    if (a.e_[i].first == b.e_[j].first) {
      out.push_back({a.e_[i].first, std::min(a.e_[i].second, b.e_[j].second)});
      ++i, ++j;
    } else if (a.e_[i].first < b.e_[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return from_sorted(std::move(out));
}

Mono Mono::pow(int k) const {
  std::vector<Entry> out = e_;
  for (auto& [id, e] : out) e *= k;
  return from_sorted(std::move(out));
}

int Mono::cmp(const Mono& a, const Mono& b) {
  size_t i = 0;
  for (; i < a.e_.size() && i < b.e_.size(); ++i) {
    if (a.e_[i].first != b.e_[i].first)
      // Earlier-declared atom present => ranks higher.
      return a.e_[i].first < b.e_[i].first ? 1 : -1;
    if (a.e_[i].second != b.e_[i].second)
      return a.e_[i].second > b.e_[i].second ? 1 : -1;
  }
  if (i < a.e_.size()) return 1;
  if (i < b.e_.size()) return -1;
  return 0;
}

size_t Mono::hash() const {
  size_t h = 14695981039346656037ull;
  for (auto& [id, e] : e_) {
    h ^= (size_t)id * 0x9e3779b97f4a7c15ull + (size_t)e;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------

void Poly::normalize(std::vector<Term>& t) {
  std::sort(t.begin(), t.end(),
            [](const Term& a, const Term& b) { return Mono::cmp(a.m, b.m) > 0; });
  size_t w = 0;
  for (size_t i = 0; i < t.size();) {
    size_t j = i + 1;
    Rat c = t[i].c;
    while (j < t.size() && Mono::cmp(t[i].m, t[j].m) == 0) c += t[j++].c;
    if (!c.is_zero()) {
      if (w != i) t[w].m = std::move(t[i].m);
      t[w].c = std::move(c);
      ++w;
    }
    i = j;
  }
  t.resize(w);
}

Poly Poly::from_terms(std::vector<Term> terms) {
  normalize(terms);
  Poly p;
  p.t_ = std::move(terms);
  return p;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Poly::Term> t;
  t.reserve(a.t_.size() + b.t_.size());
  size_t i = 0, j = 0;
  while (i < a.t_.size() && j < b.t_.size()) {
    int c = Mono::cmp(a.t_[i].m, b.t_[j].m);
    if (c > 0) {
      t.push_back(a.t_[i++]);
    } else if (c < 0) {
      t.push_back(b.t_[j++]);
    } else {
      Rat s = a.t_[i].c + b.t_[j].c;
      if (!s.is_zero()) t.push_back({a.t_[i].m, std::move(s)});
      ++i, ++j;
    }
  }
  while (i < a.t_.size()) t.push_back(a.t_[i++]);
  while (j < b.t_.size()) t.push_back(b.t_[j++]);
  Poly p;
  p.t_ = std::move(t);
  return p;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& term : p.t_) term.c = -term.c;
  return p;
}

Poly Poly::mul_rat(const Rat& r) const {
  if (r.is_zero()) return Poly();
  Poly p = *this;
  for (auto& term : p.t_) term.c *= r;
  return p;
}

namespace {

// Splits a raw monomial into its reduced part and the root-carry factor,
// returning the extra polynomial factor prod base_i^(e_i div k_i).
bool reduce_root_carries(const Mono& raw, Mono& reduced, Poly& extra) {
  bool carried = false;
  std::vector<Mono::Entry> keep;
  extra = Poly(Rat(1));
  for (auto& [id, e] : raw.entries()) {
    const AtomInfo& info = atom_info(id);
    if (info.kind == AtomKind::Root && e >= info.order) {
      carried = true;
      int q = e / info.order, r = e % info.order;
      if (r != 0) keep.push_back({id, r});
      const Expr& base = *info.arg;
      // Root bases are root-free polynomials by construction.
      extra = extra * base.num().pow(q);
      if (!base.den().is_one())
        throw std::logic_error("root atom with non-polynomial base");
    } else {
      if (e != 0) keep.push_back({id, e});
    }
  }
  reduced = Mono::from_sorted(std::move(keep));
  return carried;
}

}  // namespace

Poly Poly::mul_mono(const Mono& m, const Rat& c) const {
  if (c.is_zero()) return Poly();
  std::vector<Term> out;
  Poly carry_acc;
  out.reserve(t_.size());
  for (auto& term : t_) {
    Mono raw = Mono::mul(term.m, m);
    Mono red;
    Poly extra;
    if (reduce_root_carries(raw, red, extra)) {
      carry_acc = carry_acc + extra.mul_mono(red, term.c * c);
    } else {
      out.push_back({std::move(red), term.c * c});
    }
  }
  normalize(out);
  Poly p;
  p.t_ = std::move(out);
  if (!carry_acc.is_zero()) p = p + carry_acc;
  return p;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (b.t_.size() == 1) return a.mul_mono(b.t_[0].m, b.t_[0].c);
  if (a.t_.size() == 1) return b.mul_mono(a.t_[0].m, a.t_[0].c);
  // Accumulate through a hash map, then fix root carries.
  std::unordered_map<Mono, Rat> acc;
  acc.reserve(a.t_.size() * b.t_.size());
  for (auto& ta : a.t_)
    for (auto& tb : b.t_) {
      Mono m = Mono::mul(ta.m, tb.m);
      Rat c = ta.c * tb.c;
      auto [it, fresh] = acc.emplace(std::move(m), c);
      if (!fresh) it->second += c;
    }
  std::vector<Poly::Term> plain;
  Poly carry_acc;
  plain.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c.is_zero()) continue;
    Mono red;
    Poly extra;
    if (reduce_root_carries(m, red, extra)) {
      carry_acc = carry_acc + extra.mul_mono(red, c);
    } else {
      plain.push_back({red, c});
    }
  }
  Poly p = Poly::from_terms(std::move(plain));
  if (!carry_acc.is_zero()) p = p + carry_acc;
  return p;
}

Poly Poly::pow(int k) const {
  if (k < 0) throw std::logic_error("Poly::pow: negative exponent");
  Poly r(Rat(1)), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    b = (k >>= 1) ? b * b : b;
  }
  return r;
}

bool Poly::operator==(const Poly& b) const {
  if (t_.size() != b.t_.size()) return false;
  for (size_t i = 0; i < t_.size(); ++i)
    if (!(t_[i].c == b.t_[i].c) || !(t_[i].m == b.t_[i].m)) return false;
  return true;
}

size_t Poly::hash() const {
  size_t h = 0;
  for (auto& term : t_) h ^= term.m.hash() * 31 + term.c.hash();
  return h;
}

Rat Poly::content() const {
  Rat g(0);
  for (auto& term : t_) {
    g = Rat::gcd(g, term.c);
    if (g.is_one()) break;
  }
  return g.is_zero() ? Rat(1) : g;
}

int Poly::degree_in(AtomId a) const {
  int d = 0;
  for (auto& term : t_) d = std::max(d, term.m.exponent(a));
  return d;
}

bool Poly::contains_atom(AtomId a) const {
  for (auto& term : t_)
    if (term.m.exponent(a) != 0) return true;
  return false;
}

void Poly::collect_atoms(std::vector<AtomId>& out) const {
  for (auto& term : t_)
    for (auto& [id, e] : term.m.entries()) out.push_back(id);
}

bool Poly::contains_kind(AtomKind k) const {
  for (auto& term : t_)
    for (auto& [id, e] : term.m.entries())
      if (atom_info(id).kind == k) return true;
  return false;
}

std::vector<Poly> Poly::coeffs_in(AtomId a) const {
  std::vector<Poly> out(degree_in(a) + 1);
  std::vector<std::vector<Term>> buckets(out.size());
  for (auto& term : t_) {
    int e = term.m.exponent(a);
    std::vector<Mono::Entry> rest;
    for (auto& en : term.m.entries())
      if (en.first != a) rest.push_back(en);
    buckets[e].push_back({Mono::from_sorted(std::move(rest)), term.c});
  }
  for (size_t i = 0; i < out.size(); ++i) out[i] = from_terms(std::move(buckets[i]));
  return out;
}

Poly Poly::assemble_in(AtomId a, const std::vector<Poly>& coeffs) {
  Poly acc;
  for (size_t e = 0; e < coeffs.size(); ++e) {
    if (coeffs[e].is_zero()) continue;
    acc = acc + coeffs[e].mul_mono(Mono(a, (int)e), Rat(1));
  }
  return acc;
}

bool Poly::try_exact_div(const Poly& a, const Poly& b, Poly& quot) {
  if (b.is_zero()) return false;
  if (b.is_rat()) {
    quot = a.mul_rat(b.rat_value().inv());
    return true;
  }
  Poly rem = a;
  std::vector<Term> q;
  while (!rem.is_zero()) {
    const Term& lr = rem.t_[0];
    const Term& lb = b.t_[0];
    if (!Mono::divides(lb.m, lr.m)) return false;
    Mono qm = Mono::div(lr.m, lb.m);
    Rat qc = lr.c / lb.c;
    q.push_back({qm, qc});
    rem = rem - b.mul_mono(qm, qc);
  }
  quot = from_terms(std::move(q));
  return true;
}

Poly Poly::exact_div(const Poly& a, const Poly& b) {
  Poly q;
  if (!try_exact_div(a, b, q))
    throw std::logic_error("Poly::exact_div: not divisible");
  return q;
}

namespace {

// Pseudo-remainder of a by b in the main variable x (deg a >= deg b),
// multiplier lc(b)^(deg a - deg b + 1).
Poly pseudo_rem(const Poly& a, const Poly& b, AtomId x) {
  std::vector<Poly> r = a.coeffs_in(x);
  std::vector<Poly> cb = b.coeffs_in(x);
  int db = (int)cb.size() - 1;
  const Poly& lb = cb[db];
  int dr = (int)r.size() - 1;
  auto deg = [&]() {
    while (dr >= 0 && r[dr].is_zero()) --dr;
    return dr;
  };
  deg();
  int steps_left = dr - db + 1;
  while (dr >= db) {
    Poly lead = r[dr];
    for (int i = 0; i <= dr; ++i) r[i] = lb * r[i];
    for (int i = 0; i <= db; ++i) r[i + dr - db] = r[i + dr - db] - lead * cb[i];
    --dr;
    deg();
    --steps_left;
  }
  // Match the textbook multiplier lc(b)^(d+1) even when steps terminate early.
  if (steps_left > 0) {
    Poly f = lb.pow(steps_left);
    for (int i = 0; i <= dr; ++i) r[i] = f * r[i];
  }
  r.resize(deg() + 1);
  return Poly::assemble_in(x, r);
}

Poly primitive_wrt(const Poly& p, AtomId x, Poly* content_out) {
  std::vector<Poly> c = p.coeffs_in(x);
  Poly g;
  for (auto& ci : c) {
    if (ci.is_zero()) continue;
    g = Poly::gcd(g, ci);
    if (g.is_one()) break;
  }
  if (content_out) *content_out = g;
  if (g.is_one()) return p;
  return Poly::exact_div(p, g);
}

// --- certified evaluation pre-check ------------------------------------------
// Evaluating every atom except x at random points modulo a prime cannot
// decrease the x-degree of any divisor whose leading coefficient survives;
// so if both leading coefficients survive and the univariate images are
// coprime, the true gcd is free of x.

constexpr uint64_t kP = 2305843009213693951ull;  // 2^61 - 1

uint64_t mulmod(uint64_t a, uint64_t b) {
  return (uint64_t)((unsigned __int128)a * b % kP);
}
uint64_t powmod(uint64_t a, uint64_t e) {
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

struct EvalRng {
  uint64_t s = 0x243f6a8885a308d3ull;
  uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
};

bool rat_mod(const Rat& r, uint64_t& out) {
  uint64_t n = mpz_fdiv_ui(mpq_numref(r.raw()), kP);
  uint64_t d = mpz_fdiv_ui(mpq_denref(r.raw()), kP);
  if (d == 0) return false;
  out = mulmod(n, powmod(d, kP - 2));
  return true;
}

// Image of p as a univariate polynomial in x modulo kP; false when a
// denominator hits the prime.
bool eval_univariate(const Poly& p, AtomId x,
                     const std::map<AtomId, uint64_t>& vals,
                     std::vector<uint64_t>& out) {
  out.assign(p.degree_in(x) + 1, 0);
  for (auto& term : p.terms()) {
    uint64_t v;
    if (!rat_mod(term.c, v)) return false;
    int e = 0;
    for (auto& [id, ex] : term.m.entries()) {
      if (id == x) {
        e = ex;
        continue;
      }
      v = mulmod(v, powmod(vals.at(id), (uint64_t)ex));
    }
    out[e] = (out[e] + v) % kP;
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return true;
}

int univariate_gcd_degree(std::vector<uint64_t> a, std::vector<uint64_t> b) {
  auto trim = [](std::vector<uint64_t>& v) {
    while (v.size() > 1 && v.back() == 0) v.pop_back();
  };
  trim(a);
  trim(b);
  while (!(b.size() == 1 && b[0] == 0)) {
    // a mod b
    uint64_t inv = powmod(b.back(), kP - 2);
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
      uint64_t f = mulmod(a.back(), inv);
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) {
        uint64_t sub = mulmod(f, b[i]);
        a[off + i] = (a[off + i] + kP - sub) % kP;
      }
      trim(a);
      if (a.size() == 1 && a[0] == 0) break;
      if (a.size() < b.size()) break;
    }
    std::swap(a, b);
    trim(b);
  }
  return (int)a.size() - 1;
}

// Returns true (certified) when gcd(a, b) has x-degree zero.
bool certified_x_free(const Poly& a, const Poly& b, AtomId x) {
  std::vector<AtomId> atoms;
  a.collect_atoms(atoms);
  b.collect_atoms(atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  EvalRng rng;
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::map<AtomId, uint64_t> vals;
    for (AtomId id : atoms)
      if (id != x) vals[id] = rng.next() % (kP - 2) + 1;
    std::vector<uint64_t> ua, ub;
    if (!eval_univariate(a, x, vals, ua)) continue;
    if (!eval_univariate(b, x, vals, ub)) continue;
    if ((int)ua.size() - 1 != a.degree_in(x)) continue;  // lc vanished
    if ((int)ub.size() - 1 != b.degree_in(x)) continue;
    if (ua.back() == 0 || ub.back() == 0) continue;
    if (univariate_gcd_degree(ua, ub) == 0) return true;
    return false;  // a genuine common factor in x is likely; do the real work
  }
  return false;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return Poly(Rat(0));
  auto unit_normalize = [](Poly p) {
    if (p.is_zero()) return p;
    Rat c = p.content();
    if (p.lead_coeff().sgn() < 0) c = -c;
    return p.mul_rat(c.inv());
  };
  if (a.is_zero()) return unit_normalize(b);
  if (b.is_zero()) return unit_normalize(a);
  if (a.is_rat() || b.is_rat()) return Poly(Rat(1));
  if (a == b) return unit_normalize(a);
  // Monomial fast paths.
  if (a.is_monomial() || b.is_monomial()) {
    Mono g = a.t_[0].m;
    for (auto& term : a.t_) g = Mono::gcd(g, term.m);
    for (auto& term : b.t_) g = Mono::gcd(g, term.m);
    Poly p;
    p.t_.push_back({g, Rat(1)});
    return p;
  }
  // Common monomial factor comes out first.
  {
    Mono ga = a.t_[0].m, gb = b.t_[0].m;
    for (auto& term : a.t_) ga = Mono::gcd(ga, term.m);
    for (auto& term : b.t_) gb = Mono::gcd(gb, term.m);
    Mono g = Mono::gcd(ga, gb);
    if (!g.is_one()) {
      Poly mg;
      mg.t_.push_back({g, Rat(1)});
      Poly qa = exact_div(a, mg), qb = exact_div(b, mg);
      return mg * gcd(qa, qb);
    }
    if (!ga.is_one()) {
      Poly mg;
      mg.t_.push_back({ga, Rat(1)});
      return gcd(exact_div(a, mg), b);
    }
    if (!gb.is_one()) {
      Poly mg;
      mg.t_.push_back({gb, Rat(1)});
      return gcd(a, exact_div(b, mg));
    }
  }
  // Main variable: the largest atom id present in either.
  AtomId x = -1;
  for (auto& term : a.t_)
    for (auto& [id, e] : term.m.entries()) x = std::max(x, id);
  for (auto& term : b.t_)
    for (auto& [id, e] : term.m.entries()) x = std::max(x, id);
  if (a.degree_in(x) == 0 || b.degree_in(x) == 0) {
    // One side free of the main variable: gcd = gcd of it with the content.
    const Poly& free_side = a.degree_in(x) == 0 ? a : b;
    const Poly& other = a.degree_in(x) == 0 ? b : a;
    Poly cont;
    primitive_wrt(other, x, &cont);
    return gcd(free_side, cont);
  }
  if (certified_x_free(a, b, x)) {
    Poly ca, cb;
    primitive_wrt(a, x, &ca);
    primitive_wrt(b, x, &cb);
    return gcd(ca, cb);
  }
  Poly ca, cb;
  Poly pa = primitive_wrt(a, x, &ca);
  Poly pb = primitive_wrt(b, x, &cb);
  Poly cont = gcd(ca, cb);
  // Subresultant remainder sequence (Collins); contents handled above.
  if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);
  Poly g(Rat(1)), h(Rat(1));
  while (true) {
    int d = pa.degree_in(x) - pb.degree_in(x);
    Poly r = pseudo_rem(pa, pb, x);
    if (r.is_zero()) break;
    if (r.degree_in(x) == 0) {
      pb = Poly(Rat(1));
      break;
    }
    Poly divisor = g * h.pow(d);
    pa = std::move(pb);
    pb = exact_div(r, divisor);
    g = pa.coeffs_in(x).back();
    // h = g^d * h^(1-d)
    if (d == 0) {
      // h unchanged
    } else if (d == 1) {
      h = g;
    } else {
      h = exact_div(g.pow(d), h.pow(d - 1));
    }
  }
  if (pb.degree_in(x) > 0) pb = primitive_wrt(pb, x, nullptr);
  Poly out = cont * unit_normalize(pb);
  return unit_normalize(out);
}

}  // namespace gfm
