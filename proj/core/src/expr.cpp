#include "gfm/expr.hpp"

#include <algorithm>

#include "gfm/subst.hpp"

namespace gfm {

Expr Expr::atom(AtomId a, int e) {
  if (e == 0) return Expr(Rat(1));
  if (e > 0) {
    const AtomInfo& info = atom_info(a);
    if (info.kind == AtomKind::Root && e >= info.order) {
      // Keep the root-power invariant even for direct construction.
      return Expr::atom(a, 1).pow(e);
    }
    return from_poly(Poly::atom(a, e));
  }
  return fraction(Poly(Rat(1)), Poly::atom(a, -e));
}

Rat Expr::rat_value() const {
  if (!is_rat()) throw KernelError("Expr::rat_value: not a rational constant");
  return num_.rat_value();
}

namespace {

// den = D0 + r*D1 with conjugate multiplication to clear the root atom r.
bool find_root_in(const Poly& p, AtomId& out) {
  for (auto& term : p.terms())
    for (auto& [id, e] : term.m.entries())
      if (atom_info(id).kind == AtomKind::Root) {
        out = id;
        return true;
      }
  return false;
}

}  // namespace

Expr Expr::fraction(Poly num, Poly den) {
  if (den.is_zero())
    throw DivisionByZero("denominator normalizes to zero");
  if (num.is_zero()) return Expr();
  AtomId r;
  while (find_root_in(den, r)) {
    const AtomInfo& info = atom_info(r);
    if (info.order != 2)
      throw UnsupportedForm("root atom of index > 2 in a denominator");
    std::vector<Poly> c = den.coeffs_in(r);
    c.resize(2);
    // conjugate: D0 - r D1 ; new den = D0^2 - B D1^2.
    Poly conj = c[0] - Poly::atom(r) * c[1];
    const Expr& base = *info.arg;
    num = num * conj;
    den = c[0] * c[0] - base.num() * c[1] * c[1];
    if (den.is_zero())
      throw DivisionByZero("denominator normalizes to zero after rationalization");
  }
  if (den.contains_kind(AtomKind::Log) || den.contains_kind(AtomKind::LogPrime))
    throw UnsupportedForm("log atoms are not allowed in denominators");
  if (den.is_rat()) {
    Rat c0 = den.rat_value();
    return Expr(num.mul_rat(c0.inv()), Poly(Rat(1)));
  }
  Poly g = Poly::gcd(num, den);
  if (!g.is_one() && !g.is_zero()) {
    num = Poly::exact_div(num, g);
    den = Poly::exact_div(den, g);
  }
  Rat c = den.content();
  if (den.lead_coeff().sgn() < 0) c = -c;
  if (!c.is_one()) {
    den = den.mul_rat(c.inv());
    num = num.mul_rat(c.inv());
  }
  return Expr(std::move(num), std::move(den));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    Poly n = a.num_ + b.num_;
    if (n.is_zero()) return Expr();
    // A common factor can appear after cancellation.
    return Expr::fraction(std::move(n), a.den_);
  }
  Poly g = Poly::gcd(a.den_, b.den_);
  if (g.is_one()) {
    Poly n = a.num_ * b.den_ + b.num_ * a.den_;
    if (n.is_zero()) return Expr();
    return Expr::fraction(std::move(n), a.den_ * b.den_);
  }
  Poly b1 = Poly::exact_div(a.den_, g);
  Poly d1 = Poly::exact_div(b.den_, g);
  Poly n = a.num_ * d1 + b.num_ * b1;
  if (n.is_zero()) return Expr();
  return Expr::fraction(std::move(n), b1 * b.den_);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr Expr::operator-() const {
  Expr e = *this;
  e.num_ = -e.num_;
  return e;
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  return Expr::fraction(a.num_ * b.num_, a.den_ * b.den_);
}

Expr operator*(const Rat& r, const Expr& e) {
  if (r.is_zero()) return Expr();
  Expr out = e;
  out.num_ = out.num_.mul_rat(r);
  return out;
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DivisionByZero("division by zero expression");
  if (a.is_zero()) return Expr();
  return Expr::fraction(a.num_ * b.den_, a.den_ * b.num_);
}

Expr Expr::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero expression");
  return fraction(den_, num_);
}

Expr Expr::pow(long k) const {
  if (k == 0) return Expr(Rat(1));  // includes 0^0 = 1
  Expr base = k < 0 ? inv() : *this;
  unsigned long n = k < 0 ? -(unsigned long)k : (unsigned long)k;
  Expr r(Rat(1));
  while (n) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

size_t Expr::hash() const { return num_.hash() * 1000003 ^ den_.hash(); }

void Expr::collect_atoms(std::vector<AtomId>& out) const {
  num_.collect_atoms(out);
  den_.collect_atoms(out);
}

bool Expr::is_constant() const {
  if (!den_.is_one()) return false;
  for (auto& term : num_.terms())
    for (auto& [id, e] : term.m.entries())
      if (atom_info(id).kind != AtomKind::LogPrime) return false;
  return true;
}

// --- smart constructors -----------------------------------------------------

namespace {

// Factor a positive integer by trial division; residual factor (if any) is
// kept whole as its own multiplicatively independent "prime".
void factor_into(std::map<long, int>& out, long n, int mult) {
  for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      out[p] += mult;
      n /= p;
    }
  }
  if (n > 1) out[n] += mult;
}

Expr log_of_rat(const Rat& c) {
  if (c.sgn() <= 0) throw UnsupportedForm("log of a non-positive constant");
  std::map<long, int> f;
  factor_into(f, c.num_long(), 1);
  factor_into(f, c.den_long(), -1);
  Expr out;
  auto& tbl = AtomTable::instance();
  for (auto& [p, e] : f)
    if (e != 0) out += Rat(e) * Expr::atom(tbl.log_prime(p));
  return out;
}

Expr log_of_atom_power(AtomId a, int e);

Expr log_of_poly(const Poly& p) {
  if (p.is_zero()) throw DivisionByZero("log of zero");
  auto& tbl = AtomTable::instance();
  // The canonical argument has positive leading coefficient; the identity
  // checks run on domains where each argument keeps one sign, so log(-Q)
  // and log(Q) share the atom of |Q|.
  Poly q = p.lead_coeff().sgn() < 0 ? -p : p;
  Rat c = q.content();
  Mono common = q.terms()[0].m;
  for (auto& term : q.terms()) common = Mono::gcd(common, term.m);
  Poly core = Poly::exact_div(q.mul_rat(c.inv()),
                              Poly::atom(0, 0).mul_mono(common, Rat(1)));
  Expr out = log_of_rat(c);
  for (auto& [id, e] : common.entries()) out += log_of_atom_power(id, e);
  if (!core.is_one()) {
    if (core.contains_kind(AtomKind::Log) || core.contains_kind(AtomKind::LogPrime))
      throw UnsupportedForm("log of an expression containing logs");
    out += Expr::atom(tbl.log_atom(Expr::from_poly(core)));
  }
  return out;
}

Expr log_of_atom_power(AtomId a, int e) {
  auto& tbl = AtomTable::instance();
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Coord:
    case AtomKind::Jet:
    case AtomKind::Param:
      return Rat(e) * Expr::atom(tbl.log_atom(Expr::atom(a)));
    case AtomKind::Exp:
      return Rat(e) * Expr::atom(info.base);  // log(exp c) = c
    case AtomKind::Root: {
      Expr b = log_of(*info.arg);
      return Rat(e, info.order) * b;
    }
    default:
      throw UnsupportedForm("log of an expression containing logs");
  }
}

}  // namespace

Expr log_of(const Expr& arg) {
  if (arg.is_zero()) throw DivisionByZero("log of zero");
  return log_of_poly(arg.num()) - log_of_poly(arg.den());
}

Expr root_of(const Expr& base, int k) {
  if (k < 1) throw UnsupportedForm("root index must be >= 1");
  if (k == 1) return base;
  if (base.is_zero()) return Expr();
  auto& tbl = AtomTable::instance();
  // Clear the denominator: (N/D)^(1/k) = (N D^(k-1))^(1/k) / D.
  Poly N = base.num() * base.den().pow(k - 1);
  const Poly D = base.den();
  if (N.contains_kind(AtomKind::Root) || N.contains_kind(AtomKind::Log) ||
      N.contains_kind(AtomKind::LogPrime))
    throw UnsupportedForm("nested roots or roots of logs are not supported");
  // Extract k-th powers from the rational content.
  Rat c = N.content();
  Expr outer(Rat(1));
  Rat residual_c(1);
  {
    std::map<long, int> f;
    factor_into(f, c.num_long(), 1);
    factor_into(f, c.den_long(), -1);
    for (auto& [p, e] : f) {
      long q = e >= 0 ? e / k : -((-e + k - 1) / k);
      long r = e - q * k;
      outer = outer * Expr(Rat(p)).pow(q);
      residual_c *= Rat(p).pow(r);
    }
  }
  // Extract k-th powers from the common monomial factor.
  Poly body = Poly::exact_div(N, Poly(c));
  Mono common = body.terms()[0].m;
  for (auto& term : body.terms()) common = Mono::gcd(common, term.m);
  std::vector<Mono::Entry> residual_m;
  for (auto& [id, e] : common.entries()) {
    int q = e / k, r = e % k;
    if (q != 0) outer = outer * Expr::atom(id, q);
    if (r != 0) residual_m.push_back({id, r});
  }
  Poly core = Poly::exact_div(body, Poly(Rat(1)).mul_mono(common, Rat(1)));
  // Residual base in canonical key form (core keeps the overall sign).
  Poly key = core.mul_mono(Mono::from_sorted(std::move(residual_m)), residual_c);
  Expr result;
  if (key.is_one()) {
    result = outer;
  } else {
    AtomId a = tbl.root_atom(Expr::from_poly(key), k);
    result = outer * Expr::atom(a);
  }
  return result / Expr::from_poly(D);
}

Expr exp_of(const std::vector<std::pair<AtomId, Rat>>& linear_form) {
  auto& tbl = AtomTable::instance();
  Expr out(Rat(1));
  for (auto& [coord, coef] : linear_form) {
    if (coef.is_zero()) continue;
    if (atom_info(coord).kind != AtomKind::Coord)
      throw UndeclaredAtom("exp of a non-coordinate");
    Expr e1 = Expr::atom(tbl.exp_atom(coord));
    if (coef.is_integer()) {
      out = out * e1.pow(coef.to_long());
    } else {
      long den = coef.den_long();
      long num = coef.num_long();
      out = out * root_of(e1, (int)den).pow(num);
    }
  }
  return out;
}

Expr exp_of_expr(const Expr& e) {
  if (!e.is_poly())
    throw UnsupportedForm("exp of a non-polynomial combination");
  Expr out(Rat(1));
  auto& tbl = AtomTable::instance();
  for (auto& term : e.num().terms()) {
    auto& entries = term.m.entries();
    if (entries.empty())
      throw UnsupportedForm("exp of a nonzero constant term");
    if (entries.size() != 1 || entries[0].second != 1)
      throw UnsupportedForm("exp of a nonlinear term");
    AtomId a = entries[0].first;
    const AtomInfo& info = atom_info(a);
    const Rat& c = term.c;
    if (info.kind == AtomKind::Coord) {
      out = out * exp_of({{a, c}});
    } else if (info.kind == AtomKind::Log) {
      if (c.is_integer())
        out = out * info.arg->pow(c.to_long());
      else
        out = out * root_of(*info.arg, (int)c.den_long()).pow(c.num_long());
    } else if (info.kind == AtomKind::LogPrime) {
      if (c.is_integer())
        out = out * Expr(Rat(info.prime)).pow(c.to_long());
      else
        out = out * root_of(Expr(Rat(info.prime)), (int)c.den_long()).pow(c.num_long());
    } else {
      throw UnsupportedForm("exp of an unsupported term");
    }
  }
  return out;
}

// --- derivations ------------------------------------------------------------

bool JetFrame::contains(AtomId coordinate) const {
  return std::find(coords.begin(), coords.end(), coordinate) != coords.end();
}

namespace {

// d(atom)/dx as an Expr (may be a fraction for log/root atoms).
Expr atom_total_dx(AtomId a) {
  auto& tbl = AtomTable::instance();
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Coord:
      return Expr::atom(tbl.jet(a, 1));
    case AtomKind::Jet:
      return Expr::atom(tbl.jet(info.base, info.order + 1));
    case AtomKind::Param:
    case AtomKind::LogPrime:
      return Expr();
    case AtomKind::Exp:
      return Expr::atom(tbl.jet(info.base, 1)) * Expr::atom(a);
    case AtomKind::Log:
      return total_x_derivative(*info.arg) / *info.arg;
    case AtomKind::Root: {
      const Expr& base = *info.arg;
      return Expr::atom(a) * total_x_derivative(base) /
             (Rat(info.order) * base);
    }
  }
  return Expr();
}

// Dependence through composite atoms: exp(c) depends on c, log/root atoms
// depend on whatever their argument depends on. Jets stay independent of
// their coordinate under formal partial derivatives.
bool atom_depends(AtomId a, AtomId target);

bool expr_depends(const Expr& e, AtomId target) {
  std::vector<AtomId> atoms;
  e.collect_atoms(atoms);
  for (AtomId a : atoms)
    if (atom_depends(a, target)) return true;
  return false;
}

bool atom_depends(AtomId a, AtomId target) {
  if (a == target) return true;
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Exp:
      return info.base == target;
    case AtomKind::Log:
    case AtomKind::Root:
      return info.arg && expr_depends(*info.arg, target);
    default:
      return false;
  }
}

Expr atom_partial(AtomId a, AtomId target) {
  const AtomInfo& info = atom_info(a);
  if (a == target) return Expr(Rat(1));
  switch (info.kind) {
    case AtomKind::Coord:
    case AtomKind::Jet:
    case AtomKind::Param:
    case AtomKind::LogPrime:
      return Expr();
    case AtomKind::Exp:
      return info.base == target ? Expr::atom(a) : Expr();
    case AtomKind::Log: {
      if (!expr_depends(*info.arg, target)) return Expr();
      return partial_derivative(*info.arg, target) / *info.arg;
    }
    case AtomKind::Root: {
      if (!expr_depends(*info.arg, target)) return Expr();
      return Expr::atom(a) * partial_derivative(*info.arg, target) /
             (Rat(info.order) * *info.arg);
    }
  }
  return Expr();
}

// Generic Leibniz derivation of a polynomial given the atom derivative map.
template <typename AtomDeriv>
Expr derive_poly(const Poly& p, AtomDeriv&& datom) {
  Expr acc;
  for (auto& term : p.terms()) {
    auto& entries = term.m.entries();
    for (size_t i = 0; i < entries.size(); ++i) {
      Expr d = datom(entries[i].first);
      if (d.is_zero()) continue;
      // c * e_i * atom_i^(e_i - 1) * d * prod_{j != i} atom_j^(e_j)
      std::vector<Mono::Entry> rest;
      for (size_t j = 0; j < entries.size(); ++j) {
        int e = entries[j].second - (j == i ? 1 : 0);
        if (e != 0) rest.push_back({entries[j].first, e});
      }
      Poly m = Poly(Rat(1)).mul_mono(Mono::from_sorted(std::move(rest)),
                                     term.c * Rat(entries[i].second));
      acc += Expr::from_poly(m) * d;
    }
  }
  return acc;
}

template <typename AtomDeriv>
Expr derive_expr(const Expr& e, AtomDeriv&& datom) {
  Expr dn = derive_poly(e.num(), datom);
  if (e.is_poly()) return dn;
  Expr dd = derive_poly(e.den(), datom);
  Expr den = Expr::from_poly(e.den());
  return dn / den - Expr::from_poly(e.num()) * dd / (den * den);
}

}  // namespace

Expr total_x_derivative(const Expr& e) {
  return derive_expr(e, [](AtomId a) { return atom_total_dx(a); });
}

Expr total_x_derivative(const Expr& e, int times) {
  Expr r = e;
  for (int i = 0; i < times; ++i) r = total_x_derivative(r);
  return r;
}

Expr partial_derivative(const Expr& e, AtomId target) {
  AtomKind k = atom_info(target).kind;
  if (k != AtomKind::Coord && k != AtomKind::Jet && k != AtomKind::Param)
    throw NonDifferentiableTarget(
        "partial derivative target must be a coordinate, jet or parameter");
  return derive_expr(e, [target](AtomId a) { return atom_partial(a, target); });
}

// --- antiderivative ---------------------------------------------------------

namespace {

struct CSplit {
  int n = 0;         // power of the coordinate itself
  int m = 0;         // power of exp(c)
  int l = 0;         // power of log(c)
  int rho = 0;       // power of the root-of-c atom
  int root_k = 0;    // its index
  AtomId root_id = -1, log_id = -1, exp_id = -1;
  Mono rest;         // c-free part
};

bool split_term_in(const Mono& m, AtomId c, CSplit& out) {
  std::vector<Mono::Entry> rest;
  for (auto& [id, e] : m.entries()) {
    if (id == c) {
      out.n += e;
      continue;
    }
    const AtomInfo& info = atom_info(id);
    bool touches = false;
    switch (info.kind) {
      case AtomKind::Exp:
        touches = info.base == c;
        if (touches) {
          out.m += e;
          out.exp_id = id;
        }
        break;
      case AtomKind::Log:
        touches = info.arg->contains_atom(c);
        if (touches) {
          if (!(*info.arg == Expr::atom(c))) return false;
          out.l += e;
          out.log_id = id;
        }
        break;
      case AtomKind::Root:
        touches = info.arg->contains_atom(c);
        if (touches) {
          if (!(*info.arg == Expr::atom(c))) return false;
          out.rho += e;
          out.root_k = info.order;
          out.root_id = id;
        }
        break;
      default:
        break;
    }
    if (!touches) rest.push_back({id, e});
  }
  out.rest = Mono::from_sorted(std::move(rest));
  return true;
}

}  // namespace

namespace {

// integral of num(c) * (c+A)^(-b) dc with A c-free and num polynomial in c:
// shift-expand the numerator in powers of (c+A).
Expr integrate_shifted(const Expr& num, AtomId c, const Expr& A, int b) {
  Expr s = Expr::atom(c) + A;
  // Taylor coefficients of num around c = -A.
  std::vector<Expr> coef;
  Expr d = num;
  Rat fact(1);
  for (int i = 0;; ++i) {
    if (i > 0) {
      d = partial_derivative(d, c);
      fact *= Rat(i);
    }
    if (d.is_zero()) break;
    std::map<AtomId, Expr> at;
    at[c] = -A;
    coef.push_back(substitute(d, at) / Expr(fact));
    if (i > 64) throw NotIntegrableInClass("shift expansion failed to terminate");
  }
  Expr acc;
  for (int i = 0; i < (int)coef.size(); ++i) {
    if (coef[i].is_zero()) continue;
    int k = i - b;
    if (k == -1)
      acc += coef[i] * log_of(s);
    else
      acc += coef[i] * s.pow(k + 1) / Expr(Rat(k + 1));
  }
  return acc;
}

}  // namespace

Expr antiderivative(const Expr& e, AtomId coordinate) {
  if (atom_info(coordinate).kind != AtomKind::Coord)
    throw NotIntegrableInClass("antiderivative target must be a coordinate");
  if (!e.jet_free())
    throw NotIntegrableInClass("antiderivative requires a jet-free integrand");
  if (e.is_zero()) return Expr();
  Poly den = e.den();
  // A pure monomial exp(c)^h factor of the denominator folds into the
  // numerator as a negative exponent.
  int exp_den = 0;
  AtomId exp_atom_id = -1;
  {
    Mono common = den.terms()[0].m;
    for (auto& term : den.terms()) common = Mono::gcd(common, term.m);
    for (auto& [id, ee] : common.entries()) {
      const AtomInfo& info = atom_info(id);
      if (info.kind == AtomKind::Exp && info.base == coordinate) {
        exp_den = ee;
        exp_atom_id = id;
      }
    }
    if (exp_den > 0)
      den = Poly::exact_div(den, Poly::atom(exp_atom_id, exp_den));
  }
  for (auto& term : den.terms())
    for (auto& [id, ee] : term.m.entries()) {
      const AtomInfo& info = atom_info(id);
      bool touches =
          (info.kind == AtomKind::Exp && info.base == coordinate) ||
          ((info.kind == AtomKind::Log || info.kind == AtomKind::Root) &&
           info.arg->contains_atom(coordinate));
      if (touches)
        throw NotIntegrableInClass(
            "denominator contains composite atoms of the coordinate: " +
            e.str());
    }
  int j = 0;
  bool simple_den = true;
  {
    std::vector<Poly> cd = den.coeffs_in(coordinate);
    int nonzero = -1;
    for (int i = 0; i < (int)cd.size(); ++i)
      if (!cd[i].is_zero()) {
        if (nonzero >= 0) simple_den = false;
        if (nonzero < 0) nonzero = i;
      }
    j = std::max(nonzero, 0);
  }
  if (!simple_den) {
    if (exp_den != 0)
      throw NotIntegrableInClass(
          "exp factors over a linear-factor denominator");
    // den = Dfree * c^j0 * L * (c + A)^m : split by partial fractions.
    Poly cont;
    std::vector<Poly> cd = den.coeffs_in(coordinate);
    Poly g;
    for (auto& ci : cd)
      if (!ci.is_zero()) g = Poly::gcd(g, ci);
    Poly core = Poly::exact_div(den, g);
    std::vector<Poly> cc = core.coeffs_in(coordinate);
    int j0 = 0;
    while (j0 < (int)cc.size() && cc[j0].is_zero()) ++j0;
    if (j0 > 0) core = Poly::exact_div(core, Poly::atom(coordinate, j0));
    cc = core.coeffs_in(coordinate);
    int m = (int)cc.size() - 1;
    if (m < 1)
      throw NotIntegrableInClass("denominator is not a linear-factor power");
    Expr L = Expr::from_poly(cc[m]);
    // core == L * (c + A)^m with A = cc[m-1] / (m * L)
    Expr A = Expr::from_poly(cc[m - 1]) / (Rat(m) * L);
    Expr rebuilt = L * (Expr::atom(coordinate) + A).pow(m);
    if (!(rebuilt == Expr::from_poly(core)))
      throw NotIntegrableInClass(
          "denominator does not factor as a power of one linear form");
    Expr numfree = Expr::from_poly(e.num()) /
                   (Expr::from_poly(g) * L);
    // reduce num/(c^j0 (c+A)^m) with 1/(c(c+A)) = (1/A)(1/c - 1/(c+A))
    struct Piece {
      Expr num;
      int a, b;
    };
    std::vector<Piece> work{{numfree, j0, m}};
    Expr acc;
    while (!work.empty()) {
      Piece p = work.back();
      work.pop_back();
      if (p.num.is_zero()) continue;
      if (p.a > 0 && p.b > 0) {
        Expr f = p.num / A;
        work.push_back({f, p.a, p.b - 1});
        work.push_back({-f, p.a - 1, p.b});
        continue;
      }
      if (p.b == 0) {
        acc += antiderivative(p.num / Expr::atom(coordinate).pow(p.a), coordinate);
      } else {
        // numerators may carry composite atoms of c only in the plain case
        if (p.num.num().contains_kind(AtomKind::Exp) ||
            p.num.num().contains_kind(AtomKind::Log) ||
            p.num.num().contains_kind(AtomKind::Root)) {
          bool touches = false;
          std::vector<AtomId> atoms;
          p.num.collect_atoms(atoms);
          for (AtomId id : atoms) {
            const AtomInfo& info = atom_info(id);
            if ((info.kind == AtomKind::Exp && info.base == coordinate) ||
                ((info.kind == AtomKind::Log || info.kind == AtomKind::Root) &&
                 info.arg && info.arg->contains_atom(coordinate)))
              touches = true;
          }
          if (touches)
            throw NotIntegrableInClass(
                "composite atoms over a linear-factor denominator");
        }
        if (!p.num.is_poly()) {
          // c-free denominators are fine; fold them into the numerator scale
          if (p.num.den().contains_atom(coordinate))
            throw NotIntegrableInClass("nested denominator in partial fraction");
        }
        acc += integrate_shifted(p.num, coordinate, A, p.b);
      }
    }
    return acc;
  }
  Poly den_free = Poly::exact_div(den, Poly::atom(coordinate, j).mul_rat(Rat(1)));
  if (j == 0) den_free = den;
  Expr inv_free = Expr::fraction(Poly(Rat(1)), den_free);

  auto& tbl = AtomTable::instance();
  Expr acc;
  for (auto& term : e.num().terms()) {
    CSplit s;
    if (!split_term_in(term.m, coordinate, s))
      throw NotIntegrableInClass("term outside the supported antiderivative table");
    s.n -= j;
    if (exp_den != 0) {
      s.m -= exp_den;
      if (s.exp_id < 0) s.exp_id = exp_atom_id;
    }
    Expr cfree = Expr::from_poly(Poly(Rat(1)).mul_mono(s.rest, term.c)) * inv_free;
    Expr cpow = Expr::atom(coordinate, 1);
    if (s.m != 0) {
      if (s.l != 0 || s.rho != 0 || s.n < 0)
        throw NotIntegrableInClass("exp term outside the supported table");
      // int c^n exp(m c) dc by parts.
      Expr em = Expr::atom(s.exp_id, s.m);
      Expr sum;
      Rat fall(1);
      for (int i = 0; i <= s.n; ++i) {
        // (-1)^i * n!/(n-i)! / m^(i+1) * c^(n-i)
        Rat coef = fall / Rat(s.m).pow(i + 1);
        if (i % 2) coef = -coef;
        sum += coef * cpow.pow(s.n - i);
        fall *= Rat(s.n - i);
      }
      acc += cfree * em * sum;
    } else if (s.l != 0) {
      if (s.l != 1 || s.rho != 0)
        throw NotIntegrableInClass("log power outside the supported table");
      if (s.n == -1)
        throw NotIntegrableInClass("log(c)/c has no antiderivative in the class");
      Rat q(1, s.n + 1);
      acc += cfree * (q * cpow.pow(s.n + 1) * Expr::atom(s.log_id) -
                      q * q * cpow.pow(s.n + 1));
    } else if (s.rho != 0) {
      long k = s.root_k;
      long dnm = k * (s.n + 1) + s.rho;
      if (dnm == 0) throw NotIntegrableInClass("unreachable root exponent");
      acc += Rat(k, dnm) * (cfree * cpow.pow(s.n + 1) * Expr::atom(s.root_id, s.rho));
    } else {
      if (s.n == -1) {
        acc += cfree * log_of(cpow);
      } else {
        acc += Rat(1, s.n + 1) * (cfree * cpow.pow(s.n + 1));
      }
    }
  }
  (void)tbl;
  return acc;
}

// --- parameter grading -------------------------------------------------------

std::vector<Expr> grade_coefficients(const Expr& e, AtomId parameter, int min_deg,
                                     int max_deg) {
  if (max_deg < min_deg) throw OutOfRangeDegree("empty grading window");
  std::vector<Expr> out(max_deg - min_deg + 1);
  if (e.is_zero()) return out;
  const Poly& den = e.den();
  std::vector<Poly> dc = den.coeffs_in(parameter);
  int j = -1;
  for (int i = 0; i < (int)dc.size(); ++i)
    if (!dc[i].is_zero()) {
      if (j >= 0)
        throw OutOfRangeDegree("expression is not Laurent in the parameter");
      j = i;
    }
  // Composite atoms must not hide the parameter.
  auto check_poly = [&](const Poly& p) {
    for (auto& term : p.terms())
      for (auto& [id, ee] : term.m.entries()) {
        const AtomInfo& info = atom_info(id);
        if ((info.kind == AtomKind::Log || info.kind == AtomKind::Root) &&
            info.arg->contains_atom(parameter))
          throw OutOfRangeDegree("parameter occurs inside a composite atom");
      }
  };
  check_poly(e.num());
  check_poly(den);
  Expr inv_free = Expr::fraction(Poly(Rat(1)), dc[j]);
  std::vector<Poly> nc = e.num().coeffs_in(parameter);
  for (int i = 0; i < (int)nc.size(); ++i) {
    if (nc[i].is_zero()) continue;
    int deg = i - j;
    if (deg < min_deg || deg > max_deg)
      throw OutOfRangeDegree("coefficient outside the requested window");
    out[deg - min_deg] = Expr::from_poly(nc[i]) * inv_free;
  }
  return out;
}

Expr coefficient_of(const Expr& e, AtomId parameter, int k) {
  if (e.is_zero()) return Expr();
  // Wide window; reuses the validation above.
  int lo = std::min(k, -(int)e.den().degree_in(parameter) - 1);
  int hi = std::max(k, (int)e.num().degree_in(parameter) + 1);
  std::vector<Expr> g = grade_coefficients(e, parameter, lo, hi);
  return g[k - lo];
}

Expr truncate_in(const Expr& e, AtomId parameter, int max_deg) {
  if (e.is_zero()) return Expr();
  int lo = -(int)e.den().degree_in(parameter);
  int hi = std::max(max_deg, (int)e.num().degree_in(parameter));
  std::vector<Expr> g = grade_coefficients(e, parameter, lo, hi);
  Expr acc;
  for (int d = lo; d <= std::min(hi, max_deg); ++d) {
    if (g[d - lo].is_zero()) continue;
    acc += g[d - lo] * Expr::atom(parameter, 1).pow(d);
  }
  return acc;
}

}  // namespace gfm
