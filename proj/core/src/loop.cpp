#include "gfm/loop.hpp"

#include <numeric>

namespace gfm {

namespace {

struct JetTools {
  AtomId v;
  AtomId eps;
  int max_jet;

  Expr jet(int s) const {
    return s == 0 ? Expr::atom(v) : Expr::atom(AtomTable::instance().jet(v, s));
  }
};

// Assembles Delta F = sum_{g' <= G} eps^{2g'-2} F_{g'} and caches the jet
// partials that the loop equation consumes.
struct DeltaF {
  std::vector<Expr> F;
  AtomId v;
  AtomId eps;
  int max_jet = 0;

  DeltaF(const GFManifold& m, const std::vector<Expr>& Fs, AtomId eps_)
      : F(Fs), v(m.coords[0]), eps(eps_) {
    for (auto& f : F) {
      std::vector<AtomId> atoms;
      f.collect_atoms(atoms);
      for (AtomId a : atoms) {
        const AtomInfo& info = atom_info(a);
        if (info.kind == AtomKind::Jet && info.base == v)
          max_jet = std::max(max_jet, info.order);
        if (info.kind == AtomKind::Log && info.arg) {
          std::vector<AtomId> inner;
          info.arg->collect_atoms(inner);
          for (AtomId b : inner) {
            const AtomInfo& bi = atom_info(b);
            if (bi.kind == AtomKind::Jet && bi.base == v)
              max_jet = std::max(max_jet, bi.order);
          }
        }
      }
    }
  }

  Expr value() const {
    Expr acc;
    Expr E = Expr::atom(eps);
    for (size_t g = 1; g <= F.size(); ++g) acc += E.pow(2 * (int)g - 2) * F[g - 1];
    return acc;
  }

  AtomId jet_atom(int s) const {
    return s == 0 ? v : AtomTable::instance().jet(v, s);
  }
};

}  // namespace

Expr loop_residual_M(const GFManifold& kdv, const std::vector<Expr>& F, int g) {
  auto& t = AtomTable::instance();
  AtomId v = kdv.coords[0];
  AtomId lam = t.param("lambda");
  Expr V = Expr::atom(v), L = Expr::atom(lam);
  Expr y = root_of((V - L).inv(), 2);  // (v - lambda)^(-1/2)
  if ((int)F.size() < g) throw KernelError("missing genus data");
  DeltaF df(kdv, F, t.param("eps"));
  int S = df.max_jet;
  // x-derivative chains; powers of y keep the lambda-dependence polynomial.
  std::vector<Expr> dx_inv{y * y};
  std::vector<Expr> dx_y{y};
  std::vector<Expr> dx_inv2{y.pow(4)};
  for (int s = 1; s <= S + 2; ++s) {
    dx_inv.push_back(total_x_derivative(dx_inv.back()));
    dx_y.push_back(total_x_derivative(dx_y.back()));
    dx_inv2.push_back(total_x_derivative(dx_inv2.back()));
  }
  // jet gradients of the individual genus densities
  auto grad_of = [&](int gg) {
    std::vector<Expr> d(S + 1);
    for (int s = 0; s <= S; ++s)
      d[s] = partial_derivative(F[gg - 1], df.jet_atom(s));
    return d;
  };
  std::vector<std::vector<Expr>> dF(g + 1);
  for (int gg = 1; gg <= g; ++gg) dF[gg] = grad_of(gg);

  // the genus-g block of (lhs - rhs)
  Expr block;
  for (int s = 0; s <= S; ++s) {
    if (dF[g][s].is_zero()) continue;
    Expr bracket = dx_inv[s];
    for (int k = 1; k <= s; ++k)
      bracket += rat_binomial(s, k) * (dx_y[k - 1] * dx_y[s + 1 - k]);
    block += dF[g][s] * bracket;
  }
  for (int k = 0; k <= S; ++k) {
    for (int l = 0; l <= S; ++l) {
      Expr blob;
      if (g >= 2 && !dF[g - 1][k].is_zero())
        blob += partial_derivative(dF[g - 1][k], df.jet_atom(l));
      for (int g1 = 1; g1 < g; ++g1) {
        int g2 = g - g1;
        if (!dF[g1][k].is_zero() && !dF[g2][l].is_zero())
          blob += dF[g1][k] * dF[g2][l];
      }
      if (blob.is_zero()) continue;
      block -= Rat(1, 2) * blob * (dx_y[k + 1] * dx_y[l + 1]);
    }
    if (g >= 2 && !dF[g - 1][k].is_zero())
      block += Rat(1, 16) * dF[g - 1][k] * dx_inv2[k + 2];
  }
  if (g == 1) block += Rat(1, 16) * dx_inv2[0];
  return block;
}

Expr loop_residual_Mhat(const GFManifold& hat, const std::vector<Expr>& F, int g) {
  auto& t = AtomTable::instance();
  AtomId vh = hat.coords[0];
  AtomId eps = t.param("eps");
  AtomId lam = t.param("lambda");
  Expr V = Expr::atom(vh), L = Expr::atom(lam);
  Expr yh = root_of((V * V - L).inv(), 2);  // (vh^2-lambda)^(-1/2)
  DeltaF df(hat, F, eps);
  Expr DF = df.value();
  int S = df.max_jet;

  std::vector<Expr> dx_y{yh};
  std::vector<Expr> dx_first{yh * yh / (Rat(2) * V)};
  std::vector<Expr> dx_zeroth{(Rat(2) * L).inv() * (yh - V.inv())};
  std::vector<Expr> dx_kernel{(Rat(2) * L).inv() * (V * yh - Expr(Rat(1)))};
  Expr vx = Expr::atom(t.jet(vh, 1));
  std::vector<Expr> dx_source{V * V * vx * yh.pow(6)};
  for (int s = 1; s <= S + 2; ++s) {
    dx_y.push_back(total_x_derivative(dx_y.back()));
    dx_first.push_back(total_x_derivative(dx_first.back()));
    dx_zeroth.push_back(total_x_derivative(dx_zeroth.back()));
    dx_kernel.push_back(total_x_derivative(dx_kernel.back()));
    dx_source.push_back(total_x_derivative(dx_source.back()));
  }
  auto grad_of = [&](int gg) {
    std::vector<Expr> d(S + 1);
    for (int s = 0; s <= S; ++s)
      d[s] = partial_derivative(F[gg - 1], df.jet_atom(s));
    return d;
  };
  if ((int)F.size() < g) throw KernelError("missing genus data");
  std::vector<std::vector<Expr>> dF(g + 1);
  for (int gg = 1; gg <= g; ++gg) dF[gg] = grad_of(gg);

  Expr block;
  for (int s = 0; s <= S; ++s) {
    if (dF[g][s].is_zero()) continue;
    Expr blk = dx_first[s];
    if (s >= 1) blk += Rat(s) * dx_zeroth[s];
    for (int k = 1; k <= s; ++k)
      blk += rat_binomial(s, k) * (dx_kernel[k - 1] * dx_y[s + 1 - k]);
    block += dF[g][s] * blk;
  }
  for (int k = 0; k <= S; ++k) {
    for (int l = 0; l <= S; ++l) {
      Expr blob;
      if (g >= 2 && !dF[g - 1][k].is_zero())
        blob += partial_derivative(dF[g - 1][k], df.jet_atom(l));
      for (int g1 = 1; g1 < g; ++g1) {
        int g2 = g - g1;
        if (!dF[g1][k].is_zero() && !dF[g2][l].is_zero())
          blob += dF[g1][k] * dF[g2][l];
      }
      if (blob.is_zero()) continue;
      block -= Rat(1, 2) * blob * (dx_y[k + 1] * dx_y[l + 1]);
    }
    if (g >= 2 && !dF[g - 1][k].is_zero())
      block -= Rat(1, 2) * dF[g - 1][k] * dx_source[k + 1];
  }
  if (g == 1) block += Rat(1, 16) * yh.pow(4);
  return block;
}

std::pair<Expr, Expr> root_parity_split(const Expr& e, AtomId root_atom_id) {
  // root exponents are already reduced below 2; split the numerator.
  std::vector<Poly::Term> even, odd;
  for (auto& term : e.num().terms()) {
    if (term.m.exponent(root_atom_id) % 2)
      odd.push_back(term);
    else
      even.push_back(term);
  }
  Expr den = Expr::from_poly(e.den());
  Expr ev = Expr::from_poly(Poly::from_terms(std::move(even))) / den;
  Expr od = Expr::from_poly(Poly::from_terms(std::move(odd))) / den;
  return {ev, od};
}

std::vector<Expr> laurent_coefficients(const Expr& e, AtomId lambda, int count,
                                       int* lead_power) {
  if (e.is_zero()) {
    if (lead_power) *lead_power = 0;
    return std::vector<Expr>(count);
  }
  // numerator and denominator as polynomials in lambda (descending)
  std::vector<Poly> nc = e.num().coeffs_in(lambda);
  std::vector<Poly> dc = e.den().coeffs_in(lambda);
  int dn = (int)nc.size() - 1, dd = (int)dc.size() - 1;
  // series in mu = 1/lambda: num = lambda^dn sum_i nc[dn-i] mu^i
  auto as_series = [&](const std::vector<Poly>& c, int deg) {
    std::vector<Expr> s(count);
    for (int i = 0; i < count && i <= deg; ++i)
      s[i] = Expr::from_poly(c[deg - i]);
    return s;
  };
  std::vector<Expr> ns = as_series(nc, dn);
  std::vector<Expr> ds = as_series(dc, dd);
  if (ds[0].is_zero())
    throw LaurentOrderExhausted("denominator has vanishing leading term");
  // invert ds as a power series
  std::vector<Expr> inv(count);
  inv[0] = ds[0].inv();
  for (int i = 1; i < count; ++i) {
    Expr acc;
    for (int j = 1; j <= i; ++j) acc += ds[j] * inv[i - j];
    inv[i] = -acc * inv[0];
  }
  std::vector<Expr> out(count);
  for (int i = 0; i < count; ++i) {
    Expr acc;
    for (int j = 0; j <= i; ++j) acc += ns[j] * inv[i - j];
    out[i] = acc;
  }
  if (lead_power) *lead_power = dn - dd;
  return out;
}

StructureReport verify_loop_M(const GFManifold& kdv, const std::vector<Expr>& F,
                              int gmax) {
  StructureReport rep;
  for (int g = 1; g <= gmax; ++g) {
    Expr r = loop_residual_M(kdv, F, g);
    rep.require_zero("loop_M[g=" + std::to_string(g) + "]", r);
  }
  return rep;
}

StructureReport verify_loop_Mhat(const GFManifold& hat,
                                 const std::vector<Expr>& F, int gmax,
                                 int laurent_order) {
  StructureReport rep;
  auto& t = AtomTable::instance();
  AtomId lam = t.param("lambda");
  for (int g = 1; g <= gmax; ++g) {
    Expr r = loop_residual_Mhat(hat, F, g);
    // parity split and Laurent expansion in 1/lambda
    Expr V = hat.coord_expr(0);
    Expr yh = root_of((V * V - Expr::atom(lam)).inv(), 2);
    AtomId root_id = -1;
    {
      std::vector<AtomId> atoms;
      yh.collect_atoms(atoms);
      for (AtomId a : atoms)
        if (atom_info(a).kind == AtomKind::Root) root_id = a;
    }
    auto [ev, od] = root_parity_split(r, root_id);
    int lead = 0;
    auto ec = laurent_coefficients(ev, lam, laurent_order, &lead);
    for (int i = 0; i < laurent_order; ++i)
      rep.require_zero("loop_Mhat_even[g=" + std::to_string(g) +
                           ",k=" + std::to_string(i) + "]",
                       ec[i]);
    // the odd part carries one root factor; its rational cofactor expands
    Expr od_rat = od / yh;
    auto oc = laurent_coefficients(od_rat, lam, laurent_order, &lead);
    for (int i = 0; i < laurent_order; ++i)
      rep.require_zero("loop_Mhat_odd[g=" + std::to_string(g) +
                           ",k=" + std::to_string(i) + "]",
                       oc[i]);
    // exact certification on top of the truncated expansion
    rep.require_zero("loop_Mhat_exact[g=" + std::to_string(g) + "]", r);
  }
  return rep;
}

std::string genus_correspondence(const GFManifold& src, const Expr& F_g,
                                 const Expr& Fhat_g, const SubstMap& pullback) {
  Expr diff = F_g - pullback.apply(Fhat_g);
  if (diff.is_zero()) return "0";
  if (diff.is_constant()) return diff.str();
  // gradient test over every colour of jet present
  {
    std::vector<AtomId> targets;
    for (AtomId c : src.coords) {
      targets.push_back(c);
      for (int s = 1; s <= 12; ++s)
        targets.push_back(AtomTable::instance().jet(c, s));
    }
    for (AtomId a : targets)
      if (!partial_derivative(diff, a).is_zero())
        throw NonConstantDifference("genus difference depends on " +
                                    atom_info(a).name);
  }
  // constant of the form q + sum c_i log(A_i): exponentiate to decide
  Rat q(0);
  std::vector<std::pair<Rat, AtomId>> logs;
  if (!diff.is_poly())
    throw NonConstantDifference("unexpected denominator in a constant");
  long lcm = 1;
  for (auto& term : diff.num().terms()) {
    auto& ent = term.m.entries();
    if (ent.empty()) {
      q = term.c;
      continue;
    }
    if (ent.size() != 1 || ent[0].second != 1)
      throw NonConstantDifference("nonlinear log combination");
    const AtomInfo& info = atom_info(ent[0].first);
    if (info.kind != AtomKind::Log && info.kind != AtomKind::LogPrime)
      throw NonConstantDifference("non-log residual term");
    logs.push_back({term.c, ent[0].first});
    long den = term.c.den_long();
    lcm = lcm / std::gcd(lcm, den) * den;
  }
  Expr prod(Rat(1));
  for (auto& [c, a] : logs) {
    Rat e = c * Rat(lcm);
    const AtomInfo& info = atom_info(a);
    Expr base = info.kind == AtomKind::LogPrime ? Expr(Rat(info.prime))
                                                : *info.arg;
    prod = prod * base.pow(e.to_long());
  }
  if (!prod.is_rat())
    throw NonConstantDifference("log arguments do not collapse to a constant");
  Rat r = prod.rat_value();
  std::string out = q.str();
  if (!(r == Rat(1)))
    out += " + (1/" + std::to_string(lcm) + ")*log(" + r.str() + ")";
  return out;
}

}  // namespace gfm
