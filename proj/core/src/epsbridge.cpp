#include "gfm/epsbridge.hpp"

#include "gfm/hierarchy.hpp"

namespace gfm {

Expr eps_expand(const Expr& e, AtomId eps, int order) {
  if (e.is_zero()) return e;
  const Poly& den = e.den();
  std::vector<Poly> dc = den.coeffs_in(eps);
  int j0 = 0;
  while (j0 < (int)dc.size() && dc[j0].is_zero()) ++j0;
  bool multi = false;
  for (int i = j0 + 1; i < (int)dc.size(); ++i)
    if (!dc[i].is_zero()) multi = true;
  if (!multi) return truncate_in(e, eps, order);
  Expr D0 = Expr::from_poly(dc[j0]);
  Expr rest;
  for (int i = j0 + 1; i < (int)dc.size(); ++i) {
    if (dc[i].is_zero()) continue;
    rest += Expr::from_poly(dc[i]) * Expr::atom(eps, 1).pow(i - j0);
  }
  Expr T = rest / D0;  // strictly positive eps grade
  Expr inv(Rat(1));
  Expr pw(Rat(1));
  for (int j = 1; j <= order; ++j) {
    pw = truncate_in(pw * T, eps, order);
    if (pw.is_zero()) break;
    inv += (j % 2 ? Rat(-1) : Rat(1)) * pw;
  }
  Expr num_over = Expr::from_poly(e.num()) / D0;
  Expr out = truncate_in(num_over * inv, eps, order + j0);
  return truncate_in(out * Expr::atom(eps, 1).pow(-j0), eps, order);
}

namespace {

struct SeriesSubst {
  const std::map<AtomId, Expr>& images;
  AtomId eps;
  int order;
  std::map<AtomId, Expr> cache;

  Expr truncate(const Expr& e) { return eps_expand(e, eps, order); }

  Expr grade0(const Expr& e) { return coefficient_of(e, eps, 0); }

  Expr image(AtomId a) {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    const AtomInfo& info = atom_info(a);
    Expr img;
    switch (info.kind) {
      case AtomKind::Coord: {
        auto b = images.find(a);
        img = b == images.end() ? Expr::atom(a) : truncate(b->second);
        break;
      }
      case AtomKind::Param:
      case AtomKind::LogPrime:
        img = Expr::atom(a);
        break;
      case AtomKind::Jet: {
        Expr prev = info.order == 1
                        ? image(info.base)
                        : image(AtomTable::instance().jet(info.base,
                                                          info.order - 1));
        img = truncate(total_x_derivative(prev));
        break;
      }
      case AtomKind::Exp: {
        Expr X = image(info.base);
        Expr X0 = grade0(X);
        Expr delta = X - X0;
        Expr base = exp_of_expr(X0);
        Expr acc = base;
        Expr pow(Rat(1));
        for (int j = 1; j <= order && !delta.is_zero(); ++j) {
          pow = truncate(pow * delta);
          if (pow.is_zero()) break;
          acc += base * pow / Expr(rat_factorial(j));
        }
        img = truncate(acc);
        break;
      }
      case AtomKind::Log: {
        Expr Y = apply(*info.arg);
        Expr Y0 = grade0(Y);
        if (Y0.is_zero())
          throw OrderExhausted("log argument loses its leading term");
        Expr T = Y / Y0 - Expr(Rat(1));
        Expr acc = log_of(Y0);
        Expr pow(Rat(1));
        for (int j = 1; j <= order; ++j) {
          pow = truncate(pow * T);
          if (pow.is_zero()) break;
          Rat c(j % 2 ? 1 : -1, j);
          acc += c * pow;
        }
        img = truncate(acc);
        break;
      }
      case AtomKind::Root: {
        Expr Y = apply(*info.arg);
        Expr Y0 = grade0(Y);
        if (Y0.is_zero())
          throw OrderExhausted("root base loses its leading term");
        Expr T = Y / Y0 - Expr(Rat(1));
        Expr acc(Rat(1));
        Expr pow(Rat(1));
        Rat binom(1);
        for (int j = 1; j <= order; ++j) {
          binom *= (Rat(1, info.order) - Rat(j - 1)) / Rat(j);
          pow = truncate(pow * T);
          if (pow.is_zero()) break;
          acc += binom * pow;
        }
        img = truncate(root_of(Y0, info.order) * acc);
        break;
      }
    }
    cache.emplace(a, img);
    return img;
  }

  Expr apply(const Expr& e) {
    auto apply_poly = [&](const Poly& p) {
      Expr acc;
      for (auto& term : p.terms()) {
        Expr t(term.c);
        for (auto& [id, ee] : term.m.entries()) {
          t = truncate(t * image(id).pow(ee));
          if (t.is_zero()) break;
        }
        acc += t;
      }
      return acc;
    };
    Expr num = apply_poly(e.num());
    if (e.is_poly()) return truncate(num);
    Expr den = apply_poly(e.den());
    return truncate(num / den);
  }
};

}  // namespace

Expr series_substitute(const Expr& e, const std::map<AtomId, Expr>& images,
                       AtomId eps, int order) {
  SeriesSubst s{images, eps, order, {}};
  return s.apply(e);
}

namespace genus {

namespace {
Expr J(AtomId c, int s) {
  return s == 0 ? Expr::atom(c) : Expr::atom(AtomTable::instance().jet(c, s));
}
}  // namespace

Expr kdv_F(const GFManifold& kdv, int g) {
  AtomId v = kdv.coords[0];
  Expr v1 = J(v, 1), v2 = J(v, 2), v3 = J(v, 3), v4 = J(v, 4);
  switch (g) {
    case 1:
      return Rat(1, 24) * log_of(v1);
    case 2:
      return v4 / (Rat(1152) * v1.pow(2)) -
             Rat(7) * v3 * v2 / (Rat(1920) * v1.pow(3)) +
             v2.pow(3) / (Rat(360) * v1.pow(4));
    case 3: {
      Expr v5 = J(v, 5), v6 = J(v, 6), v7 = J(v, 7);
      return v7 / (Rat(82944) * v1.pow(3)) -
             Rat(7) * v6 * v2 / (Rat(46080) * v1.pow(4)) -
             Rat(53) * v5 * v3 / (Rat(161280) * v1.pow(4)) +
             Rat(353) * v5 * v2.pow(2) / (Rat(322560) * v1.pow(5)) -
             Rat(103) * v4.pow(2) / (Rat(483840) * v1.pow(4)) +
             Rat(1273) * v4 * v3 * v2 / (Rat(322560) * v1.pow(5)) -
             Rat(83) * v4 * v2.pow(3) / (Rat(15120) * v1.pow(6)) +
             Rat(59) * v3.pow(3) / (Rat(64512) * v1.pow(5)) -
             Rat(83) * v3.pow(2) * v2.pow(2) / (Rat(7168) * v1.pow(6)) +
             Rat(59) * v3 * v2.pow(4) / (Rat(3024) * v1.pow(7)) -
             Rat(5) * v2.pow(6) / (Rat(648) * v1.pow(8));
    }
  }
  throw KernelError("printed KdV free energy available for g = 1..3");
}

Expr kdv_hat_F(const GFManifold& hat, int g) {
  AtomId vhA = hat.coords[0];
  Expr vh = Expr::atom(vhA);
  Expr v1 = J(vhA, 1), v2 = J(vhA, 2), v3 = J(vhA, 3), v4 = J(vhA, 4);
  switch (g) {
    case 1:
      return Rat(1, 24) * log_of(v1) + Rat(1, 12) * log_of(vh);
    case 2:
      return v4 * vh / (Rat(576) * v1.pow(2)) -
             Rat(7) * v3 * v2 * vh / (Rat(960) * v1.pow(3)) +
             Rat(37) * v3 / (Rat(2880) * v1) +
             v2.pow(3) * vh / (Rat(180) * v1.pow(4)) -
             Rat(11) * v2.pow(2) / (Rat(960) * v1.pow(2)) +
             v2 / (Rat(120) * vh) - v1.pow(2) / (Rat(120) * vh.pow(2));
    case 3: {
      Expr v5 = J(vhA, 5), v6 = J(vhA, 6), v7 = J(vhA, 7);
      Expr vh2 = vh * vh, vh3 = vh.pow(3), vh4 = vh.pow(4);
      return v7 * vh2 / (Rat(20736) * v1.pow(3)) -
             Rat(7) * v6 * v2 * vh2 / (Rat(11520) * v1.pow(4)) +
             Rat(91) * v6 * vh / (Rat(103680) * v1.pow(2)) -
             Rat(53) * v5 * v3 * vh2 / (Rat(40320) * v1.pow(4)) +
             Rat(353) * v5 * v2.pow(2) * vh2 / (Rat(80640) * v1.pow(5)) -
             Rat(419) * v5 * v2 * vh / (Rat(60480) * v1.pow(3)) +
             Rat(913) * v5 / (Rat(241920) * vh) -
             Rat(103) * v4.pow(2) * vh2 / (Rat(120960) * v1.pow(4)) +
             Rat(1273) * v4 * v3 * v2 * vh2 / (Rat(80640) * v1.pow(5)) -
             Rat(9169) * v4 * v3 * vh / (Rat(725760) * v1.pow(3)) -
             Rat(83) * v4 * v2.pow(3) * vh2 / (Rat(3780) * v1.pow(6)) +
             Rat(545) * v4 * v2.pow(2) * vh / (Rat(16128) * v1.pow(4)) -
             Rat(3727) * v4 * v2 / (Rat(241920) * v1.pow(2)) +
             v4 / (Rat(1512) * vh) +
             Rat(59) * v3.pow(3) * vh2 / (Rat(16128) * v1.pow(5)) -
             Rat(83) * v3.pow(2) * v2.pow(2) * vh2 / (Rat(1792) * v1.pow(6)) +
             Rat(97) * v3.pow(2) * v2 * vh / (Rat(2016) * v1.pow(4)) -
             Rat(1669) * v3.pow(2) / (Rat(145152) * v1.pow(2)) +
             Rat(59) * v3 * v2.pow(4) * vh2 / (Rat(756) * v1.pow(7)) -
             Rat(5555) * v3 * v2.pow(3) * vh / (Rat(48384) * v1.pow(5)) +
             Rat(325) * v3 * v2.pow(2) / (Rat(6912) * v1.pow(3)) -
             v3 * v1 / (Rat(378) * vh2) -
             Rat(5) * v2.pow(6) * vh2 / (Rat(162) * v1.pow(8)) +
             Rat(13) * v2.pow(5) * vh / (Rat(252) * v1.pow(6)) -
             Rat(193) * v2.pow(4) / (Rat(8064) * v1.pow(4)) -
             v2.pow(2) / (Rat(504) * vh2) + v2 * v1.pow(2) / (Rat(126) * vh3) -
             v1.pow(4) / (Rat(252) * vh4);
    }
  }
  throw KernelError("printed hatted free energy available for g = 1..3");
}

Expr al_F1(const GFManifold& al) {
  AtomId v = al.coords[0], u = al.coords[1];
  Expr V = Expr::atom(v), vx = J(v, 1), ux = J(u, 1);
  Expr eu = exp_of({{u, Rat(1)}});
  return Rat(1, 24) * log_of(vx * vx - V * eu * ux * ux) +
         Rat(1, 12) * log_of(V - eu) - Rat(1, 8) * log_of(V) -
         Rat(1, 24) * Expr::atom(u);
}

Expr toda_F1(const GFManifold& toda) {
  AtomId vt = toda.coords[0], ut = toda.coords[1];
  Expr vx = J(vt, 1), ux = J(ut, 1);
  Expr eu = exp_of({{ut, Rat(1)}});
  return Rat(1, 24) * log_of(vx * vx - eu * ux * ux) -
         Rat(1, 24) * Expr::atom(ut);
}

}  // namespace genus

Expr QuasiMiura::delta_f(int eps_order) const {
  Expr epsE = Expr::atom(eps);
  Expr acc;
  for (size_t g = 1; g <= genus_f.size(); ++g) {
    int w = 2 * (int)g - 2;
    if (w > eps_order) break;
    acc += epsE.pow(w) * genus_f[g - 1];
  }
  return acc;
}

Expr QuasiMiura::w_field(int eps_order) const {
  const GFManifold& m = *cal->M;
  if (m.dim() != 1)
    throw KernelError("quasi-Miura evaluation implemented for dimension 1");
  Expr epsE = Expr::atom(eps);
  Expr df = delta_f(eps_order - 2);
  Flow f0 = flow_rhs(*cal, IndexIB::gk(0, 0));
  Expr d_t = time_derivative(m, df, f0.rhs);
  Expr corr = total_x_derivative(d_t) * m.eta_inv(0, 0);
  return eps_expand(m.coord_expr(0) + epsE.pow(2) * corr, eps, eps_order);
}

Expr QuasiMiura::inverse_series(AtomId w_coord, int eps_order) const {
  const GFManifold& m = *cal->M;
  AtomId v = m.coords[0];
  Expr W = Expr::atom(w_coord);
  Expr wexpr = w_field(eps_order);
  Expr corr = wexpr - m.coord_expr(0);  // eps^2 * (jets of v)
  Expr S = W;
  for (int it = 0; it < eps_order / 2 + 1; ++it) {
    std::map<AtomId, Expr> img{{v, S}};
    S = eps_expand(W - series_substitute(corr, img, eps, eps_order), eps,
                   eps_order);
  }
  // fixed point check
  std::map<AtomId, Expr> img{{v, S}};
  Expr back = series_substitute(wexpr, img, eps, eps_order);
  if (!(back - W).is_zero())
    throw OrderExhausted("quasi-Miura inversion did not converge");
  return S;
}

Expr QuasiMiura::deformed_flow(const IndexIB& idx, AtomId w_coord,
                               int eps_order) const {
  const GFManifold& m = *cal->M;
  auto& t = AtomTable::instance();
  Expr wexpr = w_field(eps_order);
  Flow f = flow_rhs(*cal, idx);
  Expr S = inverse_series(w_coord, eps_order);
  std::map<AtomId, Expr> img{{m.coords[0], S}};
  // dw/dt = sum_s (dw/dv^(s)) D^s(flow); substitute the small factors and
  // assemble the truncated products (the combined expression is far larger
  // than its factors).
  AtomId v = m.coords[0];
  int maxord = 0;
  {
    std::vector<AtomId> atoms;
    wexpr.collect_atoms(atoms);
    for (AtomId a : atoms) {
      const AtomInfo& info = atom_info(a);
      if (info.kind == AtomKind::Jet && info.base == v)
        maxord = std::max(maxord, info.order);
    }
  }
  Expr flow_img = eps_expand(series_substitute(f.rhs[0], img, eps, eps_order),
                             eps, eps_order);
  Expr acc;
  Expr dflow = flow_img;
  for (int sdx = 0; sdx <= maxord; ++sdx) {
    if (sdx > 0) dflow = eps_expand(total_x_derivative(dflow), eps, eps_order);
    AtomId target = sdx == 0 ? v : t.jet(v, sdx);
    Expr part = partial_derivative(wexpr, target);
    if (part.is_zero()) continue;
    Expr part_img =
        eps_expand(series_substitute(part, img, eps, eps_order), eps, eps_order);
    acc += part_img * dflow;
    acc = eps_expand(acc, eps, eps_order);
  }
  return acc;
}

Expr w_recursion_series(AtomId u_coord, AtomId epsw, int order) {
  Expr U = Expr::atom(u_coord);
  Expr e = Expr::atom(epsw);
  Expr s2 = root_of(Expr(Rat(2)), 2);
  Expr W = U;
  for (int it = 0; it <= order + 1; ++it) {
    // sqrt(W + U) = sqrt(2U) (1 + (W - U)/(2U))^(1/2)
    Expr T = truncate_in((W - U) / (Rat(2) * U), epsw, order);
    Expr series(Rat(1));
    Expr pow(Rat(1));
    Rat binom(1);
    for (int j = 1; j <= order; ++j) {
      binom *= (Rat(1, 2) - Rat(j - 1)) / Rat(j);
      pow = truncate_in(pow * T, epsw, order);
      if (pow.is_zero()) break;
      series += binom * pow;
    }
    Expr root = s2 * root_of(U, 2) * series;
    W = truncate_in(U + Rat(1, 2) * s2 * e * total_x_derivative(root), epsw,
                    order);
  }
  return W;
}

Expr symmetric_shift_ratio(const Expr& e, AtomId eps, int eps_order) {
  // (Lambda - Lambda^{-1})/(2 iota eps D) = sum_{k odd} (iota eps)^{k-1} D^{k-1}/k!
  Expr iota = root_of(Expr(Rat(-2)), 2);
  Expr epsE = Expr::atom(eps);
  Expr acc;
  Expr d = e;
  for (int k = 1;; k += 2) {
    if (k - 1 > eps_order) break;
    acc += (iota * epsE).pow(k - 1) * d / Expr(rat_factorial(k));
    d = total_x_derivative(total_x_derivative(d));
    if (d.is_zero()) break;
  }
  return truncate_in(acc, eps, eps_order);
}

namespace {

// Lambda^{+-1} = exp(+- iota eps D) applied to a jet expression.
Expr lambda_apply(const Expr& e, AtomId eps, int sign, int eps_order) {
  Expr iota = root_of(Expr(Rat(-2)), 2);
  Expr step = Rat(sign) * (iota * Expr::atom(eps));
  Expr acc;
  Expr d = e;
  for (int k = 0; k <= eps_order; ++k) {
    if (k > 0) d = total_x_derivative(d);
    if (d.is_zero()) break;
    acc += step.pow(k) * d / Expr(rat_factorial(k));
  }
  return truncate_in(acc, eps, eps_order);
}

// (Lambda + 1)^{-1} = (1/2) sum_j (-(Lambda-1)/2)^j
Expr lambda_plus_one_inv(const Expr& e, AtomId eps, int eps_order) {
  Expr acc = e;
  Expr cur = e;
  for (int j = 1; j <= eps_order; ++j) {
    cur = truncate_in(lambda_apply(cur, eps, 1, eps_order) - cur, eps,
                      eps_order);  // (Lambda - 1) applied again
    if (cur.is_zero()) break;
    Rat c(j % 2 ? -1 : 1, 1);
    acc += c * cur / Expr(Rat(2).pow(j));
  }
  return truncate_in(acc / Expr(Rat(2)), eps, eps_order);
}

}  // namespace

Expr qkdv_u_bridge(AtomId uh_coord, AtomId eps, int eps_order) {
  Expr Uh = Expr::atom(uh_coord);
  Expr inner = lambda_plus_one_inv(Uh, eps, eps_order);
  Expr sq = truncate_in(inner * inner, eps, eps_order);
  Expr half = lambda_plus_one_inv(sq, eps, eps_order);
  return truncate_in(Rat(8) * lambda_apply(half, eps, 1, eps_order), eps,
                     eps_order);
}

}  // namespace gfm
