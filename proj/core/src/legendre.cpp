#include "gfm/legendre.hpp"

namespace gfm {

StructureReport is_legendre(const GFManifold& m, const VectorField& B) {
  size_t n = m.dim();
  StructureReport rep;
  const CTensor& ct = m.c();
  std::vector<Expr> dB(n * n);  // d_beta B^gamma
  for (size_t b = 0; b < n; ++b)
    for (size_t g = 0; g < n; ++g)
      dB[b * n + g] = partial_derivative(B.comp[g], m.coords[b]);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t d = 0; d < n; ++d) {
        Expr acc;
        for (size_t g = 0; g < n; ++g)
          acc += ct.at(d, a, g) * dB[b * n + g] - ct.at(d, b, g) * dB[a * n + g];
        rep.require_zero("legendre[" + std::to_string(a) + std::to_string(b) +
                             std::to_string(d) + "]",
                         acc);
      }
  return rep;
}

VectorField invert_field(const GFManifold& m, const VectorField& B) {
  size_t n = m.dim();
  const CTensor& ct = m.c();
  std::vector<std::vector<Expr>> A(n, std::vector<Expr>(n));
  for (size_t d = 0; d < n; ++d)
    for (size_t b = 0; b < n; ++b) {
      Expr acc;
      for (size_t g = 0; g < n; ++g) acc += ct.at(d, g, b) * B.comp[g];
      A[d][b] = acc;
    }
  std::vector<Expr> rhs = m.unity.comp;
  try {
    VectorField X;
    X.comp = solve_linear_expr(std::move(A), std::move(rhs));
    return X;
  } catch (const KernelError&) {
    throw NotInvertible("multiplication by the field is singular");
  }
}

Rat quasi_weight(const GFManifold& m, const VectorField& B) {
  VectorField K = m.lie_bracket(m.euler, B);
  size_t pivot = m.dim();
  for (size_t a = 0; a < m.dim(); ++a)
    if (!B.comp[a].is_zero()) {
      pivot = a;
      break;
    }
  if (pivot == m.dim())
    throw NotQuasiHomogeneous("zero field has no quasi-homogeneity weight");
  Expr kappa = K.comp[pivot] / B.comp[pivot];
  if (!kappa.is_rat())
    throw NotQuasiHomogeneous("[E,B] is not a constant multiple of B");
  Rat k = kappa.rat_value();
  for (size_t a = 0; a < m.dim(); ++a)
    if (!(K.comp[a] - k * B.comp[a]).is_zero())
      throw NotQuasiHomogeneous("[E,B] is not proportional to B");
  return k + (Rat(2) - m.charge) / Rat(2);
}

namespace {

// Sequential integration of a closed 1-form in the given chart.
Expr integrate_closed_form(const std::vector<Expr>& omega,
                           const std::vector<AtomId>& coords) {
  Expr f;
  for (size_t i = 0; i < coords.size(); ++i) {
    Expr rem = omega[i] - partial_derivative(f, coords[i]);
    if (rem.is_zero()) continue;
    for (size_t j = 0; j < i; ++j)
      if (rem.contains_atom(coords[j]))
        throw NotIntegrable("1-form is not closed over the chart");
    f += antiderivative(rem, coords[i]);
  }
  // final consistency
  for (size_t i = 0; i < coords.size(); ++i)
    if (!(partial_derivative(f, coords[i]) - omega[i]).is_zero())
      throw NotIntegrable("1-form integration failed the gradient check");
  return f;
}

// Drops monomials made of chart coordinates only with total degree <= 2
// (they carry the quadratic/affine normalization freedom of the potential).
Expr strip_affine_quadratic(const Expr& e, const std::vector<AtomId>& coords) {
  if (!e.is_poly()) return e;
  std::vector<Poly::Term> keep;
  for (auto& t : e.num().terms()) {
    bool coords_only = true;
    for (auto& [id, ex] : t.m.entries()) {
      bool is_chart = false;
      for (AtomId c : coords) is_chart |= c == id;
      if (!is_chart) coords_only = false;
    }
    if (coords_only && t.m.total_degree() <= 2) continue;
    keep.push_back(t);
  }
  return Expr::from_poly(Poly::from_terms(std::move(keep)));
}

}  // namespace

TransformResult transform(const GFManifold& m, const VectorField& B,
                          const std::vector<std::string>& hat_names,
                          const std::string& target_name) {
  size_t n = m.dim();
  auto& tbl = AtomTable::instance();
  if (hat_names.size() != n)
    throw KernelError("transform: need one hat coordinate name per dimension");
  {
    auto rep = is_legendre(m, B);
    if (!rep.ok())
      throw KernelError("transform: field is not Legendre (" +
                        rep.failures[0].first + ")");
  }
  TransformResult out;
  out.mu_B = quasi_weight(m, B);
  out.charge_hat = Rat(-2) * out.mu_B;
  out.inverse_source = invert_field(m, B);

  // d(hat v^alpha)/d v^beta = B^gamma c^alpha_{beta gamma}
  const CTensor& ct = m.c();
  std::vector<std::vector<Expr>> MB(n, std::vector<Expr>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      Expr acc;
      for (size_t g = 0; g < n; ++g) acc += B.comp[g] * ct.at(a, b, g);
      MB[a][b] = acc;
    }
  out.coord_map.resize(n);
  for (size_t a = 0; a < n; ++a)
    out.coord_map[a] = integrate_closed_form(MB[a], m.coords);

  // Euler components in the new chart; kill removable translations.
  std::vector<Rat> kappa(n), r_hat(n, Rat(0));
  for (size_t a = 0; a < n; ++a)
    kappa[a] = (Rat(2) - out.charge_hat) / Rat(2) - m.mu[a];
  for (size_t a = 0; a < n; ++a) {
    Expr E_src;
    for (size_t b = 0; b < n; ++b)
      E_src += m.euler.comp[b] * MB[a][b];
    Expr diff = E_src - kappa[a] * out.coord_map[a];
    if (!diff.is_rat())
      throw KernelError("transform: hatted Euler field is not affine");
    Rat r = diff.rat_value();
    if (!r.is_zero() && !kappa[a].is_zero()) {
      // translate hat v^alpha to remove the shift
      out.coord_map[a] += Expr(r / kappa[a]);
      r = Rat(0);
    }
    r_hat[a] = r;
  }

  // Target chart atoms and rewriter.
  std::vector<AtomId> hat_coords;
  for (auto& nm : hat_names) hat_coords.push_back(tbl.coord(nm));
  auto rewrite = [&](const Expr& e, bool logs) -> std::optional<Expr> {
    for (int deg : {2, 4, 8, 12, 18, 24}) {
      if (n > 1 && deg > 8) break;
      ChartRewriter R{hat_coords, out.coord_map, deg, true, logs, true};
      auto r = R.express(e);
      if (r) return r;
    }
    return std::nullopt;
  };

  // Potential: rewrite the Hessian and integrate twice in the new chart.
  std::vector<Expr> hess(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) {
      Expr h = partial_derivative(
          partial_derivative(m.potential, m.coords[a]), m.coords[b]);
      auto r = rewrite(h, true);
      if (!r)
        throw NotIntegrable(
            "transform: Hessian entry is not expressible in the new chart");
      hess[a * n + b] = *r;
      hess[b * n + a] = *r;
    }
  std::vector<Expr> gradF(n);
  for (size_t a = 0; a < n; ++a) {
    std::vector<Expr> row(hess.begin() + a * n, hess.begin() + (a + 1) * n);
    gradF[a] = integrate_closed_form(row, hat_coords);
  }
  Expr Fhat = integrate_closed_form(gradF, hat_coords);
  Fhat = strip_affine_quadratic(Fhat, hat_coords);

  // Assemble the target manifold.
  GFManifold t;
  t.name = target_name;
  t.coords = hat_coords;
  t.eta = m.eta;
  t.eta_inv = m.eta_inv;
  t.potential = Fhat;
  t.charge = out.charge_hat;
  t.mu = m.mu;
  t.r_shift = r_hat;
  for (size_t a = 0; a < n; ++a)
    t.euler.comp.push_back(kappa[a] * Expr::atom(hat_coords[a]) + Expr(r_hat[a]));
  for (size_t a = 0; a < n; ++a) {
    auto r = rewrite(B.comp[a], false);
    if (!r)
      throw NotIntegrable("transform: unity component not expressible in chart");
    t.unity.comp.push_back(*r);
  }
  out.target = std::move(t);

  // Inverse field in hatted components (source chart), optionally rewritten.
  out.inverse_hat_src.resize(n);
  for (size_t a = 0; a < n; ++a) {
    Expr acc;
    for (size_t b = 0; b < n; ++b)
      acc += out.inverse_source.comp[b] * MB[a][b];
    out.inverse_hat_src[a] = acc;
  }
  {
    VectorField ih;
    bool all = true;
    for (size_t a = 0; a < n && all; ++a) {
      auto r = rewrite(out.inverse_hat_src[a], false);
      if (r)
        ih.comp.push_back(*r);
      else
        all = false;
    }
    if (all) out.inverse_hat = std::move(ih);
  }

  // Pullback substitution (hat-chart expressions into the source chart).
  VectorField Bvx = m.multiply(B, m.vx_field());
  for (size_t a = 0; a < n; ++a) {
    out.pullback.set_base(hat_coords[a], out.coord_map[a]);
    Expr rate;
    for (size_t b = 0; b < n; ++b) rate += MB[a][b] * Bvx.comp[b];
    out.pullback.set_rate(hat_coords[a], rate);
    try {
      out.pullback.set_exp_image(hat_coords[a], exp_of_expr(out.coord_map[a]));
    } catch (const KernelError&) {
      // exp of this hat coordinate stays unresolved; only needed when it
      // appears in a pulled-back expression.
    }
  }

  // Pushforward (source coordinates in the hat chart) when available.
  if (out.inverse_hat) {
    std::vector<Expr> src_in_hat(n);
    bool all = true;
    for (size_t a = 0; a < n && all; ++a) {
      auto r = rewrite(Expr::atom(m.coords[a]), false);
      if (r)
        src_in_hat[a] = *r;
      else
        all = false;
    }
    if (all) {
      SubstMap push;
      const GFManifold& tm = out.target;
      VectorField Bhat_vxhat = tm.multiply(*out.inverse_hat, tm.vx_field());
      for (size_t a = 0; a < n; ++a) {
        push.set_base(m.coords[a], src_in_hat[a]);
        Expr rate;
        for (size_t b = 0; b < n; ++b)
          rate += partial_derivative(src_in_hat[a], hat_coords[b]) *
                  Bhat_vxhat.comp[b];
        push.set_rate(m.coords[a], rate);
        try {
          push.set_exp_image(m.coords[a], exp_of_expr(src_in_hat[a]));
        } catch (const KernelError&) {
        }
      }
      out.pushforward = std::move(push);
      out.source_in_hat = std::move(src_in_hat);
    }
  }
  return out;
}

}  // namespace gfm
