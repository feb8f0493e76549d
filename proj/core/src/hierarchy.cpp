#include "gfm/hierarchy.hpp"

namespace gfm {

Flow flow_rhs(const Calibration& cal, const IndexIB& index) {
  const GFManifold& m = *cal.M;
  VectorField r = m.multiply(cal.xi(index), m.vx_field());
  return Flow{index, r.comp};
}

namespace {

// Maximal jet order per coordinate, looking through log/root arguments.
void scan_orders(const Expr& e, const GFManifold& m, std::vector<int>& ord) {
  std::vector<AtomId> atoms;
  e.collect_atoms(atoms);
  for (AtomId aid : atoms) {
    const AtomInfo& info = atom_info(aid);
    if (info.kind == AtomKind::Jet) {
      for (size_t a = 0; a < m.dim(); ++a)
        if (m.coords[a] == info.base) ord[a] = std::max(ord[a], info.order);
    } else if ((info.kind == AtomKind::Log || info.kind == AtomKind::Root) &&
               info.arg) {
      scan_orders(*info.arg, m, ord);
    }
  }
}

}  // namespace

Expr time_derivative(const GFManifold& m, const Expr& e,
                     const std::vector<Expr>& rhs) {
  auto& t = AtomTable::instance();
  size_t n = m.dim();
  std::vector<int> maxord(n, 0);
  scan_orders(e, m, maxord);
  Expr acc;
  std::vector<std::vector<Expr>> dx_rhs(n);  // D^s(rhs^alpha) cache
  auto rhs_dx = [&](size_t a, int s) -> const Expr& {
    auto& v = dx_rhs[a];
    if (v.empty()) v.push_back(rhs[a]);
    while ((int)v.size() <= s) v.push_back(total_x_derivative(v.back()));
    return v[s];
  };
  for (size_t a = 0; a < n; ++a)
    for (int s = 0; s <= maxord[a]; ++s) {
      AtomId target = s == 0 ? m.coords[a] : t.jet(m.coords[a], s);
      Expr d = partial_derivative(e, target);
      if (d.is_zero()) continue;
      acc += d * rhs_dx(a, s);
    }
  return acc;
}

std::vector<Expr> commutator_check(const GFManifold& m, const Flow& A,
                                   const Flow& B) {
  size_t n = m.dim();
  std::vector<Expr> out(n);
  for (size_t g = 0; g < n; ++g)
    out[g] = time_derivative(m, B.rhs[g], A.rhs) -
             time_derivative(m, A.rhs[g], B.rhs);
  return out;
}

namespace {

std::vector<IndexIB> window_indices(const GFManifold& m, int window) {
  std::vector<IndexIB> all;
  for (int p = -window; p <= window; ++p) {
    for (size_t g = 0; g < m.dim(); ++g)
      if (p >= 0) all.push_back(IndexIB::gk((int)g, p));
    all.push_back(IndexIB::zero(p));
    all.push_back(IndexIB::bee(p));
  }
  return all;
}

}  // namespace

StructureReport check_flows(const Calibration& cal, const TauStructure& tau,
                            int window) {
  const GFManifold& m = *cal.M;
  StructureReport rep;
  auto& t = AtomTable::instance();
  std::vector<IndexIB> all = window_indices(m, window);
  std::vector<Flow> flows;
  for (auto& I : all) flows.push_back(flow_rhs(cal, I));

  // dual route: rhs^alpha = eta^{alpha gamma} d_x d_gamma theta_{i,p+1}
  for (auto& F : flows) {
    if (!cal.has_theta(F.index.shifted(1))) continue;
    const Expr& th = cal.theta(F.index.shifted(1));
    for (size_t a = 0; a < m.dim(); ++a) {
      Expr expect;
      for (size_t g = 0; g < m.dim(); ++g) {
        const Rat& w = m.eta_inv(a, g);
        if (w.is_zero()) continue;
        expect += w * total_x_derivative(partial_derivative(th, m.coords[g]));
      }
      rep.require_zero("flow_theta" + F.index.str() + std::to_string(a),
                       F.rhs[a] - expect);
    }
  }
  // the x-translation flow
  {
    Flow f0 = flow_rhs(cal, IndexIB::zero(0));
    for (size_t a = 0; a < m.dim(); ++a)
      rep.require_zero("flow_x" + std::to_string(a),
                       f0.rhs[a] - Expr::atom(t.jet(m.coords[a], 1)));
  }
  // pairwise commutativity
  for (size_t i = 0; i < flows.size(); ++i)
    for (size_t j = i + 1; j < flows.size(); ++j) {
      auto res = commutator_check(m, flows[i], flows[j]);
      for (size_t g = 0; g < m.dim(); ++g)
        rep.require_zero("commute" + flows[i].index.str() + flows[j].index.str() +
                             std::to_string(g),
                         res[g]);
    }
  // tau symmetry: d theta_{i,p} / d t^{j,q} = d_x Omega
  for (auto& I : all)
    for (auto& J : all) {
      if (J < I) continue;
      Expr lhs = time_derivative(m, tau.theta_tau(I),
                                 flow_rhs(cal, J).rhs);
      Expr rhs2 = total_x_derivative(tau.omega(I, J));
      rep.require_zero("tausym" + I.str() + J.str(), lhs - rhs2);
    }
  return rep;
}

StructureReport verify_reciprocal(const Calibration& cal,
                                  const TransformResult& tr,
                                  const Calibration* hat_cal, int window,
                                  bool hat_extended_ok) {
  const GFManifold& m = *cal.M;
  const GFManifold& hm = tr.target;
  size_t n = m.dim();
  StructureReport rep;
  // source components of Bhat and of the hat-space x-translation field
  VectorField Bhat = tr.inverse_source;
  VectorField vxhat = m.multiply(cal.B, m.vx_field());  // hat v_x as a field
  // Jacobian d hat v^alpha / d v^beta
  std::vector<std::vector<Expr>> Jac(n, std::vector<Expr>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      Jac[a][b] = partial_derivative(tr.coord_map[a], m.coords[b]);

  std::vector<IndexIB> all = window_indices(hm, window);
  for (auto& Ihat : all) {
    IndexIB I = sigma_relabel(Ihat);
    if (!cal.has_theta(I)) continue;
    Flow f = flow_rhs(cal, I);
    // route 1: source-side time derivative of the coordinate map
    std::vector<Expr> route1(n);
    for (size_t a = 0; a < n; ++a)
      route1[a] = time_derivative(m, tr.coord_map[a], f.rhs);
    // route 2: xi-hat . hat v_x computed in the source chart and converted
    VectorField xihat = m.multiply(Bhat, cal.xi(I));
    VectorField prod = m.multiply(xihat, vxhat);
    for (size_t a = 0; a < n; ++a) {
      Expr route2;
      for (size_t b = 0; b < n; ++b) route2 += Jac[a][b] * prod.comp[b];
      rep.require_zero("reciprocal" + Ihat.str() + std::to_string(a),
                       route1[a] - route2);
    }
    // route 3: the independently built hatted hierarchy, pulled back
    bool sector_ok = hat_extended_ok || Ihat.tag != IndexIB::Tag::B;
    if (hat_cal && hat_cal->M != nullptr && sector_ok && hat_cal->has_theta(Ihat)) {
      Flow fh = flow_rhs(*hat_cal, Ihat);
      for (size_t a = 0; a < n; ++a) {
        Expr pulled = tr.pullback.apply(fh.rhs[a]);
        rep.require_zero("reciprocal_hat" + Ihat.str() + std::to_string(a),
                         route1[a] - pulled);
      }
    }
  }
  return rep;
}

StructureReport biham_recursion_check(const Calibration& cal, int window) {
  const GFManifold& m = *cal.M;
  size_t n = m.dim();
  StructureReport rep;
  PoissonPair P = poisson_pair(m);
  auto grad_cov = [&](const IndexIB& I) {
    std::vector<Expr> cov(n);
    const Expr& th = cal.theta(I);
    for (size_t g = 0; g < n; ++g)
      cov[g] = partial_derivative(th, m.coords[g]);
    return cov;
  };
  std::vector<IndexIB> all = window_indices(m, window);
  for (auto& I : all) {
    int q = I.level;
    if (!cal.has_theta(I.shifted(1)) || !cal.has_theta(I)) continue;
    std::vector<Expr> lhs = P.apply2(grad_cov(I));
    Rat w = Rat(q) + Rat(1, 2) + cal.data.mu_of(I);
    std::vector<Expr> rhs = P.apply1(grad_cov(I.shifted(1)));
    for (auto& e : rhs) e = w * e;
    for (int s = 1; s <= q; ++s)
      for (size_t eps = 0; eps < n; ++eps) {
        Rat c = cal.data.Rtail(s, I, (int)eps);
        if (c.is_zero()) continue;
        IndexIB J = IndexIB::gk((int)eps, q - s + 1);
        auto extra = P.apply1(grad_cov(J));
        for (size_t a = 0; a < n; ++a) rhs[a] += c * extra[a];
      }
    for (size_t a = 0; a < n; ++a)
      rep.require_zero("biham" + I.str() + std::to_string(a),
                       lhs[a] - rhs[a]);
  }
  return rep;
}

}  // namespace gfm
