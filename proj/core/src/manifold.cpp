#include "gfm/manifold.hpp"

#include <mutex>

namespace gfm {

namespace {
std::mutex g_c_cache_mu;
}

bool VectorField::is_zero() const {
  for (auto& e : comp)
    if (!e.is_zero()) return false;
  return true;
}

CTensor c_from_potential(const GFManifold& m) {
  size_t n = m.dim();
  CTensor c;
  c.n = n;
  c.v.assign(n * n * n, Expr());
  std::vector<Expr> d1(n), d2(n * n), d3(n * n * n);
  for (size_t a = 0; a < n; ++a) d1[a] = partial_derivative(m.potential, m.coords[a]);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) {
      Expr e = partial_derivative(d1[a], m.coords[b]);
      d2[a * n + b] = e;
      d2[b * n + a] = e;
    }
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b)
      for (size_t g = b; g < n; ++g) {
        Expr e = partial_derivative(d2[a * n + b], m.coords[g]);
        d3[(a * n + b) * n + g] = e;
        d3[(a * n + g) * n + b] = e;
        d3[(b * n + a) * n + g] = e;
        d3[(b * n + g) * n + a] = e;
        d3[(g * n + a) * n + b] = e;
        d3[(g * n + b) * n + a] = e;
      }
  for (size_t g = 0; g < n; ++g)
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        Expr acc;
        for (size_t xi = 0; xi < n; ++xi) {
          const Rat& w = m.eta_inv(g, xi);
          if (w.is_zero()) continue;
          acc += w * d3[(xi * n + a) * n + b];
        }
        c.at(g, a, b) = acc;
      }
  return c;
}

const CTensor& GFManifold::c() const {
  std::lock_guard lk(g_c_cache_mu);
  if (!c_cache_) c_cache_ = c_from_potential(*this);
  return *c_cache_;
}

Expr GFManifold::dir_derivative(const VectorField& X, const Expr& f) const {
  Expr acc;
  for (size_t a = 0; a < dim(); ++a) {
    if (X.comp[a].is_zero()) continue;
    acc += X.comp[a] * partial_derivative(f, coords[a]);
  }
  return acc;
}

VectorField GFManifold::multiply(const VectorField& X, const VectorField& Y) const {
  size_t n = dim();
  const CTensor& ct = c();
  VectorField Z;
  Z.comp.assign(n, Expr());
  for (size_t g = 0; g < n; ++g) {
    Expr acc;
    for (size_t a = 0; a < n; ++a) {
      if (X.comp[a].is_zero()) continue;
      for (size_t b = 0; b < n; ++b) {
        if (Y.comp[b].is_zero()) continue;
        acc += ct.at(g, a, b) * X.comp[a] * Y.comp[b];
      }
    }
    Z.comp[g] = acc;
  }
  return Z;
}

VectorField GFManifold::euler_power(int m) const {
  VectorField p = euler;
  for (int i = 0; i < m; ++i) p = multiply(p, euler);
  return p;
}

VectorField GFManifold::grad_eta(const Expr& f) const {
  size_t n = dim();
  VectorField g;
  g.comp.assign(n, Expr());
  for (size_t a = 0; a < n; ++a) {
    Expr acc;
    for (size_t b = 0; b < n; ++b) {
      const Rat& w = eta_inv(a, b);
      if (w.is_zero()) continue;
      acc += w * partial_derivative(f, coords[b]);
    }
    g.comp[a] = acc;
  }
  return g;
}

VectorField GFManifold::lie_bracket(const VectorField& X, const VectorField& Y) const {
  size_t n = dim();
  VectorField Z;
  Z.comp.assign(n, Expr());
  for (size_t a = 0; a < n; ++a)
    Z.comp[a] = dir_derivative(X, Y.comp[a]) - dir_derivative(Y, X.comp[a]);
  return Z;
}

VectorField GFManifold::vx_field() const {
  auto& t = AtomTable::instance();
  VectorField v;
  for (AtomId c : coords) v.comp.push_back(Expr::atom(t.jet(c, 1)));
  return v;
}

StructureReport GFManifold::verify_wdvv() const {
  size_t n = dim();
  StructureReport rep;
  std::vector<Expr> d3(n * n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t g = 0; g < n; ++g)
        d3[(a * n + b) * n + g] = partial_derivative(
            partial_derivative(partial_derivative(potential, coords[a]), coords[b]),
            coords[g]);
  auto F3 = [&](size_t a, size_t b, size_t g) -> const Expr& {
    return d3[(a * n + b) * n + g];
  };
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t g = 0; g < n; ++g)
        for (size_t d = 0; d < n; ++d) {
          Expr lhs, rhs;
          for (size_t l = 0; l < n; ++l)
            for (size_t m2 = 0; m2 < n; ++m2) {
              const Rat& w = eta_inv(l, m2);
              if (w.is_zero()) continue;
              lhs += w * F3(a, b, l) * F3(m2, g, d);
              rhs += w * F3(d, b, l) * F3(m2, g, a);
            }
          rep.require_zero("wdvv[" + std::to_string(a) + std::to_string(b) +
                               std::to_string(g) + std::to_string(d) + "]",
                           lhs - rhs);
        }
  return rep;
}

StructureReport GFManifold::verify_structure() const {
  size_t n = dim();
  StructureReport rep;
  const CTensor& ct = c();
  for (size_t b = 0; b < n; ++b) {
    VectorField basis;
    basis.comp.assign(n, Expr());
    basis.comp[b] = Expr(Rat(1));
    VectorField prod = multiply(unity, basis);
    for (size_t g = 0; g < n; ++g)
      rep.require_zero("unity[" + std::to_string(b) + "," + std::to_string(g) + "]",
                       prod.comp[g] - basis.comp[g]);
  }
  for (size_t g = 0; g < n; ++g)
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        Expr lie = dir_derivative(euler, ct.at(g, a, b));
        for (size_t e = 0; e < n; ++e) {
          lie -= partial_derivative(euler.comp[g], coords[e]) * ct.at(e, a, b);
          lie += partial_derivative(euler.comp[e], coords[a]) * ct.at(g, e, b);
          lie += partial_derivative(euler.comp[e], coords[b]) * ct.at(g, a, e);
        }
        rep.require_zero("lie_c[" + std::to_string(g) + std::to_string(a) +
                             std::to_string(b) + "]",
                         lie - ct.at(g, a, b));
      }
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      Expr lie;
      for (size_t e = 0; e < n; ++e) {
        lie += partial_derivative(euler.comp[e], coords[a]) * Expr(eta(e, b));
        lie += partial_derivative(euler.comp[e], coords[b]) * Expr(eta(a, e));
      }
      rep.require_zero("lie_eta[" + std::to_string(a) + std::to_string(b) + "]",
                       lie - (Rat(2) - charge) * Expr(eta(a, b)));
    }
  for (size_t a = 0; a < n; ++a) {
    Expr expect = ((Rat(2) - charge) / Rat(2) - mu[a]) * coord_expr(a) +
                  Expr(r_shift[a]);
    rep.require_zero("euler_form[" + std::to_string(a) + "]",
                     euler.comp[a] - expect);
    if (!r_shift[a].is_zero() && !(mu[a] + charge / Rat(2) == Rat(1)))
      rep.failures.push_back({"euler_r[" + std::to_string(a) + "]",
                              "r^alpha nonzero outside the resonant weight"});
  }
  VectorField br = lie_bracket(euler, unity);
  for (size_t a = 0; a < n; ++a)
    rep.require_zero("bracket_Ee[" + std::to_string(a) + "]",
                     br.comp[a] + unity.comp[a]);
  return rep;
}

std::vector<Expr> PoissonPair::apply1(const std::vector<Expr>& cov) const {
  size_t n = m->dim();
  std::vector<Expr> out(n);
  for (size_t a = 0; a < n; ++a) {
    Expr acc;
    for (size_t b = 0; b < n; ++b) {
      const Rat& w = m->eta_inv(a, b);
      if (w.is_zero()) continue;
      acc += w * total_x_derivative(cov[b]);
    }
    out[a] = acc;
  }
  return out;
}

Expr PoissonPair::g_upper(size_t a, size_t b) const {
  size_t n = m->dim();
  const CTensor& ct = m->c();
  Expr acc;
  for (size_t e = 0; e < n; ++e) {
    if (m->euler.comp[e].is_zero()) continue;
    for (size_t nu = 0; nu < n; ++nu) {
      const Rat& w = m->eta_inv(b, nu);
      if (w.is_zero()) continue;
      acc += m->euler.comp[e] * w * ct.at(a, e, nu);
    }
  }
  return acc;
}

Expr PoissonPair::gamma_upper(size_t a, size_t b, size_t g) const {
  size_t n = m->dim();
  const CTensor& ct = m->c();
  Expr acc;
  for (size_t e = 0; e < n; ++e) {
    const Rat& w = m->eta_inv(a, e);
    if (w.is_zero()) continue;
    acc += w * ct.at(b, e, g);
  }
  return (Rat(1, 2) - m->mu[b]) * acc;
}

std::vector<Expr> PoissonPair::apply2(const std::vector<Expr>& cov) const {
  size_t n = m->dim();
  auto& t = AtomTable::instance();
  std::vector<Expr> out(n);
  for (size_t a = 0; a < n; ++a) {
    Expr acc;
    for (size_t b = 0; b < n; ++b) {
      acc += g_upper(a, b) * total_x_derivative(cov[b]);
      for (size_t g = 0; g < n; ++g)
        acc += gamma_upper(a, b, g) * Expr::atom(t.jet(m->coords[g], 1)) * cov[b];
    }
    out[a] = acc;
  }
  return out;
}

PoissonPair poisson_pair(const GFManifold& m) { return PoissonPair{&m}; }

}  // namespace gfm
