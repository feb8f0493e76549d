#include "gfm/calibration.hpp"

#include <set>

#include "gfm/rewrite.hpp"

namespace gfm {

std::string IndexIB::str() const {
  switch (tag) {
    case Tag::Zero:
      return "(0," + std::to_string(level) + ")";
    case Tag::B:
      return "(B," + std::to_string(level) + ")";
    default:
      return "(" + std::to_string(greek + 1) + "," + std::to_string(level) + ")";
  }
}

Rat BasicData::Rtail(int s, const IndexIB& i, int alpha) const {
  switch (i.tag) {
    case IndexIB::Tag::Zero: {
      auto it = r.find(s);
      return it == r.end() ? Rat(0) : it->second[alpha];
    }
    case IndexIB::Tag::B: {
      auto it = rB.find(s);
      return it == rB.end() ? Rat(0) : it->second[alpha];
    }
    default: {
      auto it = R.find(s);
      return it == R.end() ? Rat(0) : it->second(alpha, i.greek);
    }
  }
}

const Expr& Calibration::theta(const IndexIB& i) const {
  auto it = theta_.find(i);
  if (it == theta_.end()) {
    if (i.tag == IndexIB::Tag::Greek && i.level < 0) {
      static const Expr zero;
      return zero;
    }
    throw WindowTooSmall("theta" + i.str() + " is outside the computed window");
  }
  return it->second;
}

const VectorField& Calibration::xi(const IndexIB& i) const {
  auto it = xi_cache_.find(i);
  if (it != xi_cache_.end()) return it->second;
  VectorField g = M->grad_eta(theta(i));
  return xi_cache_.emplace(i, std::move(g)).first->second;
}

Expr Calibration::pair_xi(const IndexIB& i, const IndexIB& j) const {
  const VectorField& a = xi(i);
  const VectorField& b = xi(j);
  size_t n = M->dim();
  Expr acc;
  for (size_t p = 0; p < n; ++p)
    for (size_t q = 0; q < n; ++q) {
      const Rat& w = M->eta(p, q);
      if (w.is_zero()) continue;
      acc += w * a.comp[p] * b.comp[q];
    }
  return acc;
}

StructureReport Calibration::check_recursion(const IndexIB& lower) const {
  StructureReport rep;
  IndexIB upper = lower.shifted(1);
  if (!has_theta(lower) || !has_theta(upper)) return rep;
  size_t n = M->dim();
  const CTensor& ct = M->c();
  const Expr& th_up = theta(upper);
  const Expr& th_lo = theta(lower);
  std::vector<Expr> grad_lo(n);
  for (size_t g = 0; g < n; ++g)
    grad_lo[g] = partial_derivative(th_lo, M->coords[g]);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) {
      Expr hess = partial_derivative(
          partial_derivative(th_up, M->coords[a]), M->coords[b]);
      Expr rhs;
      for (size_t g = 0; g < n; ++g) rhs += ct.at(g, a, b) * grad_lo[g];
      rep.require_zero("recursion" + lower.str() + "[" + std::to_string(a) +
                           std::to_string(b) + "]",
                       hess - rhs);
    }
  return rep;
}

void Calibration::register_closed_form(const IndexIB& i, Expr theta_expr) {
  theta_[i] = std::move(theta_expr);
  xi_cache_.erase(i);
  auto check = [&](const IndexIB& lo) {
    auto rep = check_recursion(lo);
    if (!rep.ok())
      throw RecursionMismatch("closed form at " + i.str() +
                              " violates the gradient recursion (" +
                              rep.failures[0].first + ")");
  };
  check(i);
  check(i.shifted(-1));
}

Expr Calibration::hessian_integrate(const IndexIB& below) const {
  size_t n = M->dim();
  const CTensor& ct = M->c();
  const Expr& th = theta(below);
  std::vector<Expr> grad(n);
  for (size_t g = 0; g < n; ++g)
    grad[g] = partial_derivative(th, M->coords[g]);
  std::vector<Expr> H(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) {
      Expr acc;
      for (size_t g = 0; g < n; ++g) acc += ct.at(g, a, b) * grad[g];
      H[a * n + b] = acc;
      H[b * n + a] = acc;
    }
  std::vector<Expr> G(n);
  for (size_t a = 0; a < n; ++a) {
    Expr f;
    for (size_t i = 0; i < n; ++i) {
      Expr rem = H[a * n + i] - partial_derivative(f, M->coords[i]);
      if (rem.is_zero()) continue;
      f += antiderivative(rem, M->coords[i]);
    }
    for (size_t i = 0; i < n; ++i)
      if (!(partial_derivative(f, M->coords[i]) - H[a * n + i]).is_zero())
        throw NotIntegrableCalib("Hessian row failed to integrate at " +
                                 below.str());
    G[a] = f;
  }
  Expr f;
  for (size_t i = 0; i < n; ++i) {
    Expr rem = G[i] - partial_derivative(f, M->coords[i]);
    if (rem.is_zero()) continue;
    f += antiderivative(rem, M->coords[i]);
  }
  for (size_t i = 0; i < n; ++i)
    if (!(partial_derivative(f, M->coords[i]) - G[i]).is_zero())
      throw NotIntegrableCalib("gradient 1-form failed to integrate at " +
                               below.str());
  return f;
}

namespace {

enum class UKind { AffineCoord, AffineConst, REntry, RVecEntry, A00, A10 };

struct Unknown {
  UKind kind;
  int eps = 0;  // Greek row for R/r entries; coordinate index for affine
  int s = 0;    // level of the constant family
};

}  // namespace

// Builds the quasi-homogeneity residual and the gated unknown list for one
// table entry. When `affine` is set, the affine corrections of theta itself
// are part of the unknowns.
void Calibration::fix_quasi_homogeneity(const IndexIB& idx, Expr& th) {
  size_t n = M->dim();
  int p = idx.level;
  auto& mk = marks_;
  Rat w = Rat(p) + data.mu_of(idx) + (Rat(2) - d) / Rat(2);
  bool affine = !theta_.count(idx);  // computed entries get corrections

  Expr residual = M->dir_derivative(M->euler, th) - w * th;
  std::vector<Unknown> unknowns;
  std::vector<Expr> contrib;
  auto add_unknown = [&](Unknown u, Expr c) {
    unknowns.push_back(u);
    contrib.push_back(std::move(c));
  };

  // Tail sums over s = 1..p with per-entry gating: stored entries are
  // subtracted, unextracted allowed entries become unknowns.
  for (int s = 1; s <= p; ++s)
    for (size_t eps = 0; eps < n; ++eps) {
      bool extracted = false;
      switch (idx.tag) {
        case IndexIB::Tag::Greek:
          extracted = mk.R.count({s, (int)eps, idx.greek}) != 0;
          break;
        case IndexIB::Tag::Zero:
          extracted = mk.r.count({s, (int)eps}) != 0;
          break;
        case IndexIB::Tag::B:
          extracted = mk.rB.count({s, (int)eps}) != 0;
          break;
      }
      if (extracted) {
        Rat cst = data.Rtail(s, idx, (int)eps);
        if (!cst.is_zero())
          residual -= cst * theta(IndexIB::gk((int)eps, p - s));
        continue;
      }
      // gate by the vanishing conditions
      bool allowed = false;
      switch (idx.tag) {
        case IndexIB::Tag::Greek:
          allowed = data.mu[eps] - data.mu[idx.greek] == Rat(s);
          break;
        case IndexIB::Tag::Zero:
          allowed = data.mu[eps] + d / Rat(2) == Rat(s);
          break;
        case IndexIB::Tag::B:
          allowed = data.mu[eps] - data.muB == Rat(s);
          break;
      }
      if (!allowed) continue;
      Unknown u{idx.tag == IndexIB::Tag::Greek ? UKind::REntry : UKind::RVecEntry,
                (int)eps, s};
      add_unknown(u, theta(IndexIB::gk((int)eps, p - s)));
    }

  // Scalar tails at level p+1.
  if (idx.tag == IndexIB::Tag::Zero) {
    if (mk.a00.count(p + 1)) {
      auto it = data.a00.find(p + 1);
      if (it != data.a00.end()) residual -= Expr(it->second);
    } else if (Rat(p + 1) == d && (p + 1) % 2 != 0) {
      add_unknown({UKind::A00, 0, p + 1}, Expr(Rat(1)));
    }
  }
  if (idx.tag == IndexIB::Tag::B) {
    if (mk.a10.count(p + 1)) {
      auto it = data.a10.find(p + 1);
      if (it != data.a10.end()) residual -= Expr(it->second);
    } else if (data.muB - d / Rat(2) + Rat(p + 1) == Rat(0)) {
      add_unknown({UKind::A10, 0, p + 1}, Expr(Rat(1)));
    }
  }
  if (idx.tag == IndexIB::Tag::Greek) {
    Rat sign = p % 2 ? Rat(-1) : Rat(1);
    for (size_t eps = 0; eps < n; ++eps) {
      if (M->eta(eps, idx.greek).is_zero()) continue;
      if (mk.r.count({p + 1, (int)eps})) {
        auto it = data.r.find(p + 1);
        if (it != data.r.end() && !it->second[eps].is_zero())
          residual -= Expr(sign * it->second[eps] * M->eta(eps, idx.greek));
      } else if (data.mu[eps] + d / Rat(2) == Rat(p + 1)) {
        add_unknown({UKind::RVecEntry, (int)eps, p + 1},
                    Expr(sign * M->eta(eps, idx.greek)));
      }
    }
  }

  if (affine) {
    for (size_t b = 0; b < n; ++b) {
      Expr vb = M->coord_expr(b);
      add_unknown({UKind::AffineCoord, (int)b, 0},
                  w * vb - M->dir_derivative(M->euler, vb));
    }
    add_unknown({UKind::AffineConst, 0, 0}, Expr(w));
  }

  std::vector<Rat> x;
  bool under = false;
  if (!match_linear(residual, contrib, x, &under))
    throw KernelError("quasi-homogeneity constants are inconsistent at " +
                      idx.str());
  if (under)
    notes.push_back("resonant direction at " + idx.str() + " fixed to zero");

  for (size_t i = 0; i < unknowns.size(); ++i) {
    const Unknown& u = unknowns[i];
    switch (u.kind) {
      case UKind::AffineCoord:
        th += x[i] * M->coord_expr(u.eps);
        break;
      case UKind::AffineConst:
        th += Expr(x[i]);
        break;
      case UKind::REntry: {
        auto& Rm = data.R.try_emplace(u.s, RatMatrix(n, n)).first->second;
        Rm(u.eps, idx.greek) = x[i];
        mk.R.insert({u.s, u.eps, idx.greek});
        break;
      }
      case UKind::RVecEntry: {
        bool zero_family = idx.tag == IndexIB::Tag::Zero ||
                           (idx.tag == IndexIB::Tag::Greek);
        auto& vec = (zero_family
                         ? data.r.try_emplace(u.s, std::vector<Rat>(n, Rat(0)))
                               .first->second
                         : data.rB.try_emplace(u.s, std::vector<Rat>(n, Rat(0)))
                               .first->second);
        vec[u.eps] = x[i];
        (zero_family ? mk.r : mk.rB).insert({u.s, u.eps});
        break;
      }
      case UKind::A00:
        data.a00[u.s] = x[i];
        mk.a00.insert(u.s);
        break;
      case UKind::A10:
        data.a10[u.s] = x[i];
        mk.a10.insert(u.s);
        break;
    }
  }
  // mark unextracted-but-disallowed entries as extracted-zero so later
  // levels subtract a definite (zero) value
  for (int s = 1; s <= p; ++s)
    for (size_t eps = 0; eps < n; ++eps) {
      switch (idx.tag) {
        case IndexIB::Tag::Greek:
          mk.R.insert({s, (int)eps, idx.greek});
          break;
        case IndexIB::Tag::Zero:
          mk.r.insert({s, (int)eps});
          break;
        case IndexIB::Tag::B:
          mk.rB.insert({s, (int)eps});
          break;
      }
    }
  if (idx.tag == IndexIB::Tag::Zero) mk.a00.insert(p + 1);
  if (idx.tag == IndexIB::Tag::B) mk.a10.insert(p + 1);
  if (idx.tag == IndexIB::Tag::Greek)
    for (size_t eps = 0; eps < n; ++eps)
      if (!M->eta(eps, idx.greek).is_zero()) mk.r.insert({p + 1, (int)eps});
}

void Calibration::extract_level_constants(const IndexIB& idx) {
  Expr th = theta(idx);
  fix_quasi_homogeneity(idx, th);
}

void Calibration::descend_negative(IndexIB::Tag tag, int greek, int lo) {
  size_t n = M->dim();
  for (int q = 0; q > lo; --q) {
    IndexIB cur{tag, greek, q};
    IndexIB below{tag, greek, q - 1};
    try {
    if (theta_.count(below)) {
      extract_level_constants(below);
      continue;
    }
    const VectorField& xq = xi(cur);
    VectorField down;
    down.comp.assign(n, Expr());
    for (size_t a = 0; a < n; ++a)
      down.comp[a] = M->dir_derivative(M->unity, xq.comp[a]);
    std::vector<Expr> omega(n);
    for (size_t a = 0; a < n; ++a) {
      Expr acc;
      for (size_t b = 0; b < n; ++b) {
        const Rat& w2 = M->eta(a, b);
        if (w2.is_zero()) continue;
        acc += w2 * down.comp[b];
      }
      omega[a] = acc;
    }
    Expr f;
    for (size_t i = 0; i < n; ++i) {
      Expr rem = omega[i] - partial_derivative(f, M->coords[i]);
      if (rem.is_zero()) continue;
      f += antiderivative(rem, M->coords[i]);
    }
    for (size_t i = 0; i < n; ++i)
      if (!(partial_derivative(f, M->coords[i]) - omega[i]).is_zero())
        throw NotIntegrableCalib("negative-level descent failed at " +
                                 below.str());
    theta_[below] = f;
    extract_level_constants(below);
    } catch (const KernelError& e) {
      throw KernelError("at theta" + below.str() + ": " + e.what());
    }
  }
}

void Calibration::compute_family(IndexIB::Tag tag, int greek, int lo, int hi) {
  for (int p = 0; p <= hi; ++p) {
    IndexIB idx{tag, greek, p};
    try {
      if (theta_.count(idx)) {
        extract_level_constants(idx);
        continue;
      }
      if (p == 0) throw WindowTooSmall("missing base density for " + idx.str());
      Expr th = hessian_integrate(idx.shifted(-1));
      fix_quasi_homogeneity(idx, th);
      theta_[idx] = std::move(th);
    } catch (const KernelError& e) {
      throw KernelError("at theta" + idx.str() + ": " + e.what());
    }
  }
  if (lo < 0) descend_negative(tag, greek, lo);
}

Calibration Calibration::build(const GFManifold& m, const VectorField& B,
                               const CalibrationOptions& opt,
                               const Registrar& registrar) {
  Calibration cal;
  cal.M = &m;
  cal.B = B;
  cal.d = m.charge;
  cal.opt = opt;
  cal.data.mu = m.mu;
  cal.data.mu0 = -m.charge / Rat(2);
  cal.data.muB = quasi_weight(m, B);
  size_t n = m.dim();
  for (size_t a = 0; a < n; ++a) {
    Expr th;
    for (size_t b = 0; b < n; ++b)
      th += m.eta(a, b) * m.coord_expr(b);
    cal.theta_[IndexIB::gk((int)a, 0)] = th;
  }
  auto integrate_grad = [&](const VectorField& X, const char* what) {
    std::vector<Expr> omega(n);
    for (size_t a = 0; a < n; ++a) {
      Expr acc;
      for (size_t b = 0; b < n; ++b) {
        const Rat& w2 = m.eta(a, b);
        if (w2.is_zero()) continue;
        acc += w2 * X.comp[b];
      }
      omega[a] = acc;
    }
    Expr f;
    for (size_t i = 0; i < n; ++i) {
      Expr rem = omega[i] - partial_derivative(f, m.coords[i]);
      if (rem.is_zero()) continue;
      f += antiderivative(rem, m.coords[i]);
    }
    for (size_t i = 0; i < n; ++i)
      if (!(partial_derivative(f, m.coords[i]) - omega[i]).is_zero())
        throw NotIntegrableCalib(std::string("cannot integrate ") + what);
    return f;
  };
  cal.theta_[IndexIB::zero(0)] = integrate_grad(m.unity, "the unity density");
  cal.theta_[IndexIB::bee(0)] = integrate_grad(B, "the Legendre density");
  if (registrar) registrar(cal);
  // Greek families interleave by level: the recursion tails couple columns
  // of the same level across families.
  for (size_t a = 0; a < n; ++a) cal.extract_level_constants(IndexIB::gk((int)a, 0));
  for (int p = 1; p <= opt.greek_max; ++p)
    for (size_t a = 0; a < n; ++a) {
      IndexIB idx = IndexIB::gk((int)a, p);
      try {
        if (cal.theta_.count(idx)) {
          cal.extract_level_constants(idx);
          continue;
        }
        Expr th = cal.hessian_integrate(idx.shifted(-1));
        cal.fix_quasi_homogeneity(idx, th);
        cal.theta_[idx] = std::move(th);
      } catch (const KernelError& e) {
        throw KernelError("at theta" + idx.str() + ": " + e.what());
      }
    }
  cal.compute_family(IndexIB::Tag::B, 0, opt.b_min, opt.b_max);
  cal.compute_family(IndexIB::Tag::Zero, 0, opt.zero_min, opt.zero_max);
  return cal;
}

StructureReport Calibration::check_normalization(int pmax) const {
  StructureReport rep;
  size_t n = M->dim();
  for (int k = 0; k <= pmax; ++k)
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        Expr acc;
        for (int p = 0; p <= k; ++p) {
          Expr term = pair_xi(IndexIB::gk((int)a, p), IndexIB::gk((int)b, k - p));
          acc += (p % 2) ? -term : term;
        }
        Expr expect = k == 0 ? Expr(M->eta(a, b)) : Expr();
        rep.require_zero("normalization[z^" + std::to_string(k) + ";" +
                             std::to_string(a) + std::to_string(b) + "]",
                         acc - expect);
      }
  return rep;
}

}  // namespace gfm
