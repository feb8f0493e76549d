#include "gfm/subst.hpp"

#include <algorithm>
#include <mutex>

#include "gfm/linalg.hpp"

namespace gfm {

// Coordinates without a declared base image map to themselves (with their
// jets intact); this subsumes partial maps and keeps the induced x-derivation
// well-defined on the whole ring. Image and derivative caches persist across
// apply() calls and are guarded by a recursive mutex.

namespace {
std::recursive_mutex g_subst_mu;
}

struct SubstMap::Work {
  std::map<AtomId, Expr> atom_img;
  std::map<AtomId, Expr> rho;                     // target-coordinate x-rates
  std::map<std::pair<AtomId, int>, Expr> rho_dx;  // cached D^s(rho)
  bool rates_ready = false;
  bool plain_prolong = false;  // no declared rates: Dx = total derivative
};

namespace {

void collect_coords(const Expr& e, std::vector<AtomId>& out) {
  std::vector<AtomId> atoms;
  e.collect_atoms(atoms);
  for (AtomId a : atoms) {
    const AtomInfo& info = atom_info(a);
    if (info.kind == AtomKind::Coord) out.push_back(a);
    if (info.kind == AtomKind::Jet || info.kind == AtomKind::Exp)
      out.push_back(info.base);
    if ((info.kind == AtomKind::Log || info.kind == AtomKind::Root) && info.arg)
      collect_coords(*info.arg, out);
  }
}

struct SubstState {
  const std::map<AtomId, Expr>& base;
  const std::map<AtomId, Expr>& rate;
  const std::map<AtomId, Expr>& exp_img;
  const std::map<AtomId, Expr>& param;
  SubstMap::Work& w;

  void ensure_rates() {
    if (w.rates_ready) return;
    w.rates_ready = true;
    if (rate.empty()) {
      w.plain_prolong = true;
      return;
    }
    std::vector<AtomId> targets;
    for (auto& [c, img] : base) collect_coords(img, targets);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    std::vector<AtomId> eq_coords;
    for (auto& [c, r] : rate) eq_coords.push_back(c);
    if (eq_coords.size() != targets.size())
      throw MissingImage("substitution rates do not determine the x-derivation");
    std::vector<std::vector<Expr>> J(eq_coords.size(),
                                     std::vector<Expr>(targets.size()));
    std::vector<Expr> rhs(eq_coords.size());
    for (size_t i = 0; i < eq_coords.size(); ++i) {
      auto it = base.find(eq_coords[i]);
      if (it == base.end())
        throw MissingImage("rate declared for a coordinate without a base image");
      for (size_t j = 0; j < targets.size(); ++j)
        J[i][j] = partial_derivative(it->second, targets[j]);
      rhs[i] = rate.at(eq_coords[i]);
    }
    std::vector<Expr> rho = solve_linear_expr(std::move(J), std::move(rhs));
    for (size_t j = 0; j < targets.size(); ++j) w.rho[targets[j]] = rho[j];
  }

  Expr rho_of(AtomId c) {
    auto it = w.rho.find(c);
    if (it != w.rho.end()) return it->second;
    return Expr::atom(AtomTable::instance().jet(c, 1));
  }

  Expr rho_dx(AtomId c, int order) {
    auto key = std::make_pair(c, order);
    auto it = w.rho_dx.find(key);
    if (it != w.rho_dx.end()) return it->second;
    Expr d = order == 1 ? rho_of(c) : total_x_derivative(rho_dx(c, order - 1));
    w.rho_dx.emplace(key, d);
    return d;
  }

  // The image of d/dx as a derivation on the target ring.
  Expr dx(const Expr& e) {
    ensure_rates();
    if (w.plain_prolong) return total_x_derivative(e);
    auto datom = [&](AtomId a) -> Expr {
      const AtomInfo& info = atom_info(a);
      switch (info.kind) {
        case AtomKind::Coord:
          return rho_of(a);
        case AtomKind::Jet:
          return total_derivative_of_jet(info);
        case AtomKind::Param:
        case AtomKind::LogPrime:
          return Expr();
        case AtomKind::Exp:
          return rho_of(info.base) * Expr::atom(a);
        case AtomKind::Log:
          return dx(*info.arg) / *info.arg;
        case AtomKind::Root:
          return Expr::atom(a) * dx(*info.arg) / (Rat(info.order) * *info.arg);
      }
      return Expr();
    };
    return derive(e, datom);
  }

  Expr total_derivative_of_jet(const AtomInfo& info) {
    // d/dx of target jet (c, s) is D^s(rho_c) with D the target total
    // derivative; rho_dx(c, s+1) caches exactly that.
    return rho_dx(info.base, info.order + 1);
  }

  template <typename F>
  Expr derive(const Expr& e, F&& datom) {
    auto derive_poly = [&](const Poly& p) {
      Expr acc;
      for (auto& term : p.terms()) {
        auto& entries = term.m.entries();
        for (size_t i = 0; i < entries.size(); ++i) {
          Expr d = datom(entries[i].first);
          if (d.is_zero()) continue;
          std::vector<Mono::Entry> rest;
          for (size_t k = 0; k < entries.size(); ++k) {
            int ee = entries[k].second - (k == i ? 1 : 0);
            if (ee != 0) rest.push_back({entries[k].first, ee});
          }
          Poly m = Poly(Rat(1)).mul_mono(Mono::from_sorted(std::move(rest)),
                                         term.c * Rat(entries[i].second));
          acc += Expr::from_poly(m) * d;
        }
      }
      return acc;
    };
    Expr dn = derive_poly(e.num());
    if (e.is_poly()) return dn;
    Expr dd = derive_poly(e.den());
    Expr den = Expr::from_poly(e.den());
    return dn / den - Expr::from_poly(e.num()) * dd / (den * den);
  }

  Expr image(AtomId a) {
    auto it = w.atom_img.find(a);
    if (it != w.atom_img.end()) return it->second;
    const AtomInfo& info = atom_info(a);
    Expr img;
    switch (info.kind) {
      case AtomKind::Coord: {
        auto b = base.find(a);
        img = b == base.end() ? Expr::atom(a) : b->second;
        break;
      }
      case AtomKind::Param: {
        auto p = param.find(a);
        img = p == param.end() ? Expr::atom(a) : p->second;
        break;
      }
      case AtomKind::LogPrime:
        img = Expr::atom(a);
        break;
      case AtomKind::Jet: {
        AtomId c = info.base;
        ensure_rates();
        if (!base.count(c) && !rate.count(c) && w.plain_prolong) {
          img = Expr::atom(a);
          break;
        }
        if (info.order == 1) {
          auto r = rate.find(c);
          if (r != rate.end()) {
            img = r->second;
          } else {
            Expr base_img = image(c);
            img = w.plain_prolong ? total_x_derivative(base_img) : dx(base_img);
          }
        } else {
          Expr prev = image(AtomTable::instance().jet(c, info.order - 1));
          img = w.plain_prolong ? total_x_derivative(prev) : dx(prev);
        }
        break;
      }
      case AtomKind::Exp: {
        AtomId c = info.base;
        auto x = exp_img.find(c);
        if (x != exp_img.end()) {
          img = x->second;
        } else if (!base.count(c)) {
          img = Expr::atom(a);
        } else {
          try {
            img = exp_of_expr(base.at(c));
          } catch (const KernelError&) {
            throw MissingImage("no usable image for exp of a mapped coordinate");
          }
        }
        break;
      }
      case AtomKind::Log:
        img = log_of(apply(*info.arg));
        break;
      case AtomKind::Root:
        img = root_of(apply(*info.arg), info.order);
        break;
    }
    w.atom_img.emplace(a, img);
    return img;
  }

  Expr apply(const Expr& e) {
    auto apply_poly = [&](const Poly& p) {
      Expr acc;
      for (auto& term : p.terms()) {
        Expr t(term.c);
        for (auto& [id, ee] : term.m.entries()) t = t * image(id).pow(ee);
        acc += t;
      }
      return acc;
    };
    Expr n = apply_poly(e.num());
    if (e.is_poly()) return n;
    Expr d = apply_poly(e.den());
    return n / d;
  }
};

}  // namespace

void SubstMap::set_base(AtomId coordinate, Expr image) {
  std::lock_guard lk(g_subst_mu);
  base_[coordinate] = std::move(image);
}
void SubstMap::set_rate(AtomId coordinate, Expr image) {
  std::lock_guard lk(g_subst_mu);
  rate_[coordinate] = std::move(image);
}
void SubstMap::set_exp_image(AtomId coordinate, Expr image) {
  std::lock_guard lk(g_subst_mu);
  exp_img_[coordinate] = std::move(image);
}
void SubstMap::set_param(AtomId p, Expr image) {
  std::lock_guard lk(g_subst_mu);
  param_[p] = std::move(image);
}

bool SubstMap::has_base(AtomId coordinate) const {
  std::lock_guard lk(g_subst_mu);
  return base_.count(coordinate) != 0;
}

Expr SubstMap::apply(const Expr& e) const {
  std::lock_guard lk(g_subst_mu);
  if (!work_) work_ = std::make_shared<Work>();
  SubstState st{base_, rate_, exp_img_, param_, *work_};
  return st.apply(e);
}

Expr SubstMap::target_dx(const Expr& e) const {
  std::lock_guard lk(g_subst_mu);
  if (!work_) work_ = std::make_shared<Work>();
  SubstState st{base_, rate_, exp_img_, param_, *work_};
  return st.dx(e);
}

Expr substitute(const Expr& e, const std::map<AtomId, Expr>& images) {
  SubstMap m;
  for (auto& [c, img] : images) m.set_base(c, img);
  return m.apply(e);
}

}  // namespace gfm
