#include "gfm/rewrite.hpp"

#include <map>

#include "gfm/linalg.hpp"

namespace gfm {

namespace {

struct PoolItem {
  Expr target;  // target-chart expression
  Expr image;   // its source-chart image
};

void enumerate_monomials(const std::vector<std::pair<Expr, Expr>>& gens,
                         size_t idx, int budget, bool laurent, Expr target,
                         Expr image, std::vector<PoolItem>& out) {
  if (idx == gens.size()) {
    out.push_back({target, image});
    return;
  }
  for (int e = laurent ? -budget : 0; e <= budget; ++e) {
    int cost = e < 0 ? -e : e;
    if (cost > budget) continue;
    try {
      Expr t = e == 0 ? target : target * gens[idx].first.pow(e);
      Expr im = e == 0 ? image : image * gens[idx].second.pow(e);
      enumerate_monomials(gens, idx + 1, budget - cost, laurent, t, im, out);
    } catch (const KernelError&) {
      // image not representable (log in a denominator and the like): skip
    }
  }
}

}  // namespace

bool match_linear(const Expr& target, const std::vector<Expr>& basis,
                  std::vector<Rat>& x, bool* underdetermined) {
  Poly D(Rat(1));
  {
    std::vector<Poly> dens;
    dens.push_back(target.den());
    for (auto& b : basis) dens.push_back(b.den());
    for (auto& d : dens) {
      Poly g = Poly::gcd(D, d);
      D = Poly::exact_div(D * d, g);
    }
  }
  auto over_D = [&](const Expr& e) {
    return e.num() * Poly::exact_div(D, e.den());
  };
  Poly rhs = over_D(target);
  std::vector<Poly> cols;
  for (auto& b : basis) cols.push_back(over_D(b));
  std::map<Mono, size_t, decltype([](const Mono& a, const Mono& b) {
             return Mono::cmp(a, b) < 0;
           })>
      rows;
  auto note = [&rows](const Poly& p) {
    for (auto& t : p.terms()) rows.emplace(t.m, rows.size());
  };
  note(rhs);
  for (auto& c : cols) note(c);
  std::vector<std::vector<Rat>> A(rows.size(), std::vector<Rat>(cols.size(), Rat(0)));
  std::vector<Rat> b(rows.size(), Rat(0));
  for (auto& t : rhs.terms()) b[rows.at(t.m)] = t.c;
  for (size_t j = 0; j < cols.size(); ++j)
    for (auto& t : cols[j].terms()) A[rows.at(t.m)][j] = t.c;
  if (!solve_linear_rat(std::move(A), std::move(b), x, underdetermined))
    return false;
  // exact verification (monomial matching is already exact, but cheap)
  Expr check;
  for (size_t i = 0; i < basis.size(); ++i)
    if (!x[i].is_zero()) check += x[i] * basis[i];
  return check == target;
}

std::optional<Expr> ChartRewriter::express(const Expr& source_expr) const {
  auto& tbl = AtomTable::instance();
  // Generators: chart coordinates (Laurent) and their exp atoms.
  std::vector<std::pair<Expr, Expr>> gens;
  for (size_t i = 0; i < chart_coords.size(); ++i)
    gens.push_back({Expr::atom(chart_coords[i]), images[i]});
  if (allow_exp) {
    for (size_t i = 0; i < chart_coords.size(); ++i) {
      Expr img;
      try {
        img = exp_of_expr(images[i]);
      } catch (const KernelError&) {
        continue;
      }
      gens.push_back({Expr::atom(tbl.exp_atom(chart_coords[i])), img});
    }
  }
  std::vector<PoolItem> pool;
  enumerate_monomials(gens, 0, max_degree, laurent, Expr(Rat(1)), Expr(Rat(1)),
                      pool);
  if (allow_logs) {
    size_t base = pool.size();
    for (size_t i = 0; i < chart_coords.size(); ++i) {
      try {
        Expr lt = log_of(Expr::atom(chart_coords[i]));
        Expr li = log_of(images[i]);
        for (size_t k = 0; k < base; ++k)
          pool.push_back({pool[k].target * lt, pool[k].image * li});
      } catch (const KernelError&) {
        // log of this image leaves the ring; skip the generator
      }
    }
  }
  // Common denominator over the images and the expression.
  std::vector<const Expr*> all;
  all.push_back(&source_expr);
  for (auto& p : pool) all.push_back(&p.image);
  Poly D(Rat(1));
  std::vector<Poly> dens;
  for (auto* e : all) dens.push_back(e->den());
  // lcm via gcd chaining
  for (auto& d : dens) {
    Poly g = Poly::gcd(D, d);
    D = Poly::exact_div(D * d, g);
  }
  auto numerator_over_D = [&](const Expr& e) {
    return e.num() * Poly::exact_div(D, e.den());
  };
  Poly rhs = numerator_over_D(source_expr);
  std::vector<Poly> cols;
  cols.reserve(pool.size());
  for (auto& p : pool) cols.push_back(numerator_over_D(p.image));
  // Collect the source monomial support.
  std::map<Mono, size_t, decltype([](const Mono& a, const Mono& b) {
             return Mono::cmp(a, b) < 0;
           })>
      rows;
  auto note = [&rows](const Poly& p) {
    for (auto& t : p.terms()) rows.emplace(t.m, rows.size());
  };
  note(rhs);
  for (auto& c : cols) note(c);
  std::vector<std::vector<Rat>> A(rows.size(), std::vector<Rat>(cols.size(), Rat(0)));
  std::vector<Rat> b(rows.size(), Rat(0));
  for (auto& t : rhs.terms()) b[rows.at(t.m)] = t.c;
  for (size_t j = 0; j < cols.size(); ++j)
    for (auto& t : cols[j].terms()) A[rows.at(t.m)][j] = t.c;
  std::vector<Rat> x;
  if (!solve_linear_rat(std::move(A), std::move(b), x)) return std::nullopt;
  Expr target, image_check;
  for (size_t j = 0; j < pool.size(); ++j) {
    if (x[j].is_zero()) continue;
    target += x[j] * pool[j].target;
    image_check += x[j] * pool[j].image;
  }
  if (!(image_check == source_expr)) return std::nullopt;
  return target;
}

}  // namespace gfm
