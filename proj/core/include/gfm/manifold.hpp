#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gfm/linalg.hpp"
#include "gfm/subst.hpp"

namespace gfm {

struct VectorField {
  std::vector<Expr> comp;

  VectorField() = default;
  explicit VectorField(std::vector<Expr> c) : comp(std::move(c)) {}
  size_t dim() const { return comp.size(); }
  bool operator==(const VectorField& o) const { return comp == o.comp; }
  bool is_zero() const;
};

// c^gamma_{alpha beta}, symmetric in the lower pair.
struct CTensor {
  size_t n = 0;
  std::vector<Expr> v;  // [gamma*n*n + alpha*n + beta]
  const Expr& at(size_t g, size_t a, size_t b) const { return v[(g * n + a) * n + b]; }
  Expr& at(size_t g, size_t a, size_t b) { return v[(g * n + a) * n + b]; }
};

struct StructureReport {
  std::vector<std::pair<std::string, std::string>> failures;  // id, residual
  bool ok() const { return failures.empty(); }
  void require_zero(const std::string& id, const Expr& residual) {
    if (!residual.is_zero()) failures.push_back({id, residual.str()});
  }
};

// Generalized Frobenius manifold in a fixed flat chart: constant metric,
// jet-free potential, prescribed unity/Euler fields and monodromy exponents.
class GFManifold {
 public:
  std::string name;
  std::vector<AtomId> coords;
  RatMatrix eta, eta_inv;
  Expr potential;
  VectorField unity, euler;
  Rat charge;
  std::vector<Rat> mu;
  std::vector<Rat> r_shift;

  size_t dim() const { return coords.size(); }
  Expr coord_expr(size_t a) const { return Expr::atom(coords[a]); }

  // c^gamma_{alpha beta} = eta^{gamma xi} d_xi d_alpha d_beta F  (cached).
  const CTensor& c() const;

  // Directional derivative of a function along a vector field.
  Expr dir_derivative(const VectorField& X, const Expr& f) const;

  VectorField multiply(const VectorField& X, const VectorField& Y) const;
  // E^(m+1) under repeated Frobenius multiplication, euler_power(0) = E.
  VectorField euler_power(int m) const;
  VectorField grad_eta(const Expr& f) const;
  // Lie bracket of jet-free vector fields.
  VectorField lie_bracket(const VectorField& X, const VectorField& Y) const;

  StructureReport verify_wdvv() const;
  StructureReport verify_structure() const;

  // x-translation vector v_x^alpha d_alpha used by flows.
  VectorField vx_field() const;

 private:
  mutable std::optional<CTensor> c_cache_;
};

CTensor c_from_potential(const GFManifold& m);

// The two compatible Hamiltonian operators of hydrodynamic type: the first
// from the flat metric, the second from the intersection form.
struct PoissonPair {
  const GFManifold* m;
  // Applies P1/P2 to a covector (delta H / delta v^gamma); returns the
  // resulting vector of right-hand sides.
  std::vector<Expr> apply1(const std::vector<Expr>& cov) const;
  std::vector<Expr> apply2(const std::vector<Expr>& cov) const;
  // intersection form g^{alpha beta} = E^eps c_eps^{alpha beta}
  Expr g_upper(size_t a, size_t b) const;
  // Gamma^{alpha beta}_gamma = (1/2 - mu_beta) c^{alpha beta}_gamma
  Expr gamma_upper(size_t a, size_t b, size_t g) const;
};

PoissonPair poisson_pair(const GFManifold& m);

}  // namespace gfm
