#pragma once

#include "gfm/calibration.hpp"
#include "gfm/report.hpp"

namespace gfm {

struct OrderExhausted : KernelError {
  using KernelError::KernelError;
};

// Expands an expression rational in eps into a polynomial in eps up to the
// given order (inverting eps-dependent denominators as geometric series).
Expr eps_expand(const Expr& e, AtomId eps, int order);

// Substitution of eps-graded coordinate images into a jet expression.
// Higher jets prolong through the total derivative; exp/log/root atoms
// Taylor-expand around the grade-zero part of their argument image. The
// result is truncated at eps^order.
Expr series_substitute(const Expr& e, const std::map<AtomId, Expr>& images,
                       AtomId eps, int order);

// The printed genus free energies of the corpus.
namespace genus {
Expr kdv_F(const GFManifold& kdv, int g);       // g = 1..3, jets of v
Expr kdv_hat_F(const GFManifold& hat, int g);   // g = 1..3, jets of vh
Expr al_F1(const GFManifold& al);               // jets of v, u
Expr toda_F1(const GFManifold& toda);           // jets of vt, ut
}  // namespace genus

// Quasi-Miura machinery for a one-dimensional manifold.
struct QuasiMiura {
  const Calibration* cal;
  AtomId eps;
  std::vector<Expr> genus_f;  // F_1, F_2, ... in the jets of the manifold

  Expr delta_f(int eps_order) const;  // sum eps^{2g-2} F_g, truncated

  // w = v + eps^2 eta^{alpha gamma} d_x d_{t^{gamma,0}} deltaF (dimension 1)
  Expr w_field(int eps_order) const;

  // the same dependent variable expressed back in its own jets: the inverse
  // series v = V(w-jets) with the named coordinate for w
  Expr inverse_series(AtomId w_coord, int eps_order) const;

  // deformed flow of w along the hierarchy index, expressed in w-jets
  Expr deformed_flow(const IndexIB& idx, AtomId w_coord, int eps_order) const;
};

// Solves W - U = i eps (sqrt(W + U))_x order by order; epsw plays the role
// of sqrt(2) i eps, so the equation reads W - U = (s/2) epsw D sqrt(W+U)
// with s = sqrt(2) adjoined as a quadratic root.
Expr w_recursion_series(AtomId u_coord, AtomId epsw, int order);

// 8 Lambda/(Lambda+1) [((Lambda+1)^{-1} Uh)^2] as an eps-series over the
// jets of uh, with Lambda = exp(iota eps D), iota^2 = -2.
Expr qkdv_u_bridge(AtomId uh_coord, AtomId eps, int eps_order);

// (Lambda - Lambda^{-1})/(2 sqrt2 i eps D) applied to a jet expression.
Expr symmetric_shift_ratio(const Expr& e, AtomId eps, int eps_order);

}  // namespace gfm
