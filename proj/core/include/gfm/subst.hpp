#pragma once

#include <map>
#include <memory>
#include <optional>

#include "gfm/expr.hpp"

namespace gfm {

// Differential substitution map. Coordinates map to base images; first jets
// map to declared x-rate images. Higher jets are generated by the derivation
// induced on the target ring: solving  J * rho = rate  for the target rates
// rho and extending as  Dx = sum_s D^s(rho^beta) d/d(target jet beta,s).
// With identity rates this reduces to ordinary prolongation.
class SubstMap {
 public:
  // base image of a source coordinate (required for every coordinate hit).
  void set_base(AtomId coord, Expr image);
  // image of the source first jet coord_x (optional; defaults to the total
  // x-derivative of the base image in the target ring).
  void set_rate(AtomId coord, Expr image);
  // image of exp(coord) when the base image does not exponentiate rationally.
  void set_exp_image(AtomId coord, Expr image);
  // parameters map to themselves unless overridden here.
  void set_param(AtomId param, Expr image);

  bool has_base(AtomId coord) const;
  const std::map<AtomId, Expr>& bases() const { return base_; }

  // Applies the substitution to an arbitrary expression (prolonging through
  // jets as needed). Throws MissingImage when a required image is absent.
  Expr apply(const Expr& e) const;

  // The derivation on the target ring that is the image of d/dx. Exposed for
  // diagnostics and the commutation property test.
  Expr target_dx(const Expr& target_expr) const;

 public:
  struct Work;

 private:
  std::map<AtomId, Expr> base_;
  std::map<AtomId, Expr> rate_;
  std::map<AtomId, Expr> exp_img_;
  std::map<AtomId, Expr> param_;
  mutable std::shared_ptr<Work> work_;
};

// Plain (non-differential) substitution of jet-free expressions: coordinates
// only; exp/log/root atoms map through their defining constructors.
Expr substitute(const Expr& e, const std::map<AtomId, Expr>& images);

}  // namespace gfm
