#pragma once

#include "gfm/manifold.hpp"
#include "gfm/report.hpp"
#include "gfm/subst.hpp"

namespace gfm {

struct NonzeroResidual : KernelError {
  using KernelError::KernelError;
};
struct LaurentOrderExhausted : KernelError {
  using KernelError::KernelError;
};
struct NonConstantDifference : KernelError {
  using KernelError::KernelError;
};

// Genus-by-genus residual of the loop equation of the cubic-potential
// manifold; F = (F_1, ..., F_G) in the jets of its coordinate. The genus-g
// block must vanish exactly (the genus-zero source 1/(16 (v-lambda)^2)
// belongs to the g = 1 block).
Expr loop_residual_M(const GFManifold& kdv, const std::vector<Expr>& F, int g);

// The quartic-potential side; exact rational residual in the root extension
// by sqrt(vh^2 - lambda).
Expr loop_residual_Mhat(const GFManifold& hat, const std::vector<Expr>& F, int g);

// Splits an expression into even/odd parts with respect to the square-root
// atom of (vh^2 - lambda); each part is rational in lambda.
std::pair<Expr, Expr> root_parity_split(const Expr& e, AtomId root_atom_id);

// Coefficients of the expansion in 1/lambda: c_0, c_1, ..., c_{count-1}
// with e = sum_j c_j lambda^{-j} * lambda^{lead}; throws when e is not
// expandable. Exact rational arithmetic throughout.
std::vector<Expr> laurent_coefficients(const Expr& e, AtomId lambda, int count,
                                       int* lead_power = nullptr);

// Verification wrappers used by the suites.
StructureReport verify_loop_M(const GFManifold& kdv, const std::vector<Expr>& F,
                              int gmax);
StructureReport verify_loop_Mhat(const GFManifold& hat,
                                 const std::vector<Expr>& F, int gmax,
                                 int laurent_order);

// F_g(source jets) minus the pullback of Fhat_g must be constant; returns
// the constant as "q" or "q + (a/b) log(r)". Throws NonConstantDifference.
std::string genus_correspondence(const GFManifold& src, const Expr& F_g,
                                 const Expr& Fhat_g, const SubstMap& pullback);

}  // namespace gfm
