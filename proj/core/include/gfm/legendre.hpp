#pragma once

#include <optional>
#include <string>

#include "gfm/manifold.hpp"
#include "gfm/rewrite.hpp"

namespace gfm {

struct NotInvertible : KernelError {
  using KernelError::KernelError;
};
struct NotQuasiHomogeneous : KernelError {
  using KernelError::KernelError;
};
struct NotIntegrable : KernelError {
  using KernelError::KernelError;
};

// c^delta_{alpha gamma} d_beta B^gamma - c^delta_{beta gamma} d_alpha B^gamma
// must vanish for all alpha, beta, delta.
StructureReport is_legendre(const GFManifold& m, const VectorField& B);

// Solves B . X = e in the fraction field.
VectorField invert_field(const GFManifold& m, const VectorField& B);

// mu_B with [E, B] = (mu_B - (2-d)/2) B.
Rat quasi_weight(const GFManifold& m, const VectorField& B);

struct TransformResult {
  GFManifold target;                  // hatted manifold in its own chart
  std::vector<Expr> coord_map;        // hat coordinates as source expressions
  Rat mu_B;
  Rat charge_hat;
  VectorField inverse_source;         // B^{-1}, source frame components
  std::vector<Expr> inverse_hat_src;  // B^{-1} hatted components, source chart
  std::optional<VectorField> inverse_hat;  // same, rewritten in hat chart
  // Substitution sending hat-chart jet expressions to source-chart ones
  // (x-rates follow the hat spatial variable of the reciprocal pair).
  SubstMap pullback;
  // Available when the coordinate change inverts rationally (source coords
  // as hat-chart expressions, with x-rates): sends source-chart jets to
  // hat-chart jets.
  std::optional<SubstMap> pushforward;
  std::optional<std::vector<Expr>> source_in_hat;  // v^alpha in hat chart
};

// Builds the Legendre-transformed manifold: hat coordinates by integrating
// d(hat v)/dv = B c, potential by matching second derivatives (renormalized
// by dropping constant-coefficient monomials of degree <= 2), unity B^alpha,
// charge -2 mu_B. Residual Euler translations are removed when the weight
// allows; resonant shifts are kept and reported in the target r-vector.
TransformResult transform(const GFManifold& m, const VectorField& B,
                          const std::vector<std::string>& hat_names,
                          const std::string& target_name);

}  // namespace gfm
