#pragma once

#include "gfm/legendre.hpp"
#include "gfm/tau.hpp"

namespace gfm {

// Hydrodynamic flow of the extended hierarchy: rhs^alpha = (xi_{i,p} . v_x)^alpha.
struct Flow {
  IndexIB index;
  std::vector<Expr> rhs;
};

Flow flow_rhs(const Calibration& cal, const IndexIB& index);

// Time derivative of a jet expression along a flow, by the jet chain rule.
Expr time_derivative(const GFManifold& m, const Expr& e,
                     const std::vector<Expr>& rhs);

// d_A(rhs_B) - d_B(rhs_A); zero for commuting flows.
std::vector<Expr> commutator_check(const GFManifold& m, const Flow& A,
                                   const Flow& B);

// Pairwise commutativity over the window plus the tau-symmetry property.
StructureReport check_flows(const Calibration& cal, const TauStructure& tau,
                            int window);

// The linear reciprocal correspondence: for every window index, the flow of
// the hatted coordinates computed from the source-side hierarchy under the
// time relabeling equals the hatted flow built from the hatted calibration,
// pulled back to the source chart.
// hat_cal: optional independently built hatted calibration for the third
// route; its extended family participates only when hat_extended_ok (the
// hatted Legendre field must be the true inverse field).
StructureReport verify_reciprocal(const Calibration& cal,
                                  const TransformResult& tr,
                                  const Calibration* hat_cal, int window,
                                  bool hat_extended_ok);

// P2 dH_{i,q-1} = (q + 1/2 + mu_i) P1 dH_{i,q} + sum_s Rtail(s) P1 dH_{eps,q-s}.
StructureReport biham_recursion_check(const Calibration& cal, int window);

}  // namespace gfm
