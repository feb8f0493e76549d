#pragma once

#include <string>

#include "gfm/calibration.hpp"

namespace gfm {

// Corpus-specific closed-form registrations (Bessel-type generating
// functions for the Toda densities). Returns an empty function for corpora
// whose tables are generated by the recursion alone.
Calibration::Registrar corpus_registrar(const std::string& manifold_name);

// Reference closed forms used by the tests and the calibration suite.
namespace closed {

// KdV side: theta_{0,p} = theta_{1,p} = v^(p+1)/(p+1)!, p >= 0.
Expr kdv_theta_greek(const GFManifold& kdv, int p);
// theta_{B,p} = (Gamma(1/2)/Gamma(p+1/2)) v^(p+1/2)/(2p+1), any integer p.
Expr kdv_theta_B(const GFManifold& kdv, int p);
// xi_{B,p} single component: (1/2) Gamma(1/2)/Gamma(p+1/2) v^(p-1/2).
Expr kdv_xi_B(const GFManifold& kdv, int p);

// Hatted side: xi_{0,p} component (1/2)Gamma(1/2)/Gamma(p+1/2) vh^(2p-1) and
// the matching densities.
Expr kdv_hat_theta_greek(const GFManifold& hat, int p);  // vh^(2p+1)/((2p+1) p!)
Expr kdv_hat_theta_zero(const GFManifold& hat, int p);   // log at p = 0

// Toda densities from the Bessel generating functions (p >= 0).
Expr toda_theta1(const GFManifold& toda, int p);
Expr toda_theta2(const GFManifold& toda, int p);

}  // namespace closed

}  // namespace gfm
