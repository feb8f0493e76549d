#include "gfm/closed_forms.hpp"

namespace gfm {

namespace closed {

Expr kdv_theta_greek(const GFManifold& kdv, int p) {
  Expr v = kdv.coord_expr(0);
  return v.pow(p + 1) / Expr(rat_factorial(p + 1));
}

Expr kdv_theta_B(const GFManifold& kdv, int p) {
  Expr v = kdv.coord_expr(0);
  Expr w = root_of(v, 2);
  return gamma_half_ratio(p) / Rat(2 * p + 1) * (v.pow(p) * w);
}

Expr kdv_xi_B(const GFManifold& kdv, int p) {
  Expr v = kdv.coord_expr(0);
  Expr w = root_of(v, 2);
  return Rat(1, 2) * gamma_half_ratio(p) * (v.pow(p) * w / v);
}

Expr kdv_hat_theta_greek(const GFManifold& hat, int p) {
  Expr vh = hat.coord_expr(0);
  return vh.pow(2 * p + 1) / Expr(Rat(2 * p + 1) * rat_factorial(p));
}

Expr kdv_hat_theta_zero(const GFManifold& hat, int p) {
  Expr vh = hat.coord_expr(0);
  if (p == 0) return Rat(1, 2) * log_of(vh);
  return gamma_half_ratio(p) / Rat(4 * p) * vh.pow(2 * p);
}

Expr toda_theta2(const GFManifold& toda, int p) {
  Expr vh = toda.coord_expr(0);
  AtomId uh = toda.coords[1];
  Expr acc;
  for (int k = 0; 2 * k <= p + 1; ++k) {
    int m = p + 1 - 2 * k;
    Rat c = (rat_factorial(m) * rat_factorial(k) * rat_factorial(k)).inv();
    acc += c * (vh.pow(m) * exp_of({{uh, Rat(k)}}));
  }
  return acc;
}

Expr toda_theta1(const GFManifold& toda, int p) {
  Expr vh = toda.coord_expr(0);
  AtomId uh = toda.coords[1];
  Expr uhat = Expr::atom(uh);
  Expr acc;
  for (int k = 0; 2 * k <= p; ++k) {
    int m = p - 2 * k;
    Rat c = (rat_factorial(m) * rat_factorial(k) * rat_factorial(k)).inv();
    Expr mono = vh.pow(m) * exp_of({{uh, Rat(k)}});
    acc += c * (uhat * mono);
    if (k >= 1) acc -= Rat(2) * harmonic(k) * c * mono;
  }
  return acc;
}

}  // namespace closed

Calibration::Registrar corpus_registrar(const std::string& name) {
  if (name == "toda") {
    return [](Calibration& cal) {
      for (int p = 1; p <= cal.opt.greek_max; ++p) {
        cal.register_closed_form(IndexIB::gk(0, p),
                                 closed::toda_theta1(*cal.M, p));
        cal.register_closed_form(IndexIB::gk(1, p),
                                 closed::toda_theta2(*cal.M, p));
      }
    };
  }
  return nullptr;
}

}  // namespace gfm
