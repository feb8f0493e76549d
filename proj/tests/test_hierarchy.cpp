#include "doctest.h"
#include "gfm/closed_forms.hpp"
#include "gfm/hierarchy.hpp"
#include "gfm/manifest.hpp"

using namespace gfm;

namespace {

BuiltManifold built(const std::string& name) {
  return build_manifold(resolve_manifest(name));
}

Calibration calib(const BuiltManifold& bm, int greek_max, int lo, int hi) {
  CalibrationOptions opt;
  opt.greek_max = greek_max;
  opt.zero_min = lo;
  opt.zero_max = hi;
  opt.b_min = lo;
  opt.b_max = hi;
  VectorField B = bm.legendre ? *bm.legendre : bm.m.unity;
  return Calibration::build(bm.m, B, opt, corpus_registrar(bm.m.name));
}

}  // namespace

TEST_CASE("flow right-hand sides") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 4, -3, 4);
  auto& t = AtomTable::instance();
  Expr v = kdv.m.coord_expr(0);
  Expr vx = Expr::atom(t.jet(kdv.m.coords[0], 1));
  Expr w = root_of(v, 2);

  CHECK(flow_rhs(cal, IndexIB::gk(0, 1)).rhs[0] == v * vx);
  CHECK(flow_rhs(cal, IndexIB::bee(0)).rhs[0] == vx / (Rat(2) * w));
  CHECK(flow_rhs(cal, IndexIB::zero(0)).rhs[0] == vx);

  auto hat = built("kdv_hat");
  auto hcal = calib(hat, 4, -3, 4);
  Expr vh = hat.m.coord_expr(0);
  Expr vhx = Expr::atom(t.jet(hat.m.coords[0], 1));
  CHECK(flow_rhs(hcal, IndexIB::zero(0)).rhs[0] == vhx);
  // hatted Legendre flows: 2 vh^(2p+1) vh_x / p!
  for (int p = 0; p <= 3; ++p)
    CHECK(flow_rhs(hcal, IndexIB::bee(p)).rhs[0] ==
          Rat(2) * vh.pow(2 * p + 1) * vhx / Expr(rat_factorial(p)));
  // hatted unity flows: Gamma(1/2)/Gamma(p+1/2) vh^(2p) vh_x
  for (int p = -2; p <= 3; ++p)
    CHECK(flow_rhs(hcal, IndexIB::zero(p)).rhs[0] ==
          gamma_half_ratio(p) * (vh.pow(2 * p) * vhx));
}

TEST_CASE("KdV commutator of the (1,1) and (B,0) flows, both orders") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 3, -2, 3);
  auto& t = AtomTable::instance();
  Expr v = kdv.m.coord_expr(0);
  Expr vx = Expr::atom(t.jet(kdv.m.coords[0], 1));
  Expr vxx = Expr::atom(t.jet(kdv.m.coords[0], 2));
  Expr w = root_of(v, 2);

  Flow f11 = flow_rhs(cal, IndexIB::gk(0, 1));
  Flow fB0 = flow_rhs(cal, IndexIB::bee(0));
  // independent oracle: both mixed second derivatives computed directly
  Expr d1 = time_derivative(kdv.m, fB0.rhs[0], f11.rhs);
  Expr d2 = time_derivative(kdv.m, f11.rhs[0], fB0.rhs);
  Expr expect = Rat(1, 4) * (vx * vx * w / v) + Rat(1, 2) * w * vxx;
  CHECK(d1 == expect);
  CHECK(d2 == expect);
  auto res = commutator_check(kdv.m, f11, fB0);
  CHECK(res[0].is_zero());
}

TEST_CASE("window flows commute and obey tau symmetry (KdV)") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 8, -7, 8);
  auto tau = TauStructure::build(cal, 3);
  auto rep = check_flows(cal, tau, 3);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
}

TEST_CASE("window flows commute and obey tau symmetry (AL)") {
  auto al = built("al");
  auto cal = calib(al, 6, -5, 6);
  auto tau = TauStructure::build(cal, 2);
  auto rep = check_flows(cal, tau, 2);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
}

TEST_CASE("bihamiltonian recursion (KdV)") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 6, -5, 6);
  auto rep = biham_recursion_check(cal, 3);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());

  // spec example: i = 1, q = 2: both sides equal (q + 1/2) v^q v_x / q!
  auto& t = AtomTable::instance();
  Expr v = kdv.m.coord_expr(0);
  Expr vx = Expr::atom(t.jet(kdv.m.coords[0], 1));
  PoissonPair P = poisson_pair(kdv.m);
  std::vector<Expr> covq = {partial_derivative(cal.theta(IndexIB::gk(0, 2)),
                                               kdv.m.coords[0])};
  auto lhs = P.apply2(covq);
  CHECK(lhs[0] == Rat(5, 2) * (v * v * vx) / Expr(rat_factorial(2)));
}

TEST_CASE("bihamiltonian recursion (AL window)") {
  auto al = built("al");
  auto cal = calib(al, 5, -4, 5);
  auto rep = biham_recursion_check(cal, 2);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
}

TEST_CASE("linear reciprocal correspondence (KdV pair)") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 9, -8, 9);
  auto tr = transform(kdv.m, *kdv.legendre, {"vh"}, "kdv_hat");
  auto hat = built("kdv_hat");
  auto hcal = calib(hat, 9, -8, 9);
  auto rep = verify_reciprocal(cal, tr, &hcal, 3, /*hat_extended_ok=*/true);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());

  // the printed first-jet relation: d hat v / d hat x = v_x / (4v)
  Expr v = kdv.m.coord_expr(0);
  auto& t = AtomTable::instance();
  Expr vx = Expr::atom(t.jet(kdv.m.coords[0], 1));
  Flow fB0 = flow_rhs(cal, IndexIB::bee(0));
  Expr vhx = time_derivative(kdv.m, tr.coord_map[0], fB0.rhs);
  CHECK(vhx == vx / (Rat(4) * v));
}

TEST_CASE("linear reciprocal correspondence (AL pair)") {
  auto al = built("al");
  auto cal = calib(al, 6, -5, 6);
  auto tr = transform(al.m, *al.legendre, {"vt", "ut"}, "toda");
  auto toda = built("toda");
  auto tcal = calib(toda, 6, -5, 6);
  auto rep = verify_reciprocal(cal, tr, &tcal, 2, /*hat_extended_ok=*/false);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
}
