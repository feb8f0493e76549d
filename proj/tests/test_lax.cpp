#include "doctest.h"
#include "gfm/closed_forms.hpp"
#include "gfm/epsbridge.hpp"
#include "gfm/hierarchy.hpp"
#include "gfm/lattice.hpp"
#include "gfm/manifest.hpp"
#include "gfm/psido.hpp"

using namespace gfm;

namespace {

AtomTable& T = AtomTable::instance();

Expr J(AtomId c, int s) { return s == 0 ? Expr::atom(c) : Expr::atom(T.jet(c, s)); }

// Euler variational operator in one dependent coordinate; zero iff the
// expression is a total x-derivative (independent exactness oracle).
Expr variational_derivative(const Expr& e, AtomId c, int max_order) {
  Expr acc;
  for (int s = 0; s <= max_order; ++s) {
    AtomId target = s == 0 ? c : T.jet(c, s);
    Expr d = partial_derivative(e, target);
    for (int k = 0; k < s; ++k) d = total_x_derivative(d);
    acc += (s % 2) ? -d : d;
  }
  return acc;
}

BuiltManifold built(const std::string& name) {
  return build_manifold(resolve_manifest(name));
}

Calibration calib(const BuiltManifold& bm, int range) {
  CalibrationOptions opt;
  opt.greek_max = range;
  opt.zero_min = -range;
  opt.zero_max = range;
  opt.b_min = -range;
  opt.b_max = range;
  VectorField B = bm.legendre ? *bm.legendre : bm.m.unity;
  return Calibration::build(bm.m, B, opt, corpus_registrar(bm.m.name));
}

}  // namespace

TEST_CASE("KdV Lax flows match the printed expansions") {
  AtomId u = T.coord("Ukdv");
  AtomId eps = T.param("eps");
  KdVLax lax{u, eps};
  Expr E = Expr::atom(eps);
  Expr U = Expr::atom(u);
  Expr U1 = J(u, 1), U2 = J(u, 2), U3 = J(u, 3), U5 = J(u, 5);

  CHECK(lax.flow(0) == U1);
  CHECK(lax.flow(1) == U * U1 + E.pow(2) / Expr(Rat(12)) * U3);
  CHECK(lax.flow(2) == Rat(1, 2) * U.pow(2) * U1 +
                           E.pow(2) / Expr(Rat(12)) * (U * U3 + Rat(2) * U2 * U1) +
                           E.pow(4) / Expr(Rat(240)) * U5);
}

TEST_CASE("pseudo-differential square root splits and residues") {
  AtomId u = T.coord("Ukdv");
  AtomId eps = T.param("eps");
  KdVLax lax{u, eps};
  PsiDO L = lax.L();
  PsiDO half = PsiDO::sqrt(L, -6);  // defining property self-verified
  PsiDO split = half.plus_part() + half.minus_part();
  for (int k = -6; k <= 1; ++k) CHECK(split.at(k) == half.at(k));

  // residue of a bracket is a total x-derivative
  PsiDO A = half.plus_part();
  Expr r = PsiDO::bracket(A, half).residue();
  CHECK(variational_derivative(r, u, 10).is_zero());
}

TEST_CASE("Toda lattice: first flow and two-point functions") {
  TodaLattice toda;
  auto rep1 = toda.check_first_flow();
  if (!rep1.ok())
    for (auto& f : rep1.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep1.ok());
  auto rep2 = toda.two_point_checks();
  if (!rep2.ok())
    for (auto& f : rep2.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep2.ok());
}

TEST_CASE("AL lattice: inverse, Lax flow, discrete symmetry, two-point") {
  ALLattice al;
  auto repI = al.check_inverse(3);
  if (!repI.ok())
    for (auto& f : repI.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(repI.ok());
  auto repF = al.check_lax_flow(-4);
  if (!repF.ok())
    for (auto& f : repF.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(repF.ok());
  auto repD = al.check_discrete_symmetry();
  if (!repD.ok())
    for (auto& f : repD.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(repD.ok());
  auto rep2 = al.two_point_checks();
  if (!rep2.ok())
    for (auto& f : rep2.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep2.ok());
  auto repT = al.check_al_to_toda();
  if (!repT.ok())
    for (auto& f : repT.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(repT.ok());
}

TEST_CASE("q-deformed KdV lattice flows and residue identity") {
  QKdVLattice q;
  auto rep = q.check_flows(4);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
  QKdVLattice q2;
  auto rep2 = q2.check_residue_identity();
  if (!rep2.ok())
    for (auto& f : rep2.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep2.ok());
}

TEST_CASE("quasi-Miura field reproduces the printed full-genera expansion") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 4);
  AtomId eps = T.param("eps");
  QuasiMiura qm{&cal, eps, {genus::kdv_F(kdv.m, 1), genus::kdv_F(kdv.m, 2)}};
  Expr w = qm.w_field(4);
  AtomId v = kdv.m.coords[0];
  Expr v1 = J(v, 1), v2 = J(v, 2), v3 = J(v, 3), v4 = J(v, 4), v5 = J(v, 5),
       v6 = J(v, 6);
  auto g = grade_coefficients(w, eps, 0, 4);
  CHECK(g[0] == Expr::atom(v));
  CHECK(g[2] == v3 / (Rat(24) * v1) - v2.pow(2) / (Rat(24) * v1.pow(2)));
  Expr eps4 = v6 / (Rat(1152) * v1.pow(2)) -
              Rat(41) * v5 * v2 / (Rat(5760) * v1.pow(3)) -
              Rat(73) * v4 * v3 / (Rat(5760) * v1.pow(3)) +
              Rat(17) * v4 * v2.pow(2) / (Rat(480) * v1.pow(4)) +
              Rat(19) * v3.pow(2) * v2 / (Rat(384) * v1.pow(4)) -
              Rat(35) * v3 * v2.pow(3) / (Rat(288) * v1.pow(5)) +
              v2.pow(5) / (Rat(18) * v1.pow(6));
  CHECK(g[4] == eps4);
  // empty genus list: w = v
  QuasiMiura trivial{&cal, eps, {}};
  CHECK(trivial.w_field(4) == Expr::atom(v));
}

TEST_CASE("deformed Legendre flow matches the printed blocks") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 4);
  AtomId eps = T.param("eps");
  AtomId u = T.coord("Ukdv");
  QuasiMiura qm{&cal, eps, {genus::kdv_F(kdv.m, 1), genus::kdv_F(kdv.m, 2)}};
  Expr flow = qm.deformed_flow(IndexIB::bee(0), u, 4);
  Expr U = Expr::atom(u);
  Expr U1 = J(u, 1), U2 = J(u, 2), U3 = J(u, 3), U4 = J(u, 4), U5 = J(u, 5);
  Expr sq = root_of(U, 2);  // U^(1/2)
  auto upow = [&](int half_num) {  // U^(half_num/2)
    return (half_num % 2 == 0) ? U.pow(half_num / 2)
                               : U.pow((half_num - 1) / 2) * sq;
  };
  auto g = grade_coefficients(flow, eps, 0, 4);
  CHECK(g[0] == Rat(1, 2) * U1 / upow(1));
  Expr b2 = -U3 / (Rat(48) * upow(3)) + U2 * U1 / (Rat(16) * upow(5)) -
            Rat(5) * U1.pow(3) / (Rat(128) * upow(7));
  CHECK(g[2] == b2);
  Expr b4 = U5 / (Rat(640) * upow(5)) - Rat(3) * U4 * U1 / (Rat(256) * upow(7)) -
            Rat(5) * U3 * U2 / (Rat(256) * upow(7)) +
            Rat(161) * U3 * U1.pow(2) / (Rat(3072) * upow(9)) +
            Rat(217) * U2.pow(2) * U1 / (Rat(3072) * upow(9)) -
            Rat(21) * U2 * U1.pow(3) / (Rat(128) * upow(11)) +
            Rat(1155) * U1.pow(5) / (Rat(16384) * upow(13));
  CHECK(g[4] == b4);
}

TEST_CASE("deformed KdV flow equals the Lax flow through eps^4") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 4);
  AtomId eps = T.param("eps");
  AtomId u = T.coord("Ukdv");
  QuasiMiura qm{&cal, eps, {genus::kdv_F(kdv.m, 1), genus::kdv_F(kdv.m, 2)}};
  Expr flow = qm.deformed_flow(IndexIB::gk(0, 1), u, 4);
  KdVLax lax{u, eps};
  Expr expect = truncate_in(lax.flow(1), eps, 4);
  CHECK(flow == expect);
}

TEST_CASE("U / hat-U bridge matches the printed series") {
  AtomId uh = T.coord("Uqk");
  AtomId eps = T.param("eps");
  Expr out = qkdv_u_bridge(uh, eps, 4);
  Expr Uh = Expr::atom(uh);
  Expr U1 = J(uh, 1), U2 = J(uh, 2), U3 = J(uh, 3), U4 = J(uh, 4);
  Expr E = Expr::atom(eps);
  Expr expect = Uh.pow(2) +
                E.pow(2) * (Uh * U2 + Rat(1, 2) * U1.pow(2)) +
                E.pow(4) * (Rat(1, 3) * Uh * U4 + Rat(2, 3) * U3 * U1 +
                            Rat(1, 2) * U2.pow(2));
  CHECK(out == expect);
}

TEST_CASE("W recursion: defining equation and printed coefficients") {
  AtomId u = T.coord("Ukdv");
  AtomId epsw = T.param("epsw");
  Expr W = w_recursion_series(u, epsw, 4);
  Expr U = Expr::atom(u);
  Expr U1 = J(u, 1), U2 = J(u, 2), U3 = J(u, 3), U4 = J(u, 4);
  Expr sq = root_of(U, 2);
  auto upow = [&](int half_num) {
    return (half_num % 2 == 0) ? U.pow(half_num / 2)
                               : U.pow((half_num - 1) / 2) * sq;
  };
  auto g = grade_coefficients(W, epsw, 0, 4);
  CHECK(g[0] == U);
  CHECK(g[1] == U1 / (Rat(2) * upow(1)));
  CHECK(g[2] == U2 / (Rat(8) * U) - U1.pow(2) / (Rat(8) * U.pow(2)));
  CHECK(g[3] == U3 / (Rat(32) * upow(3)) +
                    Rat(25) * U1.pow(3) / (Rat(256) * upow(7)) -
                    U2 * U1 / (Rat(8) * upow(5)));
  CHECK(g[4] == U4 / (Rat(128) * U.pow(2)) -
                    Rat(13) * U3 * U1 / (Rat(256) * U.pow(3)) -
                    Rat(9) * U2.pow(2) / (Rat(256) * U.pow(3)) +
                    Rat(99) * U2 * U1.pow(2) / (Rat(512) * U.pow(4)) -
                    Rat(15) * U1.pow(4) / (Rat(128) * U.pow(5)));
  // defining equation residual at the truncation order
  Expr s2 = root_of(Expr(Rat(2)), 2);
  Expr T2 = truncate_in((W - U) / (Rat(2) * U), epsw, 4);
  Expr series(Rat(1));
  Expr pow(Rat(1));
  Rat binom(1);
  for (int j = 1; j <= 4; ++j) {
    binom *= (Rat(1, 2) - Rat(j - 1)) / Rat(j);
    pow = truncate_in(pow * T2, epsw, 4);
    series += binom * pow;
  }
  Expr root = s2 * root_of(U, 2) * series;
  Expr resid = truncate_in(
      W - U - Rat(1, 2) * s2 * Expr::atom(epsw) * total_x_derivative(root),
      epsw, 4);
  CHECK(resid.is_zero());
}

TEST_CASE("hatted quasi-Miura series for the q-deformed side") {
  auto hat = built("kdv_hat");
  auto cal = calib(hat, 4);
  AtomId eps = T.param("eps");
  QuasiMiura qm{&cal, eps,
                {genus::kdv_hat_F(hat.m, 1), genus::kdv_hat_F(hat.m, 2)}};
  Expr what = qm.w_field(4);
  Expr uhat = symmetric_shift_ratio(what, eps, 4);
  AtomId vh = hat.m.coords[0];
  Expr V = Expr::atom(vh);
  Expr v1 = J(vh, 1), v2 = J(vh, 2), v3 = J(vh, 3), v4 = J(vh, 4), v5 = J(vh, 5),
       v6 = J(vh, 6);
  auto g = grade_coefficients(uhat, eps, 0, 4);
  CHECK(g[0] == V);
  CHECK(g[2] == V * v3 / (Rat(12) * v1) - V * v2.pow(2) / (Rat(12) * v1.pow(2)));
  Expr e4 = V.pow(2) * v6 / (Rat(288) * v1.pow(2)) -
            Rat(41) * V.pow(2) * v5 * v2 / (Rat(1440) * v1.pow(3)) +
            Rat(3) * V * v5 / (Rat(160) * v1) -
            Rat(73) * V.pow(2) * v4 * v3 / (Rat(1440) * v1.pow(3)) +
            Rat(17) * V.pow(2) * v4 * v2.pow(2) / (Rat(120) * v1.pow(4)) -
            Rat(13) * V * v4 * v2 / (Rat(160) * v1.pow(2)) +
            Rat(19) * V.pow(2) * v3.pow(2) * v2 / (Rat(96) * v1.pow(4)) -
            V * v3.pow(2) / (Rat(18) * v1.pow(2)) -
            Rat(35) * V.pow(2) * v3 * v2.pow(3) / (Rat(72) * v1.pow(5)) +
            Rat(71) * V * v3 * v2.pow(2) / (Rat(288) * v1.pow(3)) +
            Rat(2) * V.pow(2) * v2.pow(5) / (Rat(9) * v1.pow(6)) -
            Rat(37) * V * v2.pow(4) / (Rat(288) * v1.pow(4));
  CHECK(g[4] == e4);
}
