#include "doctest.h"
#include "gfm/epsbridge.hpp"
#include "gfm/legendre.hpp"
#include "gfm/loop.hpp"
#include "gfm/manifest.hpp"

using namespace gfm;

namespace {
BuiltManifold built(const std::string& name) {
  return build_manifold(resolve_manifest(name));
}
}  // namespace

TEST_CASE("KdV loop equation: printed F_1, F_2 solve it exactly") {
  auto kdv = built("kdv");
  std::vector<Expr> F{genus::kdv_F(kdv.m, 1), genus::kdv_F(kdv.m, 2)};
  auto rep = verify_loop_M(kdv.m, F, 2);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
}

TEST_CASE("KdV loop equation: perturbed genus-one density fails") {
  auto kdv = built("kdv");
  AtomId v = kdv.m.coords[0];
  Expr bad = Rat(1, 23) * log_of(Expr::atom(AtomTable::instance().jet(v, 1)));
  Expr r = loop_residual_M(kdv.m, {bad}, 1);
  CHECK(!r.is_zero());
}

TEST_CASE("hatted loop equation: printed F^hat_1, F^hat_2 pass") {
  auto hat = built("kdv_hat");
  std::vector<Expr> F{genus::kdv_hat_F(hat.m, 1), genus::kdv_hat_F(hat.m, 2)};
  auto rep = verify_loop_Mhat(hat.m, F, 2, 30);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second.substr(0, 80));
  CHECK(rep.ok());
}

TEST_CASE("hatted loop equation: zero data leaves the genus-zero source") {
  auto hat = built("kdv_hat");
  Expr r = loop_residual_Mhat(hat.m, {Expr()}, 1);
  AtomId lam = AtomTable::instance().param("lambda");
  Expr V = hat.m.coord_expr(0);
  // residual convention is lhs - rhs: only the source survives
  CHECK(r == Rat(1, 16) * ((V * V - Expr::atom(lam)).inv().pow(2)));
}

TEST_CASE("Laurent expansion machinery") {
  auto& t = AtomTable::instance();
  AtomId lam = t.param("lambda");
  AtomId v = t.coord("v");
  Expr L = Expr::atom(lam), V = Expr::atom(v);
  // 1/(lambda - v) = sum v^j / lambda^(j+1)
  int lead = 0;
  auto c = laurent_coefficients((L - V).inv(), lam, 5, &lead);
  CHECK(lead == -1);
  for (int j = 0; j < 5; ++j) CHECK(c[j] == V.pow(j));
  CHECK_THROWS_AS(laurent_coefficients(Expr(Rat(1)) / (V - V), lam, 3),
                  DivisionByZero);
}

TEST_CASE("genus correspondence for the KdV pair") {
  auto kdv = built("kdv");
  auto tr = transform(kdv.m, *kdv.legendre, {"vh"}, "kdv_hat");
  auto hat = built("kdv_hat");
  // g = 1: constant log 4 / 24 = (1/12) log 2
  std::string c1 = genus_correspondence(
      kdv.m, genus::kdv_F(kdv.m, 1), genus::kdv_hat_F(hat.m, 1), tr.pullback);
  CHECK(c1 == "1/12*log(2)");
  // g = 2: exactly zero
  std::string c2 = genus_correspondence(
      kdv.m, genus::kdv_F(kdv.m, 2), genus::kdv_hat_F(hat.m, 2), tr.pullback);
  CHECK(c2 == "0");
  // perturbation is rejected
  CHECK_THROWS_AS(
      genus_correspondence(kdv.m, Rat(2) * genus::kdv_F(kdv.m, 2),
                           genus::kdv_hat_F(hat.m, 2), tr.pullback),
      NonConstantDifference);
}

TEST_CASE("genus correspondence for the AL/Toda pair") {
  auto al = built("al");
  auto tr = transform(al.m, *al.legendre, {"vt", "ut"}, "toda");
  auto toda = built("toda");
  std::string c1 = genus_correspondence(al.m, genus::al_F1(al.m),
                                        genus::toda_F1(toda.m), tr.pullback);
  CHECK(c1 == "0");
}

TEST_CASE("genus-three stretch: printed F_3 on both sides" * doctest::skip()) {
  auto kdv = built("kdv");
  std::vector<Expr> F{genus::kdv_F(kdv.m, 1), genus::kdv_F(kdv.m, 2),
                      genus::kdv_F(kdv.m, 3)};
  Expr r = loop_residual_M(kdv.m, F, 3);
  CHECK(r.is_zero());

  auto tr = transform(kdv.m, *kdv.legendre, {"vh"}, "kdv_hat");
  auto hat = built("kdv_hat");
  std::string c3 = genus_correspondence(
      kdv.m, genus::kdv_F(kdv.m, 3), genus::kdv_hat_F(hat.m, 3), tr.pullback);
  CHECK(c3 == "0");
}
