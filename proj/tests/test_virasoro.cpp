#include "doctest.h"
#include "gfm/closed_forms.hpp"
#include "gfm/manifest.hpp"
#include "gfm/virasoro.hpp"

using namespace gfm;

namespace {

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

struct KdVSetup {
  BuiltManifold bm;
  Calibration cal;
  TauStructure tau;
  KdVSetup(int range, int tau_window)
      : bm(built("kdv")), cal(calib(bm, range)),
        tau(TauStructure::build(cal, tau_window)) {}
};

}  // namespace

TEST_CASE("grade projection and P_m matrices") {
  auto kdv = built("kdv");
  auto cal = calib(kdv, 6);
  auto tau = TauStructure::build(cal, 2);
  RatMatrix mu = tau.mu_tilde();
  RatMatrix R = tau.R_tilde(1);

  // KdV complete data sits entirely in grade 1
  CHECK(grade_project(R, mu, 1) == R);
  CHECK(grade_project(R, mu, 0).is_zero());
  CHECK(grade_project(R, mu, -1).is_zero());
  RatMatrix Z(5, 5);
  CHECK(grade_project(Z, mu, 2).is_zero());

  // P_{-1} = 1, P_0 = mu - 1/2 + R, P_1 = mu^2 - 1/4 + 2 R mu + R^2
  CHECK(pm_matrix(-1, mu, R) == RatMatrix::identity(5));
  RatMatrix P0 = pm_matrix(0, mu, R);
  RatMatrix expect0 = mu + R;
  for (size_t i = 0; i < 5; ++i) expect0(i, i) -= Rat(1, 2);
  CHECK(P0 == expect0);
  RatMatrix P1 = pm_matrix(1, mu, R);
  RatMatrix expect1 = mu * mu + (R * mu).mul_rat(Rat(2)) + R * R;
  for (size_t i = 0; i < 5; ++i) expect1(i, i) -= Rat(1, 4);
  CHECK(P1 == expect1);
  // reassembly of the grade decomposition
  RatMatrix sum(5, 5);
  for (int s = -2; s <= 2; ++s) sum = sum + grade_project(P1, mu, s);
  CHECK(sum == P1);
}

TEST_CASE("Heisenberg commutation relations on the window") {
  KdVSetup S(6, 2);
  VirasoroFamily fam(S.tau);
  auto rep = fam.check_heisenberg(3);
  if (!rep.ok())
    for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
  CHECK(rep.ok());
}

TEST_CASE("KdV explicit L_{-1} and L_0 tables") {
  KdVSetup S(8, 3);
  VirasoroFamily fam(S.tau);

  VirasoroOperator Lm1 = fam.build_Lm(-1, 4);
  // t^{i,p} d/d t^{i,p-1} with unit coefficients, no a-terms
  CHECK(Lm1.a.empty());
  CHECK(Lm1.b_at(IndexIB::bee(2), IndexIB::bee(1)) == Rat(1));
  CHECK(Lm1.b_at(IndexIB::zero(-3), IndexIB::zero(-4)) == Rat(1));
  CHECK(Lm1.b_at(IndexIB::gk(0, 1), IndexIB::gk(0, 0)) == Rat(1));
  CHECK(Lm1.b_at(IndexIB::gk(0, 0), IndexIB::zero(-1)) == Rat(0));
  CHECK(Lm1.c_at(IndexIB::gk(0, 0), IndexIB::gk(0, 0)) == Rat(1, 2));
  CHECK(Lm1.constant == Rat(0));

  VirasoroOperator L0 = fam.build_Lm(0, 4);
  CHECK(L0.constant == Rat(1, 16));
  for (int p = -3; p <= 3; ++p) {
    CHECK(L0.b_at(IndexIB::bee(p), IndexIB::bee(p)) == Rat(p));
    CHECK(L0.b_at(IndexIB::zero(p), IndexIB::zero(p)) == Rat(p) + Rat(1, 2));
    if (p >= 0)
      CHECK(L0.b_at(IndexIB::gk(0, p), IndexIB::gk(0, p)) == Rat(p) + Rat(1, 2));
  }
  // (1/8) sum (-1)^p t^{B,p} t^{B,-p}
  CHECK(L0.c_at(IndexIB::bee(2), IndexIB::bee(-2)) == Rat(1, 8));
  CHECK(L0.c_at(IndexIB::bee(1), IndexIB::bee(-1)) == Rat(-1, 8));
  CHECK(L0.c_at(IndexIB::bee(0), IndexIB::bee(0)) == Rat(1, 8));
  CHECK(L0.c_at(IndexIB::zero(1), IndexIB::zero(-1)) == Rat(0));
}

TEST_CASE("generic construction matches the printed general forms, m = -1..2") {
  KdVSetup S(8, 3);
  VirasoroFamily fam(S.tau);
  for (int m = -1; m <= 2; ++m) {
    auto rep = fam.explicit_compare(m, 4);
    if (!rep.ok())
      for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
    INFO("m = ", m);
    CHECK(rep.ok());
  }
}

TEST_CASE("AL pair: generic matches printed general forms") {
  auto al = built("al");
  auto cal = calib(al, 6);
  auto tau = TauStructure::build(cal, 2);
  VirasoroFamily fam(tau);
  for (int m = -1; m <= 2; ++m) {
    auto rep = fam.explicit_compare(m, 3);
    if (!rep.ok())
      for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
    INFO("m = ", m);
    CHECK(rep.ok());
  }
}

TEST_CASE("KdV printed extended family for m >= 1") {
  KdVSetup S(10, 3);
  VirasoroFamily fam(S.tau);
  for (int m = 1; m <= 2; ++m) {
    VirasoroOperator generic = fam.build_Lm(m, 4);
    VirasoroOperator printed = kdv_printed_Lm(m, 4);
    std::string why;
    INFO("m = ", m, " ", why);
    bool ok = generic.same_tables(printed, &why);
    if (!ok) MESSAGE(why);
    CHECK(ok);
  }
}

TEST_CASE("coefficient vanishing patterns") {
  KdVSetup S(8, 3);
  VirasoroFamily fam(S.tau);
  for (int m = -1; m <= 2; ++m) {
    auto rep = fam.check_coefficient_patterns(m, 3);
    INFO("m = ", m);
    CHECK(rep.ok());
  }
}

TEST_CASE("windowed commutation relations [L_m, L_k] = (m-k) L_{m+k}") {
  KdVSetup S(10, 3);
  VirasoroFamily fam(S.tau);
  for (auto [m, k] : std::vector<std::pair<int, int>>{
           {-1, 0}, {-1, 1}, {-1, 2}, {0, 0}, {0, 1}, {0, 2}, {1, 1}}) {
    auto rep = fam.check_commutation(m, k, 3);
    if (!rep.ok())
      for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
    INFO("pair ", m, ",", k);
    CHECK(rep.ok());
  }
}

TEST_CASE("windowed commutation on the AL corpus") {
  auto al = built("al");
  auto cal = calib(al, 8);
  auto tau = TauStructure::build(cal, 2);
  VirasoroFamily fam(tau);
  for (auto [m, k] : std::vector<std::pair<int, int>>{{-1, 0}, {-1, 1}, {0, 1}}) {
    auto rep = fam.check_commutation(m, k, 2);
    if (!rep.ok())
      for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
    INFO("pair ", m, ",", k);
    CHECK(rep.ok());
  }
}

TEST_CASE("relabeling correspondence between the KdV pair operators") {
  KdVSetup S(8, 3);
  VirasoroFamily fam(S.tau);
  auto hat = built("kdv_hat");
  auto hcal = calib(hat, 8);
  auto htau = TauStructure::build(hcal, 3);
  VirasoroFamily hfam(htau);
  for (int m = -1; m <= 2; ++m) {
    VirasoroOperator mine = fam.build_Lm(m, 3);
    VirasoroOperator hatop = hfam.build_Lm(m, 3);
    VirasoroOperator relabeled = relabel_correspondence(hatop);
    std::string why;
    bool ok = mine.same_tables(relabeled, &why);
    if (!ok) MESSAGE("m=", m, " ", why);
    CHECK(ok);
  }
}

TEST_CASE("Virasoro symmetry identity on the two-point table (KdV)") {
  KdVSetup S(18, 8);
  VirasoroFamily fam(S.tau);
  for (int m : {-1, 0, 1}) {
    auto rep = fam.virasoro_symmetry_identity(m, 2);
    if (!rep.ok())
      for (auto& f : rep.failures) MESSAGE(f.first, ": ", f.second);
    INFO("m = ", m);
    CHECK(rep.ok());
  }
}
