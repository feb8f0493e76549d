#include <benchmark/benchmark.h>

#include "gfm/closed_forms.hpp"
#include "gfm/epsbridge.hpp"
#include "gfm/loop.hpp"
#include "gfm/manifest.hpp"
#include "gfm/virasoro.hpp"

using namespace gfm;

namespace {

Calibration kdv_calibration(int range) {
  auto bm = build_manifold(resolve_manifest("kdv"));
  CalibrationOptions opt;
  opt.greek_max = range;
  opt.zero_min = -range;
  opt.zero_max = range;
  opt.b_min = -range;
  opt.b_max = range;
  static auto held = std::make_shared<BuiltManifold>(bm);
  return Calibration::build(held->m, *held->legendre, opt, nullptr);
}

}  // namespace

static void BM_calibration_build(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(kdv_calibration((int)state.range(0)));
  }
}
BENCHMARK(BM_calibration_build)->Arg(6)->Arg(10);

static void BM_tau_window(benchmark::State& state) {
  Calibration cal = kdv_calibration(2 * (int)state.range(0) + 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(TauStructure::build(cal, (int)state.range(0)));
  }
}
BENCHMARK(BM_tau_window)->Arg(2)->Arg(4);

static void BM_virasoro_commutator(benchmark::State& state) {
  Calibration cal = kdv_calibration(8);
  TauStructure tau = TauStructure::build(cal, 3);
  VirasoroFamily fam(tau);
  VirasoroOperator L1 = fam.build_Lm(1, 8);
  VirasoroOperator Lm1 = fam.build_Lm(-1, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(VirasoroFamily::commutator(Lm1, L1));
  }
}
BENCHMARK(BM_virasoro_commutator);

static void BM_loop_residual_g2(benchmark::State& state) {
  auto bm = build_manifold(resolve_manifest("kdv"));
  std::vector<Expr> F{genus::kdv_F(bm.m, 1), genus::kdv_F(bm.m, 2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(loop_residual_M(bm.m, F, 2));
  }
}
BENCHMARK(BM_loop_residual_g2);

static void BM_quasi_miura_eps4(benchmark::State& state) {
  auto bm = build_manifold(resolve_manifest("kdv"));
  Calibration cal = kdv_calibration(6);
  AtomId eps = AtomTable::instance().param("eps");
  QuasiMiura qm{&cal, eps, {genus::kdv_F(bm.m, 1), genus::kdv_F(bm.m, 2)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qm.w_field(4));
  }
}
BENCHMARK(BM_quasi_miura_eps4);

BENCHMARK_MAIN();
