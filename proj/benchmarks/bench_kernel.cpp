#include <benchmark/benchmark.h>

#include "gfm/expr.hpp"
#include "gfm/subst.hpp"

using namespace gfm;

namespace {

Expr sample_fraction() {
  auto& t = AtomTable::instance();
  AtomId v = t.coord("bench_v");
  AtomId u = t.coord("bench_u");
  Expr V = Expr::atom(v), U = Expr::atom(u);
  Expr vx = Expr::atom(t.jet(v, 1)), ux = Expr::atom(t.jet(u, 1));
  Expr eu = exp_of({{u, Rat(1)}});
  return (V.pow(3) * vx - Rat(7, 3) * eu * ux * ux + U * V) /
         (V * V - eu * eu);
}

}  // namespace

static void BM_poly_multiply(benchmark::State& state) {
  Expr a = sample_fraction();
  Expr b = a + Expr(Rat(1));
  Expr big_a = a.num().size() ? Expr::from_poly(a.num()) : a;
  Expr big_b = Expr::from_poly(b.num());
  for (int i = 0; i < 3; ++i) {
    big_a = big_a * big_a + big_b;
    big_b = big_b * big_a;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(big_a * big_b);
  }
}
BENCHMARK(BM_poly_multiply);

static void BM_fraction_add_reduce(benchmark::State& state) {
  Expr a = sample_fraction();
  Expr b = total_x_derivative(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a / b + b / a);
  }
}
BENCHMARK(BM_fraction_add_reduce);

static void BM_total_derivative(benchmark::State& state) {
  Expr a = sample_fraction();
  for (int i = 0; i < 2; ++i) a = total_x_derivative(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(total_x_derivative(a));
  }
}
BENCHMARK(BM_total_derivative);

static void BM_prolonged_substitution(benchmark::State& state) {
  auto& t = AtomTable::instance();
  AtomId v = t.coord("bench_v");
  AtomId w = t.coord("bench_w");
  SubstMap m;
  m.set_base(v, Expr::atom(w, 2));
  m.set_rate(v, Rat(4) * Expr::atom(w, 2) * Expr::atom(t.jet(w, 1)));
  Expr a = sample_fraction();
  a = total_x_derivative(total_x_derivative(a));
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.apply(a));
  }
}
BENCHMARK(BM_prolonged_substitution);

BENCHMARK_MAIN();
