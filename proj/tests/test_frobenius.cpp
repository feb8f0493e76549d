#include "doctest.h"
#include "gfm/manifest.hpp"
#include "gfm/parser.hpp"

using namespace gfm;

namespace {

BuiltManifold built(const std::string& name) {
  return build_manifold(resolve_manifest(name));
}

// Independent third-derivative oracle: numeric-free, recomputes c directly
// from the potential through fresh partial derivatives.
Expr c_oracle(const GFManifold& m, size_t g, size_t a, size_t b) {
  Expr acc;
  for (size_t xi = 0; xi < m.dim(); ++xi) {
    const Rat& w = m.eta_inv(g, xi);
    if (w.is_zero()) continue;
    Expr d = m.potential;
    d = partial_derivative(d, m.coords[xi]);
    d = partial_derivative(d, m.coords[a]);
    d = partial_derivative(d, m.coords[b]);
    acc += w * d;
  }
  return acc;
}

}  // namespace

TEST_CASE("c_from_potential against the third-derivative oracle") {
  auto kdv = built("kdv");
  CHECK(kdv.m.c().at(0, 0, 0) == Expr(Rat(1)));  // F = v^3/6 -> c = 1
  CHECK(kdv.m.c().at(0, 0, 0) == c_oracle(kdv.m, 0, 0, 0));

  auto hat = built("kdv_hat");
  Expr vh = hat.m.coord_expr(0);
  CHECK(hat.m.c().at(0, 0, 0) == Rat(2) * vh);  // F = vh^4/12 -> c = 2 vh
  CHECK(hat.m.c().at(0, 0, 0) == c_oracle(hat.m, 0, 0, 0));

  auto al = built("al");
  for (size_t g = 0; g < 2; ++g)
    for (size_t a = 0; a < 2; ++a)
      for (size_t b = 0; b < 2; ++b)
        CHECK(al.m.c().at(g, a, b) == c_oracle(al.m, g, a, b));
  // c^v_{uu} = v e^u for the 2d generalized manifold
  Expr v = al.m.coord_expr(0);
  AtomId u = al.m.coords[1];
  CHECK(al.m.c().at(0, 1, 1) == v * exp_of({{u, Rat(1)}}));
}

TEST_CASE("verify_wdvv on all four corpus manifolds") {
  for (const char* name : {"kdv", "kdv_hat", "al", "toda"}) {
    auto b = built(name);
    auto rep = b.m.verify_wdvv();
    INFO(name);
    CHECK(rep.ok());
  }
}

TEST_CASE("verify_structure on all four corpus manifolds") {
  for (const char* name : {"kdv", "kdv_hat", "al", "toda"}) {
    auto b = built(name);
    auto rep = b.m.verify_structure();
    INFO(name, " failures: ", rep.failures.empty() ? "" : rep.failures[0].first);
    CHECK(rep.ok());
  }
}

TEST_CASE("broken Euler field is detected") {
  auto kdv = built("kdv");
  GFManifold bad = kdv.m;
  bad.euler.comp[0] = Rat(2) * bad.coord_expr(0);  // E -> 2 v d_v
  auto rep = bad.verify_structure();
  CHECK(!rep.ok());
  bool lie_c_failed = false;
  for (auto& f : rep.failures) lie_c_failed |= f.first.rfind("lie_c", 0) == 0;
  CHECK(lie_c_failed);
}

TEST_CASE("multiply and euler_power") {
  auto kdv = built("kdv");
  VectorField E = kdv.m.euler;
  VectorField EE = kdv.m.multiply(E, E);
  Expr v = kdv.m.coord_expr(0);
  CHECK(EE.comp[0] == v * v);
  CHECK(kdv.m.euler_power(1).comp[0] == v * v);
  CHECK(kdv.m.euler_power(0) == E);

  auto hat = built("kdv_hat");
  Expr vh = hat.m.coord_expr(0);
  // unity times a basis field returns the basis field
  VectorField basis{{Expr(Rat(1))}};
  CHECK(hat.m.multiply(hat.m.unity, basis) == basis);
  CHECK(hat.m.euler_power(1).comp[0] == Rat(1, 2) * vh.pow(3));

  auto al = built("al");
  CHECK(al.m.multiply(al.m.unity, al.m.euler) == al.m.euler);
}

TEST_CASE("grad_eta") {
  auto kdv = built("kdv");
  Expr v = kdv.m.coord_expr(0);
  CHECK(kdv.m.grad_eta(Rat(1, 2) * v * v).comp[0] == v);

  auto al = built("al");
  // antidiagonal eta: grad u = d_v
  Expr u = Expr::atom(al.m.coords[1]);
  VectorField g = al.m.grad_eta(u);
  CHECK(g.comp[0] == Expr(Rat(1)));
  CHECK(g.comp[1].is_zero());

  // theta_{B,0} = sqrt(v): grad = 1/(2 sqrt v) d_v, twice the square of which
  // is consistent with the c = 1 multiplication oracle
  Expr w = root_of(v, 2);
  VectorField xiB0 = kdv.m.grad_eta(w);
  CHECK(xiB0.comp[0] == (Rat(2) * w).inv());
  VectorField sq = kdv.m.multiply(xiB0, xiB0);
  CHECK(sq.comp[0] == (Rat(4) * v).inv());
  // and matches grad of Omega_{B,0;B,0} = 1/4 log v
  CHECK(kdv.m.grad_eta(Rat(1, 4) * log_of(v)) == sq);
}

TEST_CASE("poisson pair on KdV") {
  auto kdv = built("kdv");
  auto P = poisson_pair(kdv.m);
  auto& t = AtomTable::instance();
  Expr v = kdv.m.coord_expr(0);
  Expr vx = Expr::atom(t.jet(kdv.m.coords[0], 1));

  // P2 applied to a covector f(v): v dx f + 1/2 vx f
  Expr f = v * v;  // arbitrary function of v
  auto out = P.apply2({f});
  CHECK(out[0] == v * total_x_derivative(f) + Rat(1, 2) * vx * f);

  // P1 applied to v
  auto p1 = P.apply1({v});
  CHECK(p1[0] == vx);

  // P2 applied to 1: only the Gamma term survives
  auto g = P.apply2({Expr(Rat(1))});
  CHECK(g[0] == Rat(1, 2) * vx);
}

TEST_CASE("frobenius symmetry and associativity properties") {
  auto al = built("al");
  // <X.Y, Z> totally symmetric and (X.Y).Z == X.(Y.Z) for a random-ish triple
  std::map<std::string, AtomId> scope{{"v", al.m.coords[0]}, {"u", al.m.coords[1]}};
  ExprParser P(scope);
  VectorField X{{P.parse("v^2"), P.parse("exp(u)")}};
  VectorField Y{{P.parse("u"), P.parse("v - exp(u)")}};
  VectorField Z{{P.parse("1"), P.parse("v*u")}};
  auto pair_with = [&](const VectorField& A, const VectorField& B) {
    Expr acc;
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j)
        acc += Expr(al.m.eta(i, j)) * A.comp[i] * B.comp[j];
    return acc;
  };
  Expr s1 = pair_with(al.m.multiply(X, Y), Z);
  Expr s2 = pair_with(al.m.multiply(X, Z), Y);
  Expr s3 = pair_with(al.m.multiply(Z, Y), X);
  CHECK(s1 == s2);
  CHECK(s1 == s3);
  CHECK(al.m.multiply(al.m.multiply(X, Y), Z) == al.m.multiply(X, al.m.multiply(Y, Z)));
}

TEST_CASE("manifest validation errors") {
  Manifest bad = resolve_manifest("al");
  bad.eta[0][1] = Rat(2);  // breaks symmetry
  CHECK_THROWS_AS(build_manifold(bad), ValidationError);

  CHECK_THROWS_AS(parse_manifest_text("manifold = x\ncoords = a\nxyz = 1\n"),
                  ParseError);
  // undeclared coordinate inside the potential
  Manifest bad2 = resolve_manifest("kdv");
  bad2.potential_text = "q^3";
  CHECK_THROWS_AS(build_manifold(bad2), ParseError);
}

TEST_CASE("manifest round-trip") {
  for (auto& name : builtin_manifest_names()) {
    Manifest m = resolve_manifest(name);
    Manifest again = parse_manifest_text(print_manifest(m));
    CHECK(print_manifest(again) == print_manifest(m));
  }
}
