#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "gfm/suites.hpp"
#include "json.hpp"

using namespace gfm;

TEST_CASE("manifest round-trip through print and parse") {
  for (auto& name : builtin_manifest_names()) {
    Manifest m = resolve_manifest(name);
    Manifest again = parse_manifest_text(print_manifest(m));
    CHECK(print_manifest(again) == print_manifest(m));
    // builds to the same manifold
    auto a = build_manifold(m);
    auto b = build_manifold(again);
    CHECK(a.m.potential == b.m.potential);
    CHECK(a.m.unity == b.m.unity);
  }
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_manifest_text("manifold = x\ncoords = a\npotential = a +\n");
    build_manifold(parse_manifest_text("manifold = x\ncoords = a\n"
                                       "eta = 1\npotential = a +\n"
                                       "unity = 1\neuler = a\ncharge = 0\n"
                                       "mu = 0\nrshift = 0\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.col >= 1);
  }
}

TEST_CASE("suite reports: stable ids, json shape, skip semantics") {
  Manifest m = resolve_manifest("kdv");
  SuiteOptions opt;
  opt.window = 2;
  opt.vir_window = 2;
  Report r1 = run_suite(m, "structure", opt);
  Report r2 = run_suite(m, "structure", opt);
  REQUIRE(r1.checks.size() == r2.checks.size());
  for (size_t i = 0; i < r1.checks.size(); ++i)
    CHECK(r1.checks[i].id == r2.checks[i].id);
  CHECK(r1.all_pass());

  auto j = nlohmann::json::parse(r1.to_json());
  CHECK(j["corpus"] == "kdv");
  CHECK(j["suite"] == "structure");
  CHECK(j["checks"].size() == r1.checks.size());
  CHECK(j["checks"][0].contains("id"));
  CHECK(j["checks"][0].contains("status"));
  CHECK(j["checks"][0].contains("residual"));
  CHECK(j["checks"][0].contains("elapsed_ms"));
  CHECK(j["all_pass"] == true);

  // empty-ish report (toda legendre suite yields a skip, never a fail)
  Manifest toda = resolve_manifest("toda");
  Report r3 = run_suite(toda, "legendre", opt);
  CHECK(r3.all_pass());
  bool has_skip = false;
  for (auto& c : r3.checks) has_skip |= c.status == "skip";
  CHECK(has_skip);
}

TEST_CASE("failing checks carry a printable residual") {
  Manifest bad = resolve_manifest("kdv");
  bad.euler_text = {"2*v"};  // breaks the quasi-homogeneity
  SuiteOptions opt;
  Report r = run_suite(bad, "structure", opt);
  CHECK(!r.all_pass());
  bool found = false;
  for (auto& c : r.checks)
    if (c.status == "fail" && !c.detail.empty()) found = true;
  CHECK(found);
  auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["all_pass"] == false);
}

TEST_CASE("unknown suite raises a usage error") {
  Manifest m = resolve_manifest("kdv");
  SuiteOptions opt;
  CHECK_THROWS_AS(run_suite(m, "bogus", opt), DependencyUnsatisfied);
}
