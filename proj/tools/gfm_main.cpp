#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gfm/suites.hpp"

using namespace gfm;

int main(int argc, char** argv) {
  CLI::App app{"Exact symbolic workbench for generalized Frobenius manifolds "
               "and their Legendre-extended hierarchies"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand(
      "check", "Run a named check suite against a manifest");
  std::string manifest_arg;
  std::string suite = "all";
  std::string format = "text";
  SuiteOptions opt;
  check->add_option("manifest", manifest_arg,
                    "Builtin manifold (kdv, kdv_hat, al, toda) or a manifest file")
      ->required();
  check->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember(suite_names()));
  check->add_option("--window", opt.window, "Two-point/flow level window");
  check->add_option("--vir-window", opt.vir_window, "Virasoro level window");
  check->add_option("--genus", opt.genus, "Loop-equation genus ceiling");
  check->add_option("--eps-order", opt.eps_order, "Dispersive expansion order");
  check->add_option("--laurent-order", opt.laurent_order,
                    "Laurent order for the quartic-side loop equation");
  check->add_flag("--fail-fast", opt.fail_fast, "Stop at the first failure");
  check->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));

  auto* list = app.add_subcommand("list", "List builtin manifests and suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    std::cout << "builtin manifests:";
    for (auto& n : builtin_manifest_names()) std::cout << " " << n;
    std::cout << "\nsuites:";
    for (auto& s : suite_names()) std::cout << " " << s;
    std::cout << "\n";
    return 0;
  }

  try {
    Manifest m = resolve_manifest(manifest_arg);
    SuiteOptions defaults;
    SuiteOptions manifest_opt = defaults;
    manifest_opt.overlay(m);
    // explicit command-line values win over manifest defaults
    if (opt.window == defaults.window) opt.window = manifest_opt.window;
    if (opt.vir_window == defaults.vir_window)
      opt.vir_window = manifest_opt.vir_window;
    if (opt.genus == defaults.genus) opt.genus = manifest_opt.genus;
    if (opt.eps_order == defaults.eps_order)
      opt.eps_order = manifest_opt.eps_order;
    if (opt.laurent_order == defaults.laurent_order)
      opt.laurent_order = manifest_opt.laurent_order;

    Report rep = run_suite(m, suite, opt);
    std::string out = format == "json" ? rep.to_json() : rep.to_text();
    std::cout << out;
    if (const char* dir = std::getenv("GFM_REPORT_DIR")) {
      std::string path = std::string(dir) + "/" + m.name + "_" + suite +
                         (format == "json" ? ".json" : ".txt");
      std::ofstream f(path);
      f << out;
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const gfm::ParseError& e) {
    std::cerr << "parse error (line " << e.line << ", col " << e.col
              << "): " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const DependencyUnsatisfied& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
