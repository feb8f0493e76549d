#pragma once

#include <functional>
#include <optional>

#include "gfm/manifest.hpp"
#include "gfm/report.hpp"

namespace gfm {

struct DependencyUnsatisfied : KernelError {
  using KernelError::KernelError;
};

struct SuiteOptions {
  int window = 4;       // two-point/flow window
  int vir_window = 3;   // Virasoro window for m <= 2
  int genus = 2;        // loop genus ceiling
  int eps_order = 4;    // Lax cross-map order
  int laurent_order = 30;
  int property_cases = 1000;
  bool fail_fast = false;

  void overlay(const Manifest& m) {
    window = m.window;
    vir_window = m.vir_window;
    genus = m.genus;
    eps_order = m.eps_order;
    laurent_order = m.laurent_order;
  }
};

const std::vector<std::string>& suite_names();  // includes "all"

// Runs one named suite against a manifest (builtin name or file content).
// Unknown suite names raise DependencyUnsatisfied; corpus-specific checks
// that do not apply to the given manifold are reported as skips.
Report run_suite(const Manifest& manifest, const std::string& suite,
                 const SuiteOptions& opt);

}  // namespace gfm
