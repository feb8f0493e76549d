#pragma once

#include <optional>
#include <vector>

#include "gfm/expr.hpp"

namespace gfm {

// Expresses a source-chart expression as a rational combination of
// target-chart monomials, given the source-chart images of the target
// coordinates. Candidate pool: Laurent monomials in the chart coordinates
// and their exp atoms up to the given degree, optionally times a single
// log(coordinate) factor. Returns the target-chart expression on success.
struct ChartRewriter {
  std::vector<AtomId> chart_coords;
  std::vector<Expr> images;  // source-chart image of each chart coordinate
  int max_degree = 4;
  bool allow_exp = true;
  bool allow_logs = false;
  bool laurent = true;

  std::optional<Expr> express(const Expr& source_expr) const;
};

// Solves target = sum_i x_i basis_i exactly over the rationals by monomial
// matching after clearing denominators. Free directions are set to zero and
// flagged through *underdetermined. Returns false when inconsistent.
bool match_linear(const Expr& target, const std::vector<Expr>& basis,
                  std::vector<Rat>& x, bool* underdetermined = nullptr);

}  // namespace gfm
