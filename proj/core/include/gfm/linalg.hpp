#pragma once

#include <vector>

#include "gfm/expr.hpp"

namespace gfm {

// Dense rational matrix helpers used by monodromy-type data and the
// Virasoro construction.
struct RatMatrix {
  std::vector<std::vector<Rat>> a;

  RatMatrix() = default;
  RatMatrix(size_t r, size_t c) : a(r, std::vector<Rat>(c, Rat(0))) {}
  static RatMatrix identity(size_t n);
  static RatMatrix diagonal(const std::vector<Rat>& d);

  size_t rows() const { return a.size(); }
  size_t cols() const { return a.empty() ? 0 : a[0].size(); }
  Rat& operator()(size_t i, size_t j) { return a[i][j]; }
  const Rat& operator()(size_t i, size_t j) const { return a[i][j]; }

  friend RatMatrix operator+(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator-(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y);
  RatMatrix mul_rat(const Rat& r) const;
  RatMatrix transpose() const;
  RatMatrix pow(int k) const;
  bool is_zero() const;
  bool operator==(const RatMatrix& y) const { return a == y.a; }
  // Exact inverse; throws if singular.
  RatMatrix inverse() const;
  static RatMatrix commutator(const RatMatrix& x, const RatMatrix& y);
};

// Exact Gaussian elimination over the Expr fraction field; A must be square
// and nonsingular. Throws KernelError on singularity.
std::vector<Expr> solve_linear_expr(std::vector<std::vector<Expr>> A,
                                    std::vector<Expr> b);

// Exact solve of a (possibly rectangular) rational system A x = b.
// Returns false when inconsistent. Free variables are set to zero;
// *underdetermined reports whether any occurred.
bool solve_linear_rat(std::vector<std::vector<Rat>> A, std::vector<Rat> b,
                      std::vector<Rat>& x, bool* underdetermined = nullptr);

}  // namespace gfm
