#include "gfm/linalg.hpp"

namespace gfm {

RatMatrix RatMatrix::identity(size_t n) {
  RatMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = Rat(1);
  return m;
}

RatMatrix RatMatrix::diagonal(const std::vector<Rat>& d) {
  RatMatrix m(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

RatMatrix operator+(const RatMatrix& x, const RatMatrix& y) {
  RatMatrix m(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i)
    for (size_t j = 0; j < x.cols(); ++j) m(i, j) = x(i, j) + y(i, j);
  return m;
}

RatMatrix operator-(const RatMatrix& x, const RatMatrix& y) {
  RatMatrix m(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i)
    for (size_t j = 0; j < x.cols(); ++j) m(i, j) = x(i, j) - y(i, j);
  return m;
}

RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  RatMatrix m(x.rows(), y.cols());
  for (size_t i = 0; i < x.rows(); ++i)
    for (size_t k = 0; k < x.cols(); ++k) {
      if (x(i, k).is_zero()) continue;
      for (size_t j = 0; j < y.cols(); ++j)
        m(i, j) += x(i, k) * y(k, j);
    }
  return m;
}

RatMatrix RatMatrix::mul_rat(const Rat& r) const {
  RatMatrix m = *this;
  for (auto& row : m.a)
    for (auto& v : row) v *= r;
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix m(cols(), rows());
  for (size_t i = 0; i < rows(); ++i)
    for (size_t j = 0; j < cols(); ++j) m(j, i) = a[i][j];
  return m;
}

RatMatrix RatMatrix::pow(int k) const {
  RatMatrix r = identity(rows());
  RatMatrix b = *this;
  while (k > 0) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool RatMatrix::is_zero() const {
  for (auto& row : a)
    for (auto& v : row)
      if (!v.is_zero()) return false;
  return true;
}

RatMatrix RatMatrix::inverse() const {
  size_t n = rows();
  RatMatrix m = *this, inv = identity(n);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m(piv, col).is_zero()) ++piv;
    if (piv == n) throw KernelError("RatMatrix::inverse: singular matrix");
    std::swap(m.a[piv], m.a[col]);
    std::swap(inv.a[piv], inv.a[col]);
    Rat d = m(col, col).inv();
    for (size_t j = 0; j < n; ++j) {
      m(col, j) *= d;
      inv(col, j) *= d;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == col || m(i, col).is_zero()) continue;
      Rat f = m(i, col);
      for (size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

RatMatrix RatMatrix::commutator(const RatMatrix& x, const RatMatrix& y) {
  return x * y - y * x;
}

std::vector<Expr> solve_linear_expr(std::vector<std::vector<Expr>> A,
                                    std::vector<Expr> b) {
  size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col].is_zero()) ++piv;
    if (piv == n) throw KernelError("solve_linear_expr: singular system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    Expr d = A[col][col];
    for (size_t j = col; j < n; ++j) A[col][j] = A[col][j] / d;
    b[col] = b[col] / d;
    for (size_t i = 0; i < n; ++i) {
      if (i == col || A[i][col].is_zero()) continue;
      Expr f = A[i][col];
      for (size_t j = col; j < n; ++j) A[i][j] -= f * A[col][j];
      b[i] -= f * b[col];
    }
  }
  return b;
}

bool solve_linear_rat(std::vector<std::vector<Rat>> A, std::vector<Rat> b,
                      std::vector<Rat>& x, bool* underdetermined) {
  size_t rows = A.size();
  size_t cols = rows ? A[0].size() : 0;
  std::vector<int> pivot_col_of_row(rows, -1);
  std::vector<bool> col_has_pivot(cols, false);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && A[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    std::swap(b[piv], b[r]);
    Rat d = A[r][c].inv();
    for (size_t j = c; j < cols; ++j) A[r][j] *= d;
    b[r] *= d;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c].is_zero()) continue;
      Rat f = A[i][c];
      for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
      b[i] -= f * b[r];
    }
    pivot_col_of_row[r] = (int)c;
    col_has_pivot[c] = true;
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) return false;
  x.assign(cols, Rat(0));
  bool under = false;
  for (size_t c = 0; c < cols; ++c)
    if (!col_has_pivot[c]) under = true;
  for (size_t i = 0; i < r; ++i) x[pivot_col_of_row[i]] = b[i];
  if (underdetermined) *underdetermined = under;
  return true;
}

}  // namespace gfm
