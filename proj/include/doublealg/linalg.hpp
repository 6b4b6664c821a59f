#pragma once

#include <optional>
#include <vector>

#include "doublealg/rational.hpp"

namespace doublealg {

using RVector = std::vector<Rational>;
using RMatrix = std::vector<RVector>;

inline RMatrix zeros(std::size_t rows, std::size_t cols) { return RMatrix(rows, RVector(cols, Rational(0))); }

inline RMatrix identity(std::size_t n) {
  RMatrix m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline std::size_t cols_of(const RMatrix& m) { return m.empty() ? 0 : m[0].size(); }

inline RMatrix transpose(const RMatrix& m) {
  RMatrix t = zeros(cols_of(m), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline RMatrix multiply(const RMatrix& a, const RMatrix& b) {
  if (cols_of(a) != b.size()) throw Error("matrix dimension mismatch");
  RMatrix c = zeros(a.size(), cols_of(b));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (is_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < cols_of(b); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline RVector apply(const RMatrix& a, const RVector& v) {
  if (cols_of(a) != v.size() && !(a.empty() && v.empty())) throw Error("matrix-vector dimension mismatch");
  RVector out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline Rational dot(const RVector& a, const RVector& b) {
  if (a.size() != b.size()) throw Error("dot: length mismatch");
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace detail {

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref(RMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t rows = m.size(), cols = cols_of(m), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(RMatrix m) { return detail::rref(m).size(); }

inline Rational determinant(RMatrix m) {
  const std::size_t n = m.size();
  if (cols_of(m) != n && n != 0) throw Error("determinant of non-square matrix");
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m[p][c])) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m[i][c])) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

inline std::optional<RMatrix> inverse(const RMatrix& m) {
  const std::size_t n = m.size();
  if (cols_of(m) != n && n != 0) throw Error("inverse of non-square matrix");
  RMatrix aug = zeros(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = detail::rref(aug);
  if (piv.size() < n || (n > 0 && piv[n - 1] >= n)) return std::nullopt;
  RMatrix inv = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

}  // namespace doublealg
