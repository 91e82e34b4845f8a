#include "fqgen/linalg.hpp"

#include <stdexcept>

namespace fqgen {

Mat mat_identity(const FieldPtr& F, u32 n) {
  Mat m(F, n, n);
  for (u32 i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  const auto& F = x.F;
  Mat r(F, x.rows, y.cols);
  for (u32 i = 0; i < x.rows; ++i)
    for (u32 k = 0; k < x.cols; ++k) {
      const u32 v = x.at(i, k);
      if (v == 0) continue;
      for (u32 j = 0; j < y.cols; ++j) {
        const u32 w = y.at(k, j);
        if (w == 0) continue;
        r.at(i, j) = F->add(r.at(i, j), F->mul(v, w));
      }
    }
  return r;
}

Mat mat_add(const Mat& x, const Mat& y) {
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->add(x.a[i], y.a[i]);
  return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->sub(x.a[i], y.a[i]);
  return r;
}

Mat mat_scale(const Mat& x, u32 s) {
  Mat r = x;
  for (u32& v : r.a) v = x.F->mul(v, s);
  return r;
}

Mat mat_transpose(const Mat& x) {
  Mat r(x.F, x.cols, x.rows);
  for (u32 i = 0; i < x.rows; ++i)
    for (u32 j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

Mat mat_pow(const Mat& x, u64 e) {
  Mat r = mat_identity(x.F, x.rows);
  Mat sq = x;
  while (e) {
    if (e & 1) r = mat_mul(r, sq);
    sq = mat_mul(sq, sq);
    e >>= 1;
  }
  return r;
}

std::vector<u32> rref(Mat& m) {
  const auto& F = m.F;
  std::vector<u32> pivots;
  u32 row = 0;
  for (u32 col = 0; col < m.cols && row < m.rows; ++col) {
    u32 pr = row;
    while (pr < m.rows && m.at(pr, col) == 0) ++pr;
    if (pr == m.rows) continue;
    if (pr != row)
      for (u32 j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(row, j));
    const u32 piv_inv = F->inv(m.at(row, col));
    if (piv_inv != 1)
      for (u32 j = 0; j < m.cols; ++j) m.at(row, j) = F->mul(m.at(row, j), piv_inv);
    for (u32 r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      const u32 f = m.at(r, col);
      if (f == 0) continue;
      for (u32 j = 0; j < m.cols; ++j) m.at(r, j) = F->sub(m.at(r, j), F->mul(f, m.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

u32 rank(const Mat& m) {
  Mat c = m;
  return static_cast<u32>(rref(c).size());
}

std::vector<std::vector<u32>> kernel_basis(const Mat& m) {
  Mat r = m;
  const std::vector<u32> pivots = rref(r);
  std::vector<i64> pivot_row(m.cols, -1);
  for (size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<i64>(i);
  std::vector<std::vector<u32>> basis;
  for (u32 c = 0; c < m.cols; ++c) {
    if (pivot_row[c] >= 0) continue;
    std::vector<u32> v(m.cols, 0);
    v[c] = 1;
    for (u32 cc = 0; cc < m.cols; ++cc)
      if (pivot_row[cc] >= 0) v[cc] = m.F->neg(r.at(static_cast<u32>(pivot_row[cc]), c));
    basis.push_back(std::move(v));
  }
  return basis;
}

bool is_invertible(const Mat& m) { return m.rows == m.cols && rank(m) == m.rows; }

Mat mat_inverse(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
  const u32 n = m.rows;
  Mat aug(m.F, n, 2 * n);
  for (u32 i = 0; i < n; ++i) {
    for (u32 j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) throw std::domain_error("matrix is singular");
  Mat r(m.F, n, n);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
  return r;
}

Poly charpoly(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("characteristic polynomial of non-square matrix");
  const auto& F = m.F;
  const u32 n = m.rows;
  if (n == 0) return poly_const(F, 1);
  Mat h = m;
  // Similarity reduction to upper Hessenberg form by paired row/column
  // eliminations (exact; pivoting by row/column swaps).
  for (u32 j = 0; j + 2 < n; ++j) {
    u32 piv = j + 1;
    while (piv < n && h.at(piv, j) == 0) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      for (u32 c = 0; c < n; ++c) std::swap(h.at(piv, c), h.at(j + 1, c));
      for (u32 r = 0; r < n; ++r) std::swap(h.at(r, piv), h.at(r, j + 1));
    }
    const u32 inv = F->inv(h.at(j + 1, j));
    for (u32 r = j + 2; r < n; ++r) {
      const u32 f = F->mul(h.at(r, j), inv);
      if (f == 0) continue;
      for (u32 c = 0; c < n; ++c) h.at(r, c) = F->sub(h.at(r, c), F->mul(f, h.at(j + 1, c)));
      for (u32 rr = 0; rr < n; ++rr) h.at(rr, j + 1) = F->add(h.at(rr, j + 1), F->mul(f, h.at(rr, r)));
    }
  }
  // p_k = det(xI_k - H_k) by expansion along the last column:
  // p_k = (x - h[k-1][k-1]) p_{k-1}
  //       - sum_{i=1}^{k-1} h[k-1-i][k-1] (prod_{j=k-i}^{k-1} h[j][j-1]) p_{k-1-i}
  std::vector<Poly> p(n + 1, poly_zero(F));
  p[0] = poly_const(F, 1);
  for (u32 k = 1; k <= n; ++k) {
    Poly xm{F, {F->neg(h.at(k - 1, k - 1)), 1}};
    Poly acc = poly_mul(xm, p[k - 1]);
    u32 subdiag = 1;
    for (u32 i = 1; i < k; ++i) {
      subdiag = F->mul(subdiag, h.at(k - i, k - i - 1));
      if (subdiag == 0) break;
      const u32 coeff = F->mul(h.at(k - 1 - i, k - 1), subdiag);
      if (coeff == 0) continue;
      acc = poly_sub(acc, poly_scale(p[k - 1 - i], coeff));
    }
    p[k] = std::move(acc);
  }
  return p[n];
}

u32 det(const Mat& m) {
  // det = (-1)^n * charpoly(0)
  const Poly p = charpoly(m);
  const u32 c0 = p.is_zero() ? 0 : poly_eval(p, 0);
  return (m.rows % 2 == 0) ? c0 : m.F->neg(c0);
}

bool is_nilpotent_mat(const Mat& m) {
  const Poly p = charpoly(m);
  // nilpotent iff charpoly == x^n
  for (u32 i = 0; i < m.rows; ++i)
    if (i < p.c.size() && p.c[i] != 0) return false;
  return true;
}

}  // namespace fqgen
