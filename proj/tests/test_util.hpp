#pragma once

#include "fqgen/linalg.hpp"
#include "fqgen/rng.hpp"

namespace fqgen::testutil {

inline u32 random_code(const FieldPtr& F, RandomStream& rng) {
  return static_cast<u32>(rng.below(F->size()));
}

inline u32 random_nonzero(const FieldPtr& F, RandomStream& rng) {
  for (;;) {
    const u32 x = random_code(F, rng);
    if (x) return x;
  }
}

inline Mat random_mat(const FieldPtr& F, u32 r, u32 c, RandomStream& rng) {
  Mat m(F, r, c);
  for (u32 i = 0; i < r; ++i)
    for (u32 j = 0; j < c; ++j) m.at(i, j) = random_code(F, rng);
  return m;
}

inline Mat random_invertible(const FieldPtr& F, u32 n, RandomStream& rng) {
  for (;;) {
    Mat m = random_mat(F, n, n, rng);
    if (is_invertible(m)) return m;
  }
}

// Characteristic polynomial by Laplace expansion of det(xI - M) over the
// polynomial ring: an independent (slow) oracle for the Hessenberg path.
inline Poly charpoly_laplace(const Mat& m) {
  const auto& F = m.F;
  const u32 n = m.rows;
  std::vector<Poly> entries(static_cast<size_t>(n) * n, poly_zero(F));
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) {
      Poly e = poly_const(F, F->neg(m.at(i, j)));
      if (i == j) e = poly_add(e, poly_x(F));
      entries[static_cast<size_t>(i) * n + j] = std::move(e);
    }
  // recursive expansion along the first row with column masks
  std::vector<u32> cols(n);
  for (u32 j = 0; j < n; ++j) cols[j] = j;
  struct Rec {
    const std::vector<Poly>& e;
    u32 n;
    const FieldPtr& F;
    Poly run(u32 row, std::vector<u32> cols) {
      if (cols.empty()) return poly_const(F, 1);
      Poly acc = poly_zero(F);
      for (size_t k = 0; k < cols.size(); ++k) {
        const Poly& cell = e[static_cast<size_t>(row) * n + cols[k]];
        if (cell.is_zero()) continue;
        std::vector<u32> rest;
        for (size_t t = 0; t < cols.size(); ++t)
          if (t != k) rest.push_back(cols[t]);
        Poly sub = run(row + 1, std::move(rest));
        Poly term = poly_mul(cell, sub);
        if (k % 2)
          acc = poly_sub(acc, term);
        else
          acc = poly_add(acc, term);
      }
      return acc;
    }
  } rec{entries, n, F};
  return rec.run(0, cols);
}

}  // namespace fqgen::testutil
