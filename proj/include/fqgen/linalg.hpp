#pragma once

#include <vector>

#include "fqgen/gfield.hpp"
#include "fqgen/poly.hpp"

namespace fqgen {

// Dense row-major matrix of field-element codes.
struct Mat {
  FieldPtr F;
  u32 rows = 0, cols = 0;
  std::vector<u32> a;

  Mat() = default;
  Mat(FieldPtr f, u32 r, u32 c) : F(std::move(f)), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  u32& at(u32 r, u32 c) { return a[static_cast<size_t>(r) * cols + c]; }
  u32 at(u32 r, u32 c) const { return a[static_cast<size_t>(r) * cols + c]; }
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

Mat mat_identity(const FieldPtr& F, u32 n);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_scale(const Mat& x, u32 s);
Mat mat_transpose(const Mat& x);
Mat mat_pow(const Mat& x, u64 e);

// In-place reduced row echelon form.  Returns the pivot column indices;
// the rank is their count.  Fully reduced with unit pivots, so the result
// is the canonical form of the row space.
std::vector<u32> rref(Mat& m);
u32 rank(const Mat& m);
// Basis of the right kernel {v : m v = 0}, deterministic (free columns in
// increasing order, pivot coordinates filled from the RREF).
std::vector<std::vector<u32>> kernel_basis(const Mat& m);

bool is_invertible(const Mat& m);
Mat mat_inverse(const Mat& m);  // throws std::domain_error if singular

// Characteristic polynomial det(xI - m), monic of degree n, computed by
// similarity reduction to upper Hessenberg form followed by the standard
// last-column recurrence.  Exact over any coefficient field.
Poly charpoly(const Mat& m);
u32 det(const Mat& m);
bool is_nilpotent_mat(const Mat& m);

}  // namespace fqgen
