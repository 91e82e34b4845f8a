#pragma once

#include <vector>

#include "fqgen/algebra.hpp"
#include "fqgen/poly.hpp"
#include "fqgen/rng.hpp"

namespace fqgen {

// Rejection samplers refuse to run when the predicted acceptance rate falls
// below this floor, throwing acceptance_too_low_error instead of spinning.
constexpr double kAcceptanceFloor = 0x1.0p-24;

// --- algebra element samplers ------------------------------------------------

// Exactly uniform over all q^dim coordinate vectors: one field digit per
// coordinate, rejection-free.
Vec uniform_element(const AlgebraSpec& a, RandomStream& rs);

// Uniform over the unit group A^x.  With a decomposition, units decompose as
// (invertible matrix per factor) + (arbitrary radical part), so the sampler
// draws factorwise invertible matrices by rejection and a uniform radical
// summand; without one it rejects on element_is_unit.  `tries`, when given,
// accumulates the number of candidate draws (accepted candidates included),
// which is what empirical-acceptance checks consume.
Vec uniform_unit(const AlgebraSpec& a, RandomStream& rs, u64* tries = nullptr);

// Uniform over the nilpotent elements: nilpotent matrix per factor plus an
// arbitrary radical summand, or rejection on element_is_nilpotent without a
// decomposition.  The decomposed path predicts acceptance prod_i t_i^{-n_i}
// and enforces the floor.
Vec uniform_nilpotent(const AlgebraSpec& a, RandomStream& rs, u64* tries = nullptr);

// --- matrix samplers -----------------------------------------------------------

Mat uniform_matrix(const FieldPtr& F, u32 rows, u32 cols, RandomStream& rs);
// Rejection on invertibility; acceptance F(t, n) = prod_{i<=n} (1 - t^{-i}),
// bounded below by phi(1/2) ~ 0.2888, so no floor is needed.
Mat uniform_invertible(const FieldPtr& F, u32 n, RandomStream& rs, u64* tries = nullptr);
// Rejection on nilpotency; acceptance t^{-n} (floor enforced).
Mat uniform_nilpotent_matrix(const FieldPtr& F, u32 n, RandomStream& rs, u64* tries = nullptr);

// Uniform over the matrices with characteristic polynomial f (monic; the
// matrix size is deg f, the entries live in f's coefficient field) by
// rejection on charpoly equality.  Predicted acceptance is the exact count
// divided by t^{n^2}; the floor is enforced before any drawing.
Mat uniform_charpoly(const Poly& f, RandomStream& rs, u64* tries = nullptr);

// Exactly uniform over the n x n matrices of rank alpha: draw U uniform
// among full-column-rank n x alpha matrices and V uniform among
// full-row-rank alpha x n matrices (both by rejection), return U V.  Every
// rank-alpha matrix has exactly |GL_alpha(t)| such factorizations, so the
// product is uniform.
Mat uniform_rank(const FieldPtr& F, u32 n, u32 alpha, RandomStream& rs, u64* tries = nullptr);

// --- test statistics ------------------------------------------------------------

// p-value of Pearson's chi-square statistic of observed counts against
// expected counts (degrees of freedom: bucket count minus one).
double chi_square_p(const std::vector<u64>& observed, const std::vector<double>& expected);

}  // namespace fqgen
