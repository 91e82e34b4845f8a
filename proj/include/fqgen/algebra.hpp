#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqgen/linalg.hpp"

namespace fqgen {

// Coordinate vector over the scalar field, length = algebra dimension.
using Vec = std::vector<u32>;

// One simple factor M_n(F_{q^m}) of the semisimple quotient, given by an
// explicit Wedderburn complement inside the algebra: image vectors of the
// basis e_{rc} (x) beta_s (matrix units over the power basis of F_{q^m}),
// indexed (r*n + c)*m + s, plus the factor's unity idempotent.
struct SimpleFactor {
  u32 n = 1, m = 1;
  FieldTower tower;          // tower.fq is the scalar field, tower.fqm the factor field
  std::vector<Vec> basis;    // n*n*m vectors in algebra coordinates
  Vec unity;
};

struct Decomposition {
  std::vector<SimpleFactor> factors;
  std::vector<Vec> radical;                      // basis of J
  std::vector<std::vector<Vec>> radical_powers;  // [k] = basis of J^(k+1); [0] == radical
};

// A finite associative unital algebra over F_q, presented by structure
// constants on a distinguished basis b_0..b_{dim-1}.  Elements are coordinate
// vectors (or their integer codes, little-endian radix q).  Every instance
// carries its Wedderburn data: the constructors below produce it, and
// validate() can re-check all of it from scratch.
struct AlgebraSpec {
  FieldPtr k;  // scalar field F_q
  u32 dim = 0;
  Vec one;
  std::string name;
  std::optional<Decomposition> dec;
  // prod[i*dim + j] lists the nonzero structure constants of b_i * b_j as
  // (l, c) pairs: b_i b_j = sum c * b_l.
  std::vector<std::vector<std::pair<u32, u32>>> prod;

  u64 size() const;  // |A| = q^dim (guarded; throws if it exceeds 2^63)

  Vec zero() const { return Vec(dim, 0); }
  Vec basis_vec(u32 i) const;
  Vec add(const Vec& x, const Vec& y) const;
  Vec sub(const Vec& x, const Vec& y) const;
  Vec scale(const Vec& x, u32 s) const;
  Vec mul(const Vec& x, const Vec& y) const;
  bool is_zero(const Vec& x) const;

  u64 encode(const Vec& x) const;
  Vec decode(u64 code) const;

  Mat left_mult_matrix(const Vec& x) const;
  Mat right_mult_matrix(const Vec& x) const;
  bool element_is_unit(const Vec& x) const;
  bool element_is_nilpotent(const Vec& x) const;
  Vec element_inverse(const Vec& x) const;  // throws std::domain_error for non-units

  // Full structural audit: unity, associativity on all basis triples, and
  // (when present) the Wedderburn data: factor subalgebras multiply like
  // matrix algebras, orthogonal idempotents summing to 1 mod J, the radical
  // is a nilpotent ideal, and radical_powers are exactly the powers of J.
  // Throws std::logic_error with a description on the first failure.
  void validate() const;
};

// --- constructors ---------------------------------------------------------

AlgebraSpec simple_algebra(u32 n, u32 m, u64 p, u32 e);    // M_n(F_{q^m}), q = p^e
AlgebraSpec simple_algebra(u32 n, u32 m, const FieldTower& base_tower);
AlgebraSpec product_algebra(const std::vector<AlgebraSpec>& parts);
// Upper block-triangular matrices over F_{q^m} with diagonal block sizes
// `alphas` (a composition of n).
AlgebraSpec parabolic_algebra(const std::vector<u32>& alphas, u32 m, u64 p, u32 e);
// F_q[x]/(x^j)
AlgebraSpec truncated_poly_algebra(u64 p, u32 e, u32 j);
// S (+) V with V^2 = 0: left/right actions of the basis of S on V given by
// matrices over the scalar field.  S must be semisimple (its radical empty);
// the action matrices must satisfy the bimodule axioms (checked).
AlgebraSpec trivial_extension(const AlgebraSpec& s, u32 vdim, const std::vector<Mat>& left_action,
                              const std::vector<Mat>& right_action);

// --- simple-spec matrix view ----------------------------------------------

// For specs built by simple_algebra (basis = matrix units): reinterpret
// coordinate vectors as n x n matrices over F_{q^m} and back.
Mat simple_to_matrix(const AlgebraSpec& a, const Vec& x);
Vec simple_from_matrix(const AlgebraSpec& a, const Mat& m);
bool is_plain_simple(const AlgebraSpec& a);

// --- subspaces and subalgebras --------------------------------------------

// Canonical (RREF) basis of the span; rows sorted by pivot.
std::vector<Vec> span_rref(const FieldPtr& F, const std::vector<Vec>& vecs);
bool span_contains(const FieldPtr& F, const std::vector<Vec>& rref_rows, const Vec& v);
// Residue of v modulo the span (pivot coordinates eliminated).
Vec span_reduce(const FieldPtr& F, const std::vector<Vec>& rref_rows, const Vec& v);
std::vector<Vec> span_sum(const FieldPtr& F, const std::vector<Vec>& a, const std::vector<Vec>& b);
std::vector<Vec> span_intersect(const FieldPtr& F, const std::vector<Vec>& a, const std::vector<Vec>& b);

// Largest two-sided ideal of A contained in the subalgebra spanned by
// `sub_basis` (computed as a decreasing fixed point).  Canonical basis.
std::vector<Vec> core_ideal(const AlgebraSpec& a, const std::vector<Vec>& sub_basis);

// --- embeddings into a simple algebra --------------------------------------

// Image basis of M_{n/a}(F_{q^(ma)}) inside M_n(F_{q^m}), a | n: the target
// field is presented as F_{q^m}[x]/(g_a) with g_a the least irreducible of
// degree a, x acting by its companion matrix on each a x a block.
std::vector<Vec> embed_inner(const AlgebraSpec& a, u32 va);
// Image basis of M_n(F_{q^(m/b)}) inside M_n(F_{q^m}), b | m.
std::vector<Vec> embed_subfield(const AlgebraSpec& a, u32 b);

}  // namespace fqgen
