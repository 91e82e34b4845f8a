#pragma once

#include <map>
#include <string>
#include <vector>

#include "fqgen/algebra.hpp"
#include "fqgen/counting.hpp"

namespace fqgen {

// One conjugacy class of maximal subalgebras.
//
// Simple algebras M_n(F_{q^m}) have three kinds:
//   S1(l): block upper-triangular P_{l,n-l}(q^m), 1 <= l < n
//   S2(a): inner field extension M_{n/a}(q^{ma}), a a prime divisor of n
//   S3(b): subfield algebra M_n(q^{m/b}), b a prime divisor of m
// Decomposed algebras have:
//   T1(j, inner): a factor-local maximal subalgebra, other factors + J intact
//   T2(j1, j2, k): a Galois-twisted diagonal merging two isomorphic factors
//   T3(ordinal):   S (+) H for H a maximal sub-bimodule of J containing J^2
struct SubalgebraClass {
  enum class Kind { S1, S2, S3, T1, T2, T3 };
  Kind kind = Kind::S1;
  u32 factor = 0;                // T1: owning factor; T2: first factor
  u32 factor2 = 0;               // T2: second factor
  Kind inner_kind = Kind::S1;    // T1: kind of the factor-local class
  u32 param = 0;                 // S1: l; S2: a; S3: b; T1: inner param;
                                 // T2: Galois twist exponent; T3: ordinal
  BigInt index;                  // |A| / |B|, a power of q
  BigInt class_size;             // conjugate count; 0 = not yet computed
  std::vector<Vec> rep_basis;    // canonical basis of the representative
  std::string label;
};

// Conjugacy-class representatives of all maximal subalgebras.  Requires the
// decomposition.  T3 classes arrive with class_size already filled (their
// enumeration is an orbit walk anyway); other kinds leave it to class_size().
std::vector<SubalgebraClass> standard_reps(const AlgebraSpec& a);

// Number of conjugates of rep's class: closed formula for S1 with
// l in {1, n-1}, for S3, for T1 (factor-local recursion) and T2 (|PGL|);
// conjugation-orbit enumeration otherwise (guarded by |A^x| <= 2^20).
BigInt class_size(const AlgebraSpec& a, const SubalgebraClass& rep);

struct MMin {
  BigInt value;
  std::vector<SubalgebraClass> witnesses;
};
// Minimal index m(A) of a maximal subalgebra of a simple algebra, with the
// classes attaining it.  Undefined (throws) for A = k.
MMin m_min(const AlgebraSpec& a);

// kappa(A) = xi q^{-m(n-1)} (q^{mn}-1)/(q^m-1), xi = 2 for n > 2 else 1;
// simple algebras with n > 1.  Always lies in the open interval (1, 4).
BigRat kappa(const AlgebraSpec& a);

// index -> total number of maximal subalgebras of that index.
std::map<BigInt, BigInt> m_n_counts(const AlgebraSpec& a);

// Explicit canonical bases of every maximal subalgebra (all conjugates of all
// classes).  Desk scale only: walks full conjugation orbits.
std::vector<std::vector<Vec>> all_maximal_subalgebras(const AlgebraSpec& a);

struct BonferroniBounds {
  BigRat lower, upper;
};
// Bounds on 1 - P(A, d): union bound over maximal subalgebras, and the
// inclusion-exclusion refinement subtracting pairwise intersections.
BonferroniBounds bonferroni(const AlgebraSpec& a, u32 d);

// Conjugation generators of A^x: factor transvections and dilations plus the
// translations 1 + r over the radical (the latter enumerated exhaustively,
// guarded).  Conjugating by these reaches every A^x-orbit.
std::vector<Vec> unit_conjugation_generators(const AlgebraSpec& a);

// Orbit of a subalgebra (given by any spanning set) under conjugation by A^x.
std::vector<std::vector<Vec>> subalgebra_orbit(const AlgebraSpec& a, const std::vector<Vec>& basis);

}  // namespace fqgen
