#pragma once

#include <optional>
#include <string>

#include "fqgen/algebra.hpp"
#include "fqgen/poly.hpp"

namespace fqgen {

struct CountResult {
  BigInt value;
  std::string formula_tag;
};

// F(u, v) = prod_{i=1..v} (1 - u^{-i}); F(u, 0) = 1.
BigRat F_ratio(const BigInt& u, u32 v);

BigInt gl_order(u32 n, const BigInt& t);   // |GL_n(F_t)|
BigInt pgl_order(u32 n, const BigInt& t);  // |GL_n(F_t)| / (t - 1)

CountResult count_units(u32 n, u32 m, u64 q);     // |GL_n(q^m)| inside M_n(q^m)
CountResult count_nilpotents(u32 n, u64 t);       // t^{n^2 - n}
CountResult count_charpoly(const Poly& f);        // matrices with characteristic poly f
CountResult count_rank(u32 n, u64 t, u32 alpha);  // n x n matrices over F_t of rank alpha
CountResult nu_q(u64 q, u32 x);                   // monic irreducibles of degree x over F_q

// Whole-algebra counts read off the decomposition.
BigInt algebra_units(const AlgebraSpec& a);       // prod |GL_{n_i}(t_i)| * q^{dim J}
BigInt algebra_nilpotents(const AlgebraSpec& a);  // prod t_i^{n_i^2 - n_i} * q^{dim J}

u32 omega(u64 r);     // number of distinct prime divisors
int moebius(u32 n);   // Moebius function

// Exact generation probabilities of the small families:
//   n = 1        -> P(GF(q, m), 1) = m nu_q(m) q^{-m}
//   n = 2, m = 1 -> P(M_2(q), 2) = (q - 1)(q^2 - 1) q^{-3}
//   n = 3, m = 1 -> P(M_3(q), 2) = (q^2 - 1)^2 (q^3 - 1) q^{-7}
BigRat exact_P_small(u32 n, u32 m, u64 q);

// P(GF(q, m), l): probability that l uniform field elements generate it,
// q^{-ml} sum_{d | m} mu(m/d) q^{dl}.
BigRat P_field_l(u32 m, u64 q, u32 l);

// S = M_n(q^m): the power S^alpha is l-generated iff
// alpha <= q^{l m n^2} P(S, l) / (m |PGL_n(q^m)|).
// Supported wherever P(S, l) has an exact form (n = 1 any l; n in {2,3} with
// m = 1, l = 2); other shapes are rejected.
bool kmp_power_criterion(u32 n, u32 m, u64 q, const BigInt& alpha, u32 l);

struct ZetaValue {
  std::optional<BigRat> exact;  // set when every occurring exponent is integral
  HighFloat approx;             // always filled
  HighFloat err;                // bound on |approx - true value|
};

// sum_i mult_i * q^{-e_i}: exact when every e_i is an integer, bounded
// high-precision float otherwise.  Shared by the zeta evaluators.
ZetaValue sum_negative_q_powers(u64 q, const std::vector<BigRat>& exponents,
                                const std::vector<u32>& multiplicity);

// Subalgebra zeta of M_n(q^m): sum of index^{-eps} over the standard
// representative classes (block-triangular, inner-field, subfield kinds).
ZetaValue zeta_simple(u32 n, u32 m, u64 q, const BigRat& eps);

// Same sum over the representative classes of a decomposed algebra (one term
// per factor-local class, one per merged factor pair, one per radical-quotient
// class).  Defined with the subalgebra enumeration.
ZetaValue zeta_general(const AlgebraSpec& a, const BigRat& eps);

// Leading term delta(A) * m(A)^{-eps} with delta = 1 if n = 2 and 2 otherwise;
// simple algebras with n > 1 only.
ZetaValue zeta_leading(const AlgebraSpec& a, const BigRat& eps);

// Two-sided enclosure of phi(1/2) = lim_v F(2, v) ~ 0.2888; strict comparisons
// against phi(1/2) must use the safe side of the enclosure.
struct Enclosure {
  BigRat lo, hi;
};
const Enclosure& phi_half();

}  // namespace fqgen
