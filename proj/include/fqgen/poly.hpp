#pragma once

#include <vector>

#include "fqgen/common.hpp"
#include "fqgen/gfield.hpp"

namespace fqgen {

// Dense univariate polynomial over a finite field, little-endian coefficient
// codes, normalized (no trailing zeros; the zero polynomial has c empty).
struct Poly {
  FieldPtr F;
  std::vector<u32> c;

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  bool monic() const { return !c.empty() && c.back() == 1; }
  u32 lead() const { return c.back(); }
  bool operator==(const Poly& o) const { return c == o.c; }
};

Poly poly_zero(const FieldPtr& F);
Poly poly_const(const FieldPtr& F, u32 a);
Poly poly_x(const FieldPtr& F);
Poly poly_make(const FieldPtr& F, std::vector<u32> coeffs);  // normalizes

// Integer encoding sum(c_i |F|^i) of the full coefficient string; the
// canonical total order on polynomials is by this value.
u64 poly_encode(const Poly& f);
Poly poly_decode(const FieldPtr& F, u64 code, int max_deg = -1);

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, u32 s);
Poly poly_mul(const Poly& a, const Poly& b);
// Division with remainder; b != 0 (any leading coefficient).
void poly_divrem(const Poly& a, const Poly& b, Poly& quo, Poly& rem);
Poly poly_rem(const Poly& a, const Poly& b);
Poly poly_quo(const Poly& a, const Poly& b);
Poly poly_monic(const Poly& a);
Poly poly_gcd(const Poly& a, const Poly& b);  // monic (or zero)
Poly poly_derivative(const Poly& a);
u32 poly_eval(const Poly& a, u32 x);
// a^e mod m, exponent arbitrary precision (needed for |F|^d - 1 exponents).
Poly poly_powmod(const Poly& a, const BigInt& e, const Poly& m);

bool is_irreducible(const Poly& f);  // monic, deg >= 1

// Least (by encoding) monic irreducible of degree d over F.
Poly least_irreducible(const FieldPtr& F, u32 d);

// Monic irreducible factors with multiplicities, sorted by (degree,
// encoding).  Deterministic: the equal-degree splitting stage draws its
// randomness from a stream seeded by a hash of (|F|, coefficients), so the
// same input always factors along the same path.
std::vector<std::pair<Poly, u32>> factorize(const Poly& f);

}  // namespace fqgen
