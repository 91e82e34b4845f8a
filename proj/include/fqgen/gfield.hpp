#pragma once

#include <memory>
#include <vector>

#include "fqgen/common.hpp"

namespace fqgen {

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

// A finite field built as an explicit tower of extensions of a prime field.
// Elements are integer codes in [0, size()): the little-endian radix-|base|
// digit string of the coordinate vector in the power basis of the defining
// polynomial.  Codes, not symbols, are the canonical representation; every
// operation is a pure function on codes, so identical towers built twice
// behave identically byte for byte.
//
// Degree-1 extensions are defined by g = x, which makes their codes equal to
// the base field's codes (the layer is transparent).
class FiniteField : public std::enable_shared_from_this<FiniteField> {
 public:
  static FieldPtr make_prime(u64 p);
  // g given by its base-field coefficient codes, little-endian, monic
  // (g.back() == 1), irreducible over `base`.
  static FieldPtr make_extension(const FieldPtr& base, const std::vector<u32>& g);
  // Extension by the least irreducible monic polynomial of degree d, where
  // "least" means smallest integer encoding sum(c_i * |base|^i).
  static FieldPtr make_extension_least(const FieldPtr& base, u32 d);

  u64 size() const { return size_; }
  u64 characteristic() const { return p_; }
  u32 deg_over_base() const { return deg_; }
  u32 deg_over_prime() const { return deg_prime_; }
  const FieldPtr& base() const { return base_; }
  bool is_prime_field() const { return base_ == nullptr; }
  // Defining polynomial over base(); empty for a prime field.
  const std::vector<u32>& defining() const { return defining_; }

  u32 add(u32 a, u32 b) const;
  u32 neg(u32 a) const;
  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }
  u32 mul(u32 a, u32 b) const;
  u32 inv(u32 a) const;  // a != 0
  u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }
  u32 pow(u32 a, u64 e) const;
  u32 frobenius_p(u32 a, u32 j = 1) const;  // a^(p^j)

  // Least-code multiplicative generator (verified order p^k - 1).
  u32 generator() const;

  // Coordinate vector over base(), length deg_over_base().
  std::vector<u32> digits(u32 a) const;
  u32 from_digits(const std::vector<u32>& d) const;
  // Scalar embedding of a base-field code (identity on codes by design,
  // kept explicit for readability at call sites).
  u32 from_base(u32 a) const { return a; }

 private:
  FiniteField() = default;

  u64 p_ = 0, size_ = 0;
  u32 deg_ = 1, deg_prime_ = 1;
  FieldPtr base_;
  std::vector<u32> defining_;

  // exp/log acceleration for moderate sizes; slow schoolbook otherwise.
  bool tables_ = false;
  u64 gen_ = 0;
  std::vector<u32> exp_, log_;

  u32 mul_slow(u32 a, u32 b) const;
  u32 pow_slow(u32 a, u64 e) const;
  void build_tables();
};

// The standard three-level tower F_p <= F_q <= F_{q^m} with q = p^e.
// Transparent layers are collapsed: fq == fp when e == 1, fqm == fq when
// m == 1; codes agree in all cases.
struct FieldTower {
  u64 p = 0;
  u32 e = 1, m = 1;
  u64 q = 0;        // p^e
  FieldPtr fp, fq, fqm;

  // x^(q^j) for x in F_{q^m}.
  u32 frobenius(u32 x, u32 j = 1) const;

  // Digits of x in F_{q^m} over F_q, always length m.  Not the same as
  // fqm->digits when the top layer is collapsed (m == 1): there fqm == fq
  // and the member function would descend to F_p instead.
  std::vector<u32> digits(u32 x) const;
  u32 from_digits(const std::vector<u32>& d) const;
};

FieldTower make_tower(u64 p, u32 e, u32 m);

// Least d >= 1 with x^(q^d) == x, i.e. the degree over F_q of the minimal
// polynomial of x in F_{q^m}; divides m.
u32 min_poly_degree(const FieldTower& t, u32 x);

// F_q-basis (element codes in F_{q^m}) of the intermediate field F_{q^(m/b)}
// for b | m: computed as the fixed space of the b-th power of Frobenius.
std::vector<u32> subfield_basis(const FieldTower& t, u32 b);

bool is_prime_u64(u64 n);
std::vector<u64> prime_divisors(u64 n);

}  // namespace fqgen
