#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fqgen {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Exact integer / rational arithmetic for all counts and probabilities.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
// High-precision float for values that have no exact rational form
// (zeta at non-integral exponents, log-based invariants).  50 decimal
// digits leaves a wide margin over the >= 30 the interfaces promise.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

// A computation declined because it would exceed its enumeration or
// sampling budget.  Carries whatever partial information was cheap.
struct too_large_error : std::runtime_error {
  explicit too_large_error(const std::string& what) : std::runtime_error(what) {}
};

// A Monte Carlo decision procedure could not separate the hypothesis
// from its boundary at the requested confidence.  Carries the straddling
// interval and the threshold when they are available.
struct indeterminate_error : std::runtime_error {
  explicit indeterminate_error(const std::string& what) : std::runtime_error(what) {}
  indeterminate_error(const std::string& what, double lo, double hi, double thr, u64 n)
      : std::runtime_error(what), ci_lo(lo), ci_hi(hi), threshold(thr), samples(n) {}
  double ci_lo = 0, ci_hi = 0, threshold = 0;
  u64 samples = 0;
};

// A rejection sampler whose predicted acceptance rate is below the
// configured floor refuses to run instead of silently spinning.
struct acceptance_too_low_error : std::runtime_error {
  explicit acceptance_too_low_error(const std::string& what, double predicted)
      : std::runtime_error(what), predicted_acceptance(predicted) {}
  double predicted_acceptance;
};

inline BigInt big_pow(BigInt base, u64 e) {
  BigInt r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// q^e for field-sized q: the ubiquitous case.
inline BigInt qpow(u64 q, u64 e) { return big_pow(BigInt(q), e); }

}  // namespace fqgen
