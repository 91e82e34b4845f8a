#include "fqgen/counting.hpp"

#include <stdexcept>

namespace fqgen {

namespace {

BigRat rat_pow_int(const BigInt& base, const BigInt& k) {
  // base^k for integer k (negative allowed), base > 0
  if (k >= 0) return BigRat(big_pow(base, k.convert_to<u64>()));
  return BigRat(1, big_pow(base, (-k).convert_to<u64>()));
}

HighFloat float_q_pow(u64 q, const BigRat& e) {
  // q^e for rational e
  const HighFloat qf(q);
  const HighFloat ef = static_cast<HighFloat>(BigRat(e).convert_to<HighFloat>());
  return exp(ef * log(qf));
}

}  // namespace

ZetaValue sum_negative_q_powers(u64 q, const std::vector<BigRat>& neg_exponents,
                                const std::vector<u32>& multiplicity) {
  // sum of mult_i * q^{-e_i}; exact path when every e_i is an integer
  ZetaValue z;
  bool all_integral = true;
  for (const auto& e : neg_exponents)
    if (boost::multiprecision::denominator(e) != 1) all_integral = false;
  HighFloat total = 0;
  u32 nterms = 0;
  for (size_t i = 0; i < neg_exponents.size(); ++i) {
    total += HighFloat(multiplicity[i]) * float_q_pow(q, -neg_exponents[i]);
    nterms += multiplicity[i];
  }
  z.approx = total;
  if (all_integral) {
    BigRat ex = 0;
    for (size_t i = 0; i < neg_exponents.size(); ++i)
      ex += BigRat(multiplicity[i]) *
            rat_pow_int(BigInt(q), -boost::multiprecision::numerator(neg_exponents[i]));
    z.exact = ex;
    z.err = 0;
  } else {
    // cpp_bin_float_50 carries ~50 significant digits; a blanket 10^-40
    // relative slack per accumulated term is a generous cover for the
    // exp/log round-off.
    z.err = total * HighFloat("1e-40") * HighFloat(nterms + 1);
  }
  return z;
}

namespace {

const SimpleFactor& require_simple(const AlgebraSpec& a) {
  if (!a.dec || a.dec->factors.size() != 1 || !a.dec->radical.empty() ||
      a.dec->factors[0].basis.size() != a.dim)
    throw std::invalid_argument("operation requires a simple algebra");
  return a.dec->factors[0];
}

}  // namespace

BigRat F_ratio(const BigInt& u, u32 v) {
  if (u < 1) throw std::invalid_argument("F(u,v) needs u >= 1");
  BigRat r = 1;
  BigInt upow = 1;
  for (u32 i = 1; i <= v; ++i) {
    upow *= u;
    r *= BigRat(upow - 1, upow);
  }
  return r;
}

BigInt gl_order(u32 n, const BigInt& t) {
  // prod_{i=0}^{n-1} (t^n - t^i)
  BigInt tn = big_pow(t, n);
  BigInt r = 1, ti = 1;
  for (u32 i = 0; i < n; ++i) {
    r *= tn - ti;
    ti *= t;
  }
  return r;
}

BigInt pgl_order(u32 n, const BigInt& t) { return gl_order(n, t) / (t - 1); }

CountResult count_units(u32 n, u32 m, u64 q) {
  return {gl_order(n, big_pow(BigInt(q), m)), "units: q^{mn^2} F(q^m, n)"};
}

CountResult count_nilpotents(u32 n, u64 t) {
  return {big_pow(BigInt(t), static_cast<u64>(n) * n - n), "nilpotents: t^{n^2-n}"};
}

CountResult count_charpoly(const Poly& f) {
  const u32 n = static_cast<u32>(f.deg());
  const BigInt t(f.F->size());
  const auto factors = factorize(f);
  BigRat r = BigRat(big_pow(t, static_cast<u64>(n) * n - n)) * F_ratio(t, n);
  for (const auto& [g, alpha] : factors) {
    const u32 d = static_cast<u32>(g.deg());
    r /= F_ratio(big_pow(t, d), alpha);
  }
  if (boost::multiprecision::denominator(r) != 1)
    throw std::logic_error("charpoly census did not reduce to an integer");
  return {boost::multiprecision::numerator(r), "charpoly census: t^{n^2-n} F(t,n) / prod F(t^{d_i}, a_i)"};
}

CountResult count_rank(u32 n, u64 t, u32 alpha) {
  if (alpha > n) throw std::invalid_argument("rank exceeds matrix size");
  const BigInt tb(t);
  const BigInt tn = big_pow(tb, n), ta = big_pow(tb, alpha);
  BigRat r = 1;
  BigInt ti = 1;
  for (u32 i = 0; i < alpha; ++i) {
    r *= BigRat((tn - ti) * (tn - ti), ta - ti);
    ti *= tb;
  }
  if (boost::multiprecision::denominator(r) != 1)
    throw std::logic_error("rank census did not reduce to an integer");
  return {boost::multiprecision::numerator(r), "rank census: prod (t^n - t^i)^2 / (t^a - t^i)"};
}

CountResult nu_q(u64 q, u32 x) {
  if (x == 0) throw std::invalid_argument("nu_q needs degree >= 1");
  BigInt s = 0;
  for (u32 d = 1; d <= x; ++d) {
    if (x % d) continue;
    s += BigInt(moebius(x / d)) * big_pow(BigInt(q), d);
  }
  if (s % x != 0) throw std::logic_error("irreducible census not divisible by degree");
  return {s / x, "irreducible census: (1/x) sum mu(d) q^{x/d}"};
}

BigInt algebra_units(const AlgebraSpec& a) {
  if (!a.dec) throw std::invalid_argument("unit count needs the decomposition");
  BigInt r = 1;
  for (const auto& f : a.dec->factors) r *= gl_order(f.n, BigInt(f.tower.fqm->size()));
  return r * big_pow(BigInt(a.k->size()), a.dec->radical.size());
}

BigInt algebra_nilpotents(const AlgebraSpec& a) {
  if (!a.dec) throw std::invalid_argument("nilpotent count needs the decomposition");
  BigInt r = 1;
  for (const auto& f : a.dec->factors)
    r *= big_pow(BigInt(f.tower.fqm->size()), static_cast<u64>(f.n) * f.n - f.n);
  return r * big_pow(BigInt(a.k->size()), a.dec->radical.size());
}

u32 omega(u64 r) { return static_cast<u32>(prime_divisors(r).size()); }

int moebius(u32 n) {
  if (n == 0) throw std::invalid_argument("moebius(0)");
  int sign = 1;
  for (u32 p = 2; static_cast<u64>(p) * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

BigRat exact_P_small(u32 n, u32 m, u64 q) {
  const BigInt qb(q);
  if (n == 1) {
    if (m == 0) throw std::invalid_argument("field extension degree must be >= 1");
    return BigRat(BigInt(m) * nu_q(q, m).value, big_pow(qb, m));
  }
  if (m != 1) throw std::invalid_argument("exact probability known only for m = 1 when n > 1");
  if (n == 2) return BigRat((qb - 1) * (qb * qb - 1), big_pow(qb, 3));
  if (n == 3) {
    const BigInt q2 = qb * qb, q3 = q2 * qb;
    return BigRat((q2 - 1) * (q2 - 1) * (q3 - 1), big_pow(qb, 7));
  }
  throw std::invalid_argument("no exact probability formula for n > 3");
}

BigRat P_field_l(u32 m, u64 q, u32 l) {
  if (m == 0 || l == 0) throw std::invalid_argument("P_field_l needs m, l >= 1");
  BigInt s = 0;
  for (u32 d = 1; d <= m; ++d) {
    if (m % d) continue;
    s += BigInt(moebius(m / d)) * big_pow(BigInt(q), static_cast<u64>(d) * l);
  }
  return BigRat(s, big_pow(BigInt(q), static_cast<u64>(m) * l));
}

bool kmp_power_criterion(u32 n, u32 m, u64 q, const BigInt& alpha, u32 l) {
  BigRat p_sl;
  if (n == 1)
    p_sl = P_field_l(m, q, l);
  else if ((n == 2 || n == 3) && m == 1 && l == 2)
    p_sl = exact_P_small(n, 1, q);
  else
    throw std::invalid_argument("no exact P(S, l) available for this shape");
  const BigInt qpow = big_pow(BigInt(q), static_cast<u64>(l) * m * n * n);
  const BigRat bound = BigRat(qpow) * p_sl / BigRat(BigInt(m) * pgl_order(n, big_pow(BigInt(q), m)));
  return BigRat(alpha) <= bound;
}

ZetaValue zeta_simple(u32 n, u32 m, u64 q, const BigRat& eps) {
  if (n == 0 || m == 0) throw std::invalid_argument("zeta needs n, m >= 1");
  std::vector<BigRat> ex;
  std::vector<u32> mult;
  const BigRat mn2 = BigRat(static_cast<u64>(m) * n * n);
  for (u32 l = 1; l < n; ++l) {
    ex.push_back(eps * BigRat(static_cast<u64>(m) * l * (n - l)));
    mult.push_back(1);
  }
  for (u64 a : prime_divisors(n)) {
    ex.push_back(eps * mn2 * BigRat(a - 1, a));
    mult.push_back(1);
  }
  for (u64 b : prime_divisors(m)) {
    ex.push_back(eps * mn2 * BigRat(b - 1, b));
    mult.push_back(1);
  }
  return sum_negative_q_powers(q, ex, mult);
}

ZetaValue zeta_leading(const AlgebraSpec& a, const BigRat& eps) {
  const SimpleFactor& f = require_simple(a);
  if (f.n <= 1) throw std::invalid_argument("leading term defined for n > 1");
  const u32 delta = (f.n == 2) ? 1 : 2;
  // minimal index: q^m for n = 2, q^{m(n-1)} otherwise
  const u64 e = (f.n == 2) ? f.tower.m : static_cast<u64>(f.tower.m) * (f.n - 1);
  return sum_negative_q_powers(f.tower.q, {eps * BigRat(e)}, {delta});
}

const Enclosure& phi_half() {
  static const Enclosure enc = [] {
    Enclosure e;
    e.hi = F_ratio(BigInt(2), 64);
    const BigInt two64 = big_pow(BigInt(2), 64);
    e.lo = e.hi * BigRat(two64 - 1, two64);
    return e;
  }();
  return enc;
}

}  // namespace fqgen
