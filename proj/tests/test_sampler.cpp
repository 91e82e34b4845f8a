#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "fqgen/closure.hpp"
#include "fqgen/counting.hpp"
#include "fqgen/sampler.hpp"

using namespace fqgen;

namespace {

// |phat - p| measured in binomial standard deviations
double sigmas(u64 hits, u64 trials, double p) {
  const double phat = static_cast<double>(hits) / static_cast<double>(trials);
  const double sd = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  return std::abs(phat - p) / sd;
}

u64 mat_code(const Mat& m) {
  u64 code = 0;
  const u64 q = m.F->size();
  for (size_t i = m.a.size(); i-- > 0;) code = code * q + m.a[i];
  return code;
}

double uniform_census_p(const std::map<u64, u64>& census, u64 support, u64 draws) {
  std::vector<u64> observed;
  for (const auto& [code, cnt] : census) observed.push_back(cnt);
  // absent buckets count as zero
  while (observed.size() < support) observed.push_back(0);
  const std::vector<double> expected(support,
                                     static_cast<double>(draws) / static_cast<double>(support));
  return chi_square_p(observed, expected);
}

// two-sample chi-square p-value: are two count vectors draws from one law?
double two_sample_p(const std::vector<u64>& a, const std::vector<u64>& b) {
  double na = 0, nb = 0;
  for (u64 x : a) na += static_cast<double>(x);
  for (u64 x : b) nb += static_cast<double>(x);
  double stat = 0;
  u32 dof = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double tot = static_cast<double>(a[i]) + static_cast<double>(b[i]);
    if (tot == 0) continue;
    ++dof;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    const double da = static_cast<double>(a[i]) - ea, db = static_cast<double>(b[i]) - eb;
    stat += da * da / ea + db * db / eb;
  }
  REQUIRE(dof >= 2);
  const boost::math::chi_squared dist(dof - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("counter-based stream: frozen output blocks") {
  // Philox4x64-10 with key (master_seed, stream_id); these blocks pin the
  // byte-exact output so seeds stay reproducible across releases.
  {
    RandomStream rs(0, 0);
    const u64 want[8] = {0x16554d9eca36314cull, 0xdb20fe9d672d0fdcull, 0xd7e772cee186176bull,
                         0x7e68b68aec7ba23bull, 0x02f4ba6408e4d89bull, 0x3dd62b0b9ca8c5b2ull,
                         0x1c8667a55d902e79ull, 0x907d7a052fd5b4dcull};
    for (u64 w : want) CHECK(rs.next_u64() == w);
  }
  {
    RandomStream rs(0xdeadbeefull, 0x12345678ull);
    const u64 want[8] = {0x6f983d00674b709full, 0x49a9b33ab59eb109ull, 0x2c97db7ff4030ca5ull,
                         0xf350115b2d463351ull, 0x3d1c495a41eeb326ull, 0xdcedb98424497b4eull,
                         0xacae59a90b703e83ull, 0x0d4e4aeb7df73661ull};
    for (u64 w : want) CHECK(rs.next_u64() == w);
  }
  {
    RandomStream rs(~0ull, ~0ull);
    const u64 want[8] = {0x44b7493d1acfc229ull, 0x6636af8e997921ddull, 0x3f73e132b5b3780eull,
                         0x605644dde03b01b1ull, 0x6d46cc0e71f0be7eull, 0x924ea1693f9a8bc0ull,
                         0xfdc35f0198c91181ull, 0xb4a311f17aa6568dull};
    for (u64 w : want) CHECK(rs.next_u64() == w);
  }
}

TEST_CASE("streams are deterministic and derivation separates shards") {
  const AlgebraSpec a = simple_algebra(2, 1, 2, 1);
  RandomStream r1 = RandomStream::derive(7, "elements", 0);
  RandomStream r2 = RandomStream::derive(7, "elements", 0);
  std::vector<u64> s1, s2;
  for (u32 i = 0; i < 64; ++i) {
    s1.push_back(a.encode(uniform_element(a, r1)));
    s2.push_back(a.encode(uniform_element(a, r2)));
  }
  CHECK(s1 == s2);

  RandomStream r3 = RandomStream::derive(7, "elements", 1);
  std::vector<u64> s3;
  for (u32 i = 0; i < 64; ++i) s3.push_back(a.encode(uniform_element(a, r3)));
  CHECK(s1 != s3);
  CHECK(RandomStream::derive(7, "elements", 0).stream_id !=
        RandomStream::derive(7, "units", 0).stream_id);

  // lag-1 parity agreement within each stream and across streams stays at 1/2
  RandomStream ra = RandomStream::derive(11, "corr", 0);
  RandomStream rb = RandomStream::derive(11, "corr", 1);
  u64 lag = 0, cross = 0;
  const u32 n = 8192;
  u64 prev = ra.next_u64();
  for (u32 i = 0; i < n; ++i) {
    const u64 x = ra.next_u64(), y = rb.next_u64();
    lag += (x ^ prev) & 1;
    cross += (x ^ y) & 1;
    prev = x;
  }
  CHECK(sigmas(lag, n, 0.5) < 4);
  CHECK(sigmas(cross, n, 0.5) < 4);
}

TEST_CASE("uniform elements: field censuses and generation frequency") {
  const AlgebraSpec f4 = simple_algebra(1, 2, 2, 1);
  RandomStream rs(1, 0);
  std::map<u64, u64> census;
  const u32 draws = 10000;
  const MulTable t = MulTable::compile(f4);
  u64 full = 0;
  for (u32 i = 0; i < draws; ++i) {
    const Vec x = uniform_element(f4, rs);
    census[f4.encode(x)] += 1;
    if (generated_subalgebra(t, {x}).dim == 2) ++full;
  }
  CHECK(census.size() == 4);
  CHECK(uniform_census_p(census, 4, draws) > 1e-3);
  // exactly the two elements outside the prime field generate
  CHECK(sigmas(full, draws, 0.5) < 4);

  const AlgebraSpec f3 = simple_algebra(1, 1, 3, 1);
  census.clear();
  for (u32 i = 0; i < draws; ++i) census[f3.encode(uniform_element(f3, rs))] += 1;
  CHECK(uniform_census_p(census, 3, draws) > 1e-3);
}

TEST_CASE("uniform units: direct and rejection paths agree with the census") {
  const AlgebraSpec a = simple_algebra(2, 1, 2, 1);
  std::set<u64> unit_codes;
  for (u64 code = 0; code < a.size(); ++code)
    if (a.element_is_unit(a.decode(code))) unit_codes.insert(code);
  REQUIRE(unit_codes.size() == 6);

  RandomStream rs(2, 0);
  const u32 draws = 12000;
  std::map<u64, u64> direct;
  for (u32 i = 0; i < draws; ++i) {
    const Vec x = uniform_unit(a, rs);
    REQUIRE(a.element_is_unit(x));
    direct[a.encode(x)] += 1;
  }
  for (const auto& [code, cnt] : direct) CHECK(unit_codes.count(code) == 1);
  CHECK(direct.size() == 6);
  CHECK(uniform_census_p(direct, 6, draws) > 1e-3);

  // stripped of its decomposition the sampler falls back to rejection with
  // acceptance F(2, 2) = 3/8
  AlgebraSpec plain = a;
  plain.dec.reset();
  u64 tries = 0;
  std::map<u64, u64> rejected;
  for (u32 i = 0; i < draws; ++i) rejected[plain.encode(uniform_unit(plain, rs, &tries))] += 1;
  CHECK(rejected.size() == 6);
  CHECK(uniform_census_p(rejected, 6, draws) > 1e-3);
  CHECK(sigmas(draws, tries, 3.0 / 8.0) < 4);

  // the two paths draw from the same law
  std::vector<u64> o1, o2;
  for (u64 code : unit_codes) {
    o1.push_back(direct[code]);
    o2.push_back(rejected[code]);
  }
  CHECK(two_sample_p(o1, o2) > 1e-3);

  // invertible-matrix rejection acceptance F(3, 2) = (1 - 1/3)(1 - 1/9)
  const AlgebraSpec a3 = simple_algebra(2, 1, 3, 1);
  std::map<u64, u64> c3;
  u64 tries3 = 0;
  for (u32 i = 0; i < draws; ++i) c3[a3.encode(uniform_unit(a3, rs, &tries3))] += 1;
  CHECK(c3.size() == 48);
  CHECK(uniform_census_p(c3, 48, draws) > 1e-3);
  CHECK(sigmas(draws, tries3, (2.0 / 3.0) * (8.0 / 9.0)) < 4);

  // upper triangular 2x2 over F_2: the unit group is {1, 1 + e12}
  const AlgebraSpec par = parabolic_algebra({1, 1}, 1, 2, 1);
  std::map<u64, u64> cp;
  for (u32 i = 0; i < 4000; ++i) {
    const Vec x = uniform_unit(par, rs);
    REQUIRE(par.element_is_unit(x));
    cp[par.encode(x)] += 1;
  }
  CHECK(cp.size() == 2);
  CHECK(uniform_census_p(cp, 2, 4000) > 1e-3);
}

TEST_CASE("uniform nilpotents: direct path, censuses, and the floor") {
  const AlgebraSpec a = simple_algebra(2, 1, 2, 1);
  std::set<u64> nil_codes;
  for (u64 code = 0; code < a.size(); ++code)
    if (a.element_is_nilpotent(a.decode(code))) nil_codes.insert(code);
  REQUIRE(nil_codes.size() == 4);

  RandomStream rs(3, 0);
  const u32 draws = 10000;
  u64 tries = 0;
  std::map<u64, u64> census;
  for (u32 i = 0; i < draws; ++i) {
    const Vec x = uniform_nilpotent(a, rs, &tries);
    REQUIRE(a.element_is_nilpotent(x));
    census[a.encode(x)] += 1;
  }
  CHECK(census.size() == 4);
  for (const auto& [code, cnt] : census) CHECK(nil_codes.count(code) == 1);
  CHECK(uniform_census_p(census, 4, draws) > 1e-3);
  CHECK(sigmas(draws, tries, 0.25) < 4);  // nilpotent matrices: t^{-n} = 1/4

  // upper triangular 2x2 over F_2: semisimple part nilpotent only at zero,
  // so the law is uniform over {0, e12}
  const AlgebraSpec par = parabolic_algebra({1, 1}, 1, 2, 1);
  std::map<u64, u64> cp;
  for (u32 i = 0; i < 4000; ++i) cp[par.encode(uniform_nilpotent(par, rs))] += 1;
  CHECK(cp.size() == 2);
  CHECK(uniform_census_p(cp, 2, 4000) > 1e-3);

  // product of two fields: zero is the only nilpotent
  const AlgebraSpec ff = product_algebra({simple_algebra(1, 2, 2, 1), simple_algebra(1, 2, 2, 1)});
  for (u32 i = 0; i < 64; ++i) CHECK(ff.is_zero(uniform_nilpotent(ff, rs)));

  // five field factors of size 32 push the predicted acceptance to 2^{-25},
  // under the 2^{-24} floor
  const AlgebraSpec big = product_algebra(std::vector<AlgebraSpec>(5, simple_algebra(1, 5, 2, 1)));
  try {
    uniform_nilpotent(big, rs);
    CHECK(false);
  } catch (const acceptance_too_low_error& e) {
    CHECK(e.predicted_acceptance == doctest::Approx(std::pow(2.0, -25)));
  }
}

TEST_CASE("fixed characteristic polynomial: censuses and predicted acceptance") {
  const FieldPtr f2 = FiniteField::make_prime(2);
  RandomStream rs(4, 0);

  // X^2: exactly the nilpotent 2x2 matrices
  const Poly x2 = poly_make(f2, {0, 0, 1});
  std::map<u64, u64> census;
  const u32 draws = 10000;
  for (u32 i = 0; i < draws; ++i) {
    const Mat m = uniform_charpoly(x2, rs);
    REQUIRE(charpoly(m) == x2);
    census[mat_code(m)] += 1;
  }
  CHECK(census.size() == 4);
  CHECK(uniform_census_p(census, 4, draws) > 1e-3);

  // X^2 + X + 1: two matrices, uniform, acceptance 2/16
  const Poly irr = poly_make(f2, {1, 1, 1});
  census.clear();
  u64 tries = 0;
  for (u32 i = 0; i < draws; ++i) census[mat_code(uniform_charpoly(irr, rs, &tries))] += 1;
  CHECK(census.size() == 2);
  CHECK(uniform_census_p(census, 2, draws) > 1e-3);
  CHECK(sigmas(draws, tries, 2.0 / 16.0) < 4);

  // quartics: empirical acceptance tracks the exact count over 2^16
  const std::vector<std::vector<u32>> quartics = {
      {1, 1, 0, 0, 1},  // irreducible
      {0, 0, 0, 0, 1},  // X^4
      {1, 1, 1, 1, 1},  // irreducible
      {1, 0, 1, 0, 1},  // (X^2 + X + 1)^2
      {0, 0, 0, 1, 1},  // X^3 (X + 1)
  };
  for (const auto& coeffs : quartics) {
    const Poly f = poly_make(f2, coeffs);
    const double predicted =
        BigRat(count_charpoly(f).value, BigInt(65536)).convert_to<double>();
    u64 t4 = 0;
    const u32 n4 = 150;
    for (u32 i = 0; i < n4; ++i) {
      const Mat m = uniform_charpoly(f, rs, &t4);
      REQUIRE(charpoly(m) == f);
    }
    CAPTURE(poly_encode(f));
    CHECK(sigmas(n4, t4, predicted) < 4);
  }

  // X^5 over F_32: acceptance 2^{-25} sits under the floor
  const FieldPtr f32 = FiniteField::make_extension_least(f2, 5);
  const Poly x5 = poly_make(f32, {0, 0, 0, 0, 0, 1});
  try {
    uniform_charpoly(x5, rs);
    CHECK(false);
  } catch (const acceptance_too_low_error& e) {
    CHECK(e.predicted_acceptance == doctest::Approx(std::pow(2.0, -25)));
  }

  // rejects non-monic and constant inputs
  const FieldPtr f3p = FiniteField::make_prime(3);
  CHECK_THROWS_AS(uniform_charpoly(poly_make(f3p, {1, 2}), rs), std::invalid_argument);
  CHECK_THROWS_AS(uniform_charpoly(poly_make(f2, {1}), rs), std::invalid_argument);
}

TEST_CASE("fixed rank: exact uniformity via the factorization fibers") {
  const FieldPtr f2 = FiniteField::make_prime(2);
  RandomStream rs(5, 0);

  // alpha = 0: the zero matrix, no randomness consumed
  const Mat z = uniform_rank(f2, 2, 0, rs);
  CHECK(rank(z) == 0);

  // (n, t, alpha) = (2, 2, 1): nine rank-one matrices, uniform
  std::map<u64, u64> census;
  const u32 draws = 10000;
  u64 tries = 0;
  for (u32 i = 0; i < draws; ++i) {
    const Mat m = uniform_rank(f2, 2, 1, rs, &tries);
    REQUIRE(rank(m) == 1);
    census[mat_code(m)] += 1;
  }
  CHECK(census.size() == 9);
  CHECK(uniform_census_p(census, 9, draws) > 1e-3);
  // both factor draws accept at 1 - t^{-2} = 3/4
  CHECK(sigmas(2 * draws, tries, 0.75) < 4);

  // the fiber argument, exhaustively: every full-rank (U, V) pair, counted
  // per product, covers each rank-alpha matrix exactly |GL_alpha(2)| times
  for (u32 alpha : {1u, 2u}) {
    std::map<u64, u64> fibers;
    const u32 ucells = 2 * alpha, vcells = alpha * 2;
    for (u64 uc = 0; uc < (1ull << ucells); ++uc) {
      Mat u(f2, 2, alpha);
      for (u32 i = 0; i < ucells; ++i) u.a[i] = (uc >> i) & 1;
      if (rank(u) != alpha) continue;
      for (u64 vc = 0; vc < (1ull << vcells); ++vc) {
        Mat v(f2, alpha, 2);
        for (u32 i = 0; i < vcells; ++i) v.a[i] = (vc >> i) & 1;
        if (rank(v) != alpha) continue;
        fibers[mat_code(mat_mul(u, v))] += 1;
      }
    }
    const u64 expect_fiber = (alpha == 1) ? 1 : 6;  // |GL_alpha(2)|
    CHECK(fibers.size() == count_rank(2, 2, alpha).value.convert_to<u64>());
    for (const auto& [code, cnt] : fibers) CHECK(cnt == expect_fiber);
  }

  // (2, 3, 1): thirty-two rank-one matrices over F_3
  const FieldPtr f3 = FiniteField::make_prime(3);
  census.clear();
  for (u32 i = 0; i < draws; ++i) census[mat_code(uniform_rank(f3, 2, 1, rs))] += 1;
  CHECK(census.size() == 32);
  CHECK(uniform_census_p(census, 32, draws) > 1e-3);

  // full rank agrees with the unit sampler in law
  const AlgebraSpec a = simple_algebra(2, 1, 2, 1);
  std::map<u64, u64> via_rank, via_units;
  for (u32 i = 0; i < draws; ++i) {
    Mat m = uniform_rank(f2, 2, 2, rs);
    Vec x(4, 0);
    for (u32 j = 0; j < 4; ++j) x[j] = m.a[j];
    via_rank[a.encode(x)] += 1;
    via_units[a.encode(uniform_unit(a, rs))] += 1;
  }
  std::vector<u64> o1, o2;
  for (u64 code = 0; code < 16; ++code) {
    if (!via_rank.count(code) && !via_units.count(code)) continue;
    o1.push_back(via_rank.count(code) ? via_rank[code] : 0);
    o2.push_back(via_units.count(code) ? via_units[code] : 0);
  }
  CHECK(two_sample_p(o1, o2) > 1e-3);

  // taller rejection: U is 3x2 over F_2, acceptance (1 - 2^{-3})(1 - 2^{-2})
  u64 t32 = 0;
  const u32 n32 = 4000;
  for (u32 i = 0; i < n32; ++i) (void)uniform_rank(f2, 3, 2, rs, &t32);
  CHECK(sigmas(2 * n32, t32, (7.0 / 8.0) * (3.0 / 4.0)) < 4);

  CHECK_THROWS_AS(uniform_rank(f2, 2, 3, rs), std::invalid_argument);
}

TEST_CASE("chi-square helper behaves like the textbook statistic") {
  // perfect fit
  CHECK(chi_square_p({50, 50}, {50.0, 50.0}) == doctest::Approx(1.0));
  // one degree of freedom, statistic 4.0
  CHECK(chi_square_p({60, 40}, {50.0, 50.0}) == doctest::Approx(0.04550026).epsilon(1e-5));
  // gross misfit
  CHECK(chi_square_p({1000, 0}, {500.0, 500.0}) < 1e-9);
  CHECK_THROWS_AS(chi_square_p({1, 2}, {1.0}), std::invalid_argument);
}
