#include <set>

#include "doctest.h"
#include "fqgen/algebra.hpp"
#include "fqgen/rng.hpp"

using namespace fqgen;

TEST_CASE("constructors validate") {
  simple_algebra(2, 1, 2, 1).validate();
  simple_algebra(2, 1, 3, 1).validate();
  simple_algebra(3, 1, 2, 1).validate();
  simple_algebra(2, 2, 2, 1).validate();   // M_2(F_4) over F_2
  simple_algebra(1, 6, 2, 1).validate();   // GF(2,6)
  simple_algebra(2, 1, 2, 2).validate();   // M_2(F_4) over F_4
  simple_algebra(1, 3, 3, 1).validate();
  product_algebra({simple_algebra(1, 2, 2, 1), simple_algebra(1, 2, 2, 1)}).validate();
  product_algebra({simple_algebra(2, 1, 2, 1), simple_algebra(1, 1, 2, 1)}).validate();
  parabolic_algebra({1, 1}, 1, 2, 1).validate();
  parabolic_algebra({1, 1}, 2, 2, 1).validate();
  parabolic_algebra({2, 1}, 1, 2, 1).validate();
  parabolic_algebra({1, 1, 1}, 1, 3, 1).validate();
  truncated_poly_algebra(2, 1, 2).validate();
  truncated_poly_algebra(3, 1, 4).validate();
  truncated_poly_algebra(2, 2, 3).validate();
}

TEST_CASE("matrix view round-trips and respects multiplication") {
  auto a = simple_algebra(2, 2, 2, 1);
  RandomStream rng(41, 0);
  for (int t = 0; t < 50; ++t) {
    Vec x(a.dim), y(a.dim);
    for (auto& v : x) v = static_cast<u32>(rng.below(a.k->size()));
    for (auto& v : y) v = static_cast<u32>(rng.below(a.k->size()));
    CHECK(simple_from_matrix(a, simple_to_matrix(a, x)) == x);
    CHECK(simple_to_matrix(a, a.mul(x, y)) == mat_mul(simple_to_matrix(a, x), simple_to_matrix(a, y)));
  }
  CHECK(simple_to_matrix(a, a.one) == mat_identity(a.dec->factors[0].tower.fqm, 2));
}

TEST_CASE("units and nilpotents by census match classical counts") {
  // |GL_2(F_2)| = 6 of 16; nilpotents = 4.  |GL_2(F_3)| = 48 of 81; nilpotents 9.
  auto count = [](const AlgebraSpec& a) {
    u64 units = 0, nil = 0;
    for (u64 code = 0; code < a.size(); ++code) {
      const Vec x = a.decode(code);
      if (a.element_is_unit(x)) ++units;
      if (a.element_is_nilpotent(x)) ++nil;
    }
    return std::pair<u64, u64>{units, nil};
  };
  auto m22 = count(simple_algebra(2, 1, 2, 1));
  CHECK(m22.first == 6);
  CHECK(m22.second == 4);
  auto m23 = count(simple_algebra(2, 1, 3, 1));
  CHECK(m23.first == 48);
  CHECK(m23.second == 9);
  // unit <=> invertible matrix, nilpotent <=> nilpotent matrix (spot check)
  auto a = simple_algebra(2, 1, 3, 1);
  for (u64 code = 0; code < a.size(); ++code) {
    const Vec x = a.decode(code);
    CHECK(a.element_is_unit(x) == is_invertible(simple_to_matrix(a, x)));
    CHECK(a.element_is_nilpotent(x) == is_nilpotent_mat(simple_to_matrix(a, x)));
  }
}

TEST_CASE("element inverse solves against unity") {
  auto a = product_algebra({simple_algebra(2, 1, 2, 1), simple_algebra(1, 2, 2, 1)});
  RandomStream rng(42, 0);
  u32 found = 0;
  while (found < 25) {
    Vec x(a.dim);
    for (auto& v : x) v = static_cast<u32>(rng.below(a.k->size()));
    if (!a.element_is_unit(x)) continue;
    ++found;
    const Vec xi = a.element_inverse(x);
    CHECK(a.mul(x, xi) == a.one);
    CHECK(a.mul(xi, x) == a.one);
  }
}

TEST_CASE("encode/decode round-trip") {
  auto a = simple_algebra(2, 1, 3, 1);
  for (u64 code = 0; code < a.size(); ++code) CHECK(a.encode(a.decode(code)) == code);
}

TEST_CASE("trivial extension equals truncated polynomials for the dual numbers") {
  auto s = simple_algebra(1, 1, 2, 1);
  Mat act(s.k, 1, 1);
  act.at(0, 0) = 1;
  auto dual = trivial_extension(s, 1, {act}, {act});
  dual.validate();
  auto t22 = truncated_poly_algebra(2, 1, 2);
  REQUIRE(dual.dim == t22.dim);
  for (u32 i = 0; i < dual.dim; ++i)
    for (u32 j = 0; j < dual.dim; ++j) {
      CHECK(dual.mul(dual.basis_vec(i), dual.basis_vec(j)) == t22.mul(t22.basis_vec(i), t22.basis_vec(j)));
    }
}

TEST_CASE("trivial extension rejects non-bimodule actions") {
  // S = F_2 x F_2; a left action where the two idempotents both act as
  // identity is not multiplicative (e_1 e_2 = 0 must act as 0).
  auto s = product_algebra({simple_algebra(1, 1, 2, 1), simple_algebra(1, 1, 2, 1)});
  Mat id1(s.k, 1, 1);
  id1.at(0, 0) = 1;
  CHECK_THROWS_AS(trivial_extension(s, 1, {id1, id1}, {id1, id1}), std::invalid_argument);
}

TEST_CASE("bimodule trivial extension with asymmetric actions validates") {
  // S = F_2 x F_2, V = F_2: e_1 acts by 1 on the left, e_2 by 1 on the right
  // (the arrow bimodule of the A_2 quiver).
  auto s = product_algebra({simple_algebra(1, 1, 2, 1), simple_algebra(1, 1, 2, 1)});
  Mat one1(s.k, 1, 1), zero1(s.k, 1, 1);
  one1.at(0, 0) = 1;
  auto a = trivial_extension(s, 1, {one1, zero1}, {zero1, one1});
  a.validate();
  // this is the 2x2 upper-triangular algebra in disguise
  auto p11 = parabolic_algebra({1, 1}, 1, 2, 1);
  CHECK(a.dim == p11.dim);
}

TEST_CASE("span utilities") {
  auto F = FiniteField::make_prime(2);
  std::vector<Vec> a = {{1, 1, 0, 0}, {0, 1, 1, 0}};
  std::vector<Vec> b = {{1, 0, 1, 0}, {0, 0, 0, 1}};
  const auto inter = span_intersect(F, a, b);
  REQUIRE(inter.size() == 1);
  CHECK(inter[0] == Vec{1, 0, 1, 0});  // (1,1,0,0)+(0,1,1,0)
  const auto sum = span_sum(F, a, b);
  CHECK(sum.size() == 3);
  CHECK(span_contains(F, sum, Vec{1, 1, 0, 1}));
  CHECK(!span_contains(F, a, Vec{1, 0, 1, 1}));
}

TEST_CASE("core ideal inside a parabolic is the strict block") {
  auto p = parabolic_algebra({1, 1}, 1, 2, 1);  // basis: E11, E12, E22
  // subalgebra span{1, E12}
  std::vector<Vec> sub = {p.one, p.basis_vec(1)};
  const auto core = core_ideal(p, sub);
  REQUIRE(core.size() == 1);
  CHECK(core[0] == p.basis_vec(1));
}

TEST_CASE("core ideal of a maximal subalgebra of a simple algebra is zero") {
  auto a = simple_algebra(2, 1, 2, 1);
  // the Borel span{E11, E12, E22} together with 1
  Vec e11 = a.zero(), e12 = a.zero(), e22 = a.zero();
  e11[0] = 1;
  e12[1] = 1;
  e22[3] = 1;
  const auto core = core_ideal(a, {e11, e12, e22});
  CHECK(core.empty());
}

TEST_CASE("embed_inner produces the inner field subalgebra of M_2(F_2)") {
  auto a = simple_algebra(2, 1, 2, 1);
  const auto img = embed_inner(a, 2);
  REQUIRE(img.size() == 2);
  const auto sp = span_rref(a.k, img);
  CHECK(span_contains(a.k, sp, a.one));
  // closed under multiplication and contains a non-scalar element
  for (const auto& x : img)
    for (const auto& y : img) CHECK(span_contains(a.k, sp, a.mul(x, y)));
  // the non-identity basis element squares to itself plus one (F_4 pattern)
  bool found_f4 = false;
  for (const auto& x : img) {
    const Vec sq = a.mul(x, x);
    if (sq == a.add(x, a.one)) found_f4 = true;
  }
  CHECK(found_f4);
}

TEST_CASE("embeddings are multiplicatively closed subalgebras of the right size") {
  struct Case {
    u32 n, m;
    u64 p;
    u32 e;
    u32 inner_a, sub_b;
  };
  for (const Case& c : {Case{2, 1, 3, 1, 2, 1}, Case{4, 1, 2, 1, 2, 1}, Case{2, 2, 2, 1, 2, 2},
                        Case{3, 1, 2, 1, 3, 1}, Case{2, 3, 2, 1, 1, 3}}) {
    auto a = simple_algebra(c.n, c.m, c.p, c.e);
    if (c.inner_a > 1) {
      const auto img = embed_inner(a, c.inner_a);
      CHECK(img.size() == a.dim / c.inner_a);
      const auto sp = span_rref(a.k, img);
      CHECK(sp.size() == img.size());
      CHECK(span_contains(a.k, sp, a.one));
      for (const auto& x : img)
        for (const auto& y : img) CHECK(span_contains(a.k, sp, a.mul(x, y)));
    }
    if (c.sub_b > 1) {
      const auto img = embed_subfield(a, c.sub_b);
      CHECK(img.size() == a.dim / c.sub_b);
      const auto sp = span_rref(a.k, img);
      CHECK(sp.size() == img.size());
      CHECK(span_contains(a.k, sp, a.one));
      for (const auto& x : img)
        for (const auto& y : img) CHECK(span_contains(a.k, sp, a.mul(x, y)));
    }
  }
}

TEST_CASE("product algebra multiplies componentwise") {
  auto a = simple_algebra(2, 1, 2, 1);
  auto b = simple_algebra(1, 2, 2, 1);
  auto ab = product_algebra({a, b});
  CHECK(ab.dim == a.dim + b.dim);
  RandomStream rng(43, 0);
  for (int t = 0; t < 40; ++t) {
    Vec x(ab.dim), y(ab.dim);
    for (auto& v : x) v = static_cast<u32>(rng.below(2));
    for (auto& v : y) v = static_cast<u32>(rng.below(2));
    const Vec xy = ab.mul(x, y);
    Vec xa(x.begin(), x.begin() + a.dim), ya(y.begin(), y.begin() + a.dim);
    Vec xb(x.begin() + a.dim, x.end()), yb(y.begin() + a.dim, y.end());
    const Vec pa = a.mul(xa, ya), pb = b.mul(xb, yb);
    for (u32 i = 0; i < a.dim; ++i) CHECK(xy[i] == pa[i]);
    for (u32 i = 0; i < b.dim; ++i) CHECK(xy[a.dim + i] == pb[i]);
  }
}

TEST_CASE("radical powers of parabolic and truncated algebras") {
  auto p = parabolic_algebra({1, 1, 1}, 1, 2, 1);
  REQUIRE(p.dec.has_value());
  CHECK(p.dec->radical.size() == 3);          // E12, E13, E23
  CHECK(p.dec->radical_powers.size() == 2);   // J, J^2 = span{E13}
  CHECK(p.dec->radical_powers[1].size() == 1);
  auto t = truncated_poly_algebra(2, 1, 5);
  CHECK(t.dec->radical_powers.size() == 4);
  for (u32 k = 0; k < 4; ++k) CHECK(t.dec->radical_powers[k].size() == 4 - k);
}
