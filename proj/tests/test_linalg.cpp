#include "doctest.h"
#include "fqgen/linalg.hpp"
#include "test_util.hpp"

using namespace fqgen;
using namespace fqgen::testutil;

TEST_CASE("rref produces canonical reduced form") {
  auto F = FiniteField::make_prime(3);
  Mat m(F, 3, 4);
  // rows: (1,2,0,1), (2,1,1,0), (0,0,2,1); the first two force pivots at
  // columns 0,1 and the third is independent of them
  const u32 data[12] = {1, 2, 0, 1, 2, 1, 1, 0, 0, 0, 2, 1};
  std::copy(data, data + 12, m.a.begin());
  const auto piv = rref(m);
  CHECK(piv.size() == 3);
  // unit pivots, zeros above and below
  for (size_t i = 0; i < piv.size(); ++i) {
    CHECK(m.at(static_cast<u32>(i), piv[i]) == 1);
    for (u32 r = 0; r < m.rows; ++r)
      if (r != i) CHECK(m.at(r, piv[i]) == 0);
  }
}

TEST_CASE("kernel basis annihilates and has complementary dimension") {
  RandomStream rng(31, 0);
  for (u64 p : {2ull, 3ull, 5ull}) {
    auto F = FiniteField::make_prime(p);
    for (int trial = 0; trial < 50; ++trial) {
      const u32 r = 1 + static_cast<u32>(rng.below(5));
      const u32 c = 1 + static_cast<u32>(rng.below(6));
      Mat m = random_mat(F, r, c, rng);
      const auto ker = kernel_basis(m);
      CHECK(ker.size() == c - rank(m));
      for (const auto& v : ker) {
        for (u32 i = 0; i < r; ++i) {
          u32 acc = 0;
          for (u32 j = 0; j < c; ++j) acc = F->add(acc, F->mul(m.at(i, j), v[j]));
          CHECK(acc == 0);
        }
      }
    }
  }
}

TEST_CASE("matrix inverse round-trips") {
  RandomStream rng(32, 0);
  auto F4 = make_tower(2, 2, 1).fq;
  for (const auto& F : {FiniteField::make_prime(2), FiniteField::make_prime(5), F4}) {
    for (int trial = 0; trial < 30; ++trial) {
      const u32 n = 1 + static_cast<u32>(rng.below(4));
      Mat m = random_invertible(F, n, rng);
      CHECK(mat_mul(m, mat_inverse(m)) == mat_identity(F, n));
    }
  }
}

TEST_CASE("charpoly agrees with Laplace expansion") {
  RandomStream rng(33, 0);
  std::vector<FieldPtr> fields = {FiniteField::make_prime(2), FiniteField::make_prime(3),
                                  FiniteField::make_prime(5), make_tower(2, 2, 1).fq,
                                  make_tower(3, 2, 1).fq};
  for (const auto& F : fields) {
    for (int trial = 0; trial < 40; ++trial) {
      const u32 n = 1 + static_cast<u32>(rng.below(4));
      Mat m = random_mat(F, n, n, rng);
      const Poly a = charpoly(m);
      const Poly b = charpoly_laplace(m);
      CHECK(a == b);
      CHECK(a.monic());
      CHECK(a.deg() == static_cast<int>(n));
    }
  }
}

TEST_CASE("charpoly is a similarity invariant") {
  RandomStream rng(34, 0);
  auto F = FiniteField::make_prime(3);
  for (int trial = 0; trial < 30; ++trial) {
    const u32 n = 2 + static_cast<u32>(rng.below(4));
    Mat m = random_mat(F, n, n, rng);
    Mat g = random_invertible(F, n, rng);
    Mat conj = mat_mul(mat_mul(g, m), mat_inverse(g));
    CHECK(charpoly(m) == charpoly(conj));
  }
}

TEST_CASE("det is multiplicative and matches charpoly constant term") {
  RandomStream rng(35, 0);
  auto F = FiniteField::make_prime(5);
  for (int trial = 0; trial < 30; ++trial) {
    const u32 n = 1 + static_cast<u32>(rng.below(4));
    Mat a = random_mat(F, n, n, rng);
    Mat b = random_mat(F, n, n, rng);
    CHECK(det(mat_mul(a, b)) == F->mul(det(a), det(b)));
    CHECK((det(a) != 0) == is_invertible(a));
  }
}

TEST_CASE("nilpotency via charpoly") {
  auto F = FiniteField::make_prime(2);
  Mat s(F, 3, 3);  // strictly upper shift
  s.at(0, 1) = 1;
  s.at(1, 2) = 1;
  CHECK(is_nilpotent_mat(s));
  CHECK(!is_nilpotent_mat(mat_identity(F, 3)));
  // count nilpotents in M_2(F_2): should be q^(n^2-n) = 4
  auto F2 = FiniteField::make_prime(2);
  u32 count = 0;
  for (u32 code = 0; code < 16; ++code) {
    Mat m(F2, 2, 2);
    for (u32 i = 0; i < 4; ++i) m.a[i] = (code >> i) & 1;
    if (is_nilpotent_mat(m)) ++count;
  }
  CHECK(count == 4);
}

TEST_CASE("mat_pow matches repeated multiplication") {
  RandomStream rng(36, 0);
  auto F = FiniteField::make_prime(3);
  Mat m = random_mat(F, 3, 3, rng);
  Mat acc = mat_identity(F, 3);
  for (u32 e = 0; e < 6; ++e) {
    CHECK(mat_pow(m, e) == acc);
    acc = mat_mul(acc, m);
  }
}
