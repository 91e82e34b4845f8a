#include "fqgen/report.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "fqgen/algebra.hpp"
#include "fqgen/closure.hpp"
#include "fqgen/counting.hpp"
#include "fqgen/estimator.hpp"
#include "fqgen/gfield.hpp"
#include "fqgen/linalg.hpp"
#include "fqgen/maxsub.hpp"
#include "fqgen/poly.hpp"
#include "fqgen/rng.hpp"
#include "fqgen/sampler.hpp"

namespace fqgen {

namespace {

BigRat rat_pow(const BigRat& x, u32 e) {
  BigRat r(1);
  for (u32 i = 0; i < e; ++i) r *= x;
  return r;
}

u64 census(const AlgebraSpec& a, const std::function<bool(const Vec&)>& pred) {
  u64 hits = 0;
  for (u64 c = 0; c < a.size(); ++c)
    if (pred(a.decode(c))) ++hits;
  return hits;
}

// probability that an ordered pair from `codes` generates a
BigRat pair_probability(const AlgebraSpec& a, const std::vector<u64>& codes) {
  const MulTable t = MulTable::compile(a);
  u64 hits = 0;
  for (u64 x : codes)
    for (u64 y : codes) {
      const u64 pair[2] = {x, y};
      if (generates_codes(t, pair, 2)) ++hits;
    }
  return BigRat(BigInt(hits), BigInt(codes.size()) * codes.size());
}

// |B^x|/|B| of a maximal-subalgebra class of M_n(q^m), exact
BigRat class_unit_density(const SubalgebraClass& cl, u32 n, u32 m, u64 q) {
  const BigInt t = big_pow(BigInt(q), m);
  switch (cl.kind) {
    case SubalgebraClass::Kind::S1:
      return F_ratio(t, cl.param) * F_ratio(t, n - cl.param);
    case SubalgebraClass::Kind::S2:
      return F_ratio(big_pow(t, cl.param), n / cl.param);
    case SubalgebraClass::Kind::S3:
      return F_ratio(big_pow(BigInt(q), m / cl.param), n);
    default:
      throw std::logic_error("unexpected class kind for a simple algebra");
  }
}

u64 mat_code(const Mat& m) {
  const u64 qs = m.F->size();
  u64 code = 0, radix = 1;
  for (u32 r = 0; r < m.rows; ++r)
    for (u32 c = 0; c < m.cols; ++c) {
      code += radix * m.at(r, c);
      radix *= qs;
    }
  return code;
}

std::vector<Vec> normalized(const AlgebraSpec& a, const std::vector<Vec>& basis) {
  return span_rref(a.k, basis);
}

}  // namespace

int run_acceptance(u64 seed, u32 workers, std::ostream& out) {
  int failures = 0;
  int idx = 0;
  auto crit = [&](const std::string& text, const std::function<bool()>& body) {
    ++idx;
    bool pass = false;
    std::string note;
    try {
      pass = body();
    } catch (const std::exception& e) {
      note = std::string(" [exception: ") + e.what() + "]";
    }
    out << (pass ? "PASS" : "FAIL") << "  " << std::setw(2) << idx << "  " << text << note
        << std::endl;
    if (!pass) ++failures;
  };

  McConfig cfg;
  cfg.seed = seed;
  cfg.samples = 100000;
  cfg.workers = workers;

  const AlgebraSpec m22 = simple_algebra(2, 1, 2, 1);
  const AlgebraSpec m23 = simple_algebra(2, 1, 3, 1);
  const AlgebraSpec m32 = simple_algebra(3, 1, 2, 1);

  // 1
  crit("exhaustive pair-generation probability of the 2x2 matrices over F_2 is exactly 3/8",
       [&] {
         const Estimate est = estimate_P(m22, 2, EstMethod::exhaustive, cfg);
         return est.exact && est.exact_value == BigRat(3, 8) &&
                est.exact_value == exact_P_small(2, 1, 2);
       });

  // 2
  crit("Monte Carlo 3x3/F_2 estimate within three standard errors of 63/128 for >= 19 of 20 seeds",
       [&] {
         const double truth = 63.0 / 128.0;
         const double tol = 3 * std::sqrt(truth * (1 - truth) / double(cfg.samples));
         u32 good = 0;
         for (u64 s = 1; s <= 20; ++s) {
           McConfig c = cfg;
           c.seed = seed + s;
           const Estimate est = estimate_P(m32, 2, EstMethod::montecarlo, c);
           if (std::abs(est.value - truth) < tol) ++good;
         }
         return good >= 19 &&
                estimate_P(m32, 2, EstMethod::exhaustive, cfg).exact_value == BigRat(63, 128);
       });

  // 3
  crit("2x2 matrices over F_3: exhaustive equals 16/27 and Monte Carlo agrees within 3 sigma",
       [&] {
         const Estimate ex = estimate_P(m23, 2, EstMethod::exhaustive, cfg);
         if (!ex.exact || ex.exact_value != BigRat(16, 27)) return false;
         const Estimate mc = estimate_P(m23, 2, EstMethod::montecarlo, cfg);
         const double truth = 16.0 / 27.0;
         const double tol = 3 * std::sqrt(truth * (1 - truth) / double(cfg.samples));
         return std::abs(mc.value - truth) < tol;
       });

  // 4
  crit("exhaustive nilpotent censuses match t^(n^2-n) for the three small matrix algebras", [&] {
    for (const AlgebraSpec* a : {&m22, &m23, &m32}) {
      const u64 n = census(*a, [&](const Vec& x) { return a->element_is_nilpotent(x); });
      const u32 nn = a->dec->factors[0].n;
      const u64 t = a->dec->factors[0].tower.q;
      if (BigInt(n) != count_nilpotents(nn, t).value) return false;
      if (BigInt(n) != big_pow(BigInt(t), static_cast<u64>(nn) * nn - nn)) return false;
    }
    return true;
  });

  // 5
  crit("characteristic-polynomial censuses of 2x2 matrices match the closed form and partition",
       [&] {
         for (u64 q : {2ull, 3ull}) {
           const AlgebraSpec a = simple_algebra(2, 1, q, 1);
           const FieldPtr F = a.k;
           BigInt total = 0;
           for (u32 c1 = 0; c1 < q; ++c1)
             for (u32 c0 = 0; c0 < q; ++c0) {
               const Poly f = poly_make(F, {c0, c1, 1});
               const u64 n = census(a, [&](const Vec& x) {
                 return charpoly(simple_to_matrix(a, x)) == f;
               });
               if (BigInt(n) != count_charpoly(f).value) return false;
               total += n;
             }
           if (total != big_pow(BigInt(q), 4)) return false;
         }
         return true;
       });

  // 6
  crit("rank censuses match the product formula exactly on the three small matrix algebras", [&] {
    for (const AlgebraSpec* a : {&m22, &m23, &m32}) {
      const u32 nn = a->dec->factors[0].n;
      const u64 t = a->dec->factors[0].tower.q;
      for (u32 alpha = 0; alpha <= nn; ++alpha) {
        const u64 n = census(*a, [&](const Vec& x) {
          return rank(simple_to_matrix(*a, x)) == alpha;
        });
        if (BigInt(n) != count_rank(nn, t, alpha).value) return false;
      }
    }
    return true;
  });

  // 7
  crit("subalgebra zeta closed forms at eps = 1 for six shapes at q = 2 and q = 3", [&] {
    auto val = [](u64 q, u64 e) { return BigRat(1, big_pow(BigInt(q), e)); };
    const BigRat one(1);
    for (u64 q : {2ull, 3ull}) {
      if (*zeta_simple(5, 1, q, one).exact != 2 * val(q, 4) + 2 * val(q, 6) + val(q, 20))
        return false;
      if (*zeta_simple(6, 1, q, one).exact !=
          2 * val(q, 5) + 2 * val(q, 8) + val(q, 9) + val(q, 18) + val(q, 24))
        return false;
      if (*zeta_simple(7, 1, q, one).exact !=
          2 * val(q, 6) + 2 * val(q, 10) + 2 * val(q, 12) + val(q, 42))
        return false;
      if (*zeta_simple(3, 2, q, one).exact != 2 * val(q, 4) + val(q, 9) + val(q, 12)) return false;
      if (*zeta_simple(2, 3, q, one).exact != val(q, 3) + val(q, 6) + val(q, 8)) return false;
      if (*zeta_simple(2, 4, q, one).exact != val(q, 4) + 2 * val(q, 8)) return false;
    }
    return true;
  });

  // 8
  crit("unit-density ratio of every maximal-subalgebra class stays strictly inside the "
       "certified band, n <= 4, m <= 3, q in {2,3,4,5}",
       [&] {
         const Enclosure& phi = phi_half();
         for (u32 n = 2; n <= 4; ++n)
           for (u32 m = 1; m <= 3; ++m)
             for (u64 q : {2ull, 3ull, 4ull, 5ull}) {
               if (n * n * m > 24) continue;  // keep field towers desk-scale
               u64 p = q;
               u32 e = 1;
               if (q == 4) p = 2, e = 2;
               const AlgebraSpec a = simple_algebra(n, m, p, e);
               const BigRat a_density = F_ratio(big_pow(BigInt(q), m), n);
               for (const SubalgebraClass& cl : standard_reps(a)) {
                 const BigRat ratio = a_density / class_unit_density(cl, n, m, q);
                 if (!(ratio > phi.hi && ratio < BigRat(1) / phi.hi)) return false;
               }
             }
         return true;
       });

  // 9
  crit("unit-fraction product inequalities and the elementary ratio bound hold exactly", [&] {
    for (u64 u = 2; u <= 5; ++u)
      for (u32 v = 0; v <= 5; ++v)
        for (u32 c = 1; c <= 3; ++c) {
          const BigRat lhs = rat_pow(F_ratio(BigInt(u), v), c);
          const BigRat mid = F_ratio(big_pow(BigInt(u), c), v);
          const BigRat rhs = BigRat(big_pow(BigInt(2), v)) * F_ratio(BigInt(u), v);
          if (!(lhs <= mid && mid <= rhs)) return false;
        }
    // F(u,v) <= (3/2)^(v/2) F(u,w) F(u,v-w): compare squares to stay rational
    for (u64 u = 2; u <= 5; ++u)
      for (u32 v = 1; v <= 5; ++v)
        for (u32 w = 0; w < v; ++w) {
          const BigRat lhs = rat_pow(F_ratio(BigInt(u), v), 2);
          const BigRat rhs =
              rat_pow(BigRat(3, 2), v) * rat_pow(F_ratio(BigInt(u), w) * F_ratio(BigInt(u), v - w), 2);
          if (!(lhs <= rhs)) return false;
        }
    for (u64 x = 2; x <= 30; ++x)
      for (u64 y = 2; y <= x; ++y) {
        const BigRat l(x, y), m(x - 1, y - 1), r(2 * x, y);
        if (!(l <= m && m <= r)) return false;
      }
    return true;
  });

  // 10
  crit("minimal index, witness count beta = xi(q^mn - 1)/(q^m - 1), and kappa in (1,4)", [&] {
    // enumerated minimal index and witness count on the named algebras
    struct Named {
      AlgebraSpec a;
      BigInt m_expected;
      BigInt beta_expected;
    };
    std::vector<Named> named;
    named.push_back({m22, BigInt(2), BigInt(3)});
    named.push_back({m23, BigInt(3), BigInt(4)});
    for (u32 m = 2; m <= 6; ++m) {
      u32 p = 2;
      while (m % p != 0) ++p;
      named.push_back({simple_algebra(1, m, 2, 1), big_pow(BigInt(2), m - m / p), BigInt(1)});
    }
    for (const Named& nm : named) {
      const MMin mm = m_min(nm.a);
      if (mm.value != nm.m_expected) return false;
      const auto subs = all_maximal_subalgebras(nm.a);
      BigInt least = 0, attain = 0;
      for (const auto& b : subs) {
        const BigInt index = big_pow(BigInt(nm.a.k->size()), nm.a.dim - b.size());
        if (least == 0 || index < least) least = index, attain = 0;
        if (index == least) ++attain;
      }
      if (least != nm.m_expected || attain != nm.beta_expected) return false;
    }
    // table shape: for n = 2 one witness class, the smallest block-triangular kind
    for (const AlgebraSpec* a : {&m22, &m23}) {
      const MMin mm = m_min(*a);
      if (mm.witnesses.size() != 1 || mm.witnesses[0].kind != SubalgebraClass::Kind::S1)
        return false;
    }
    // kappa stays in (1,4) across the grid
    for (u32 n = 2; n <= 5; ++n)
      for (u32 m = 1; m <= 3; ++m)
        for (u64 q : {2ull, 3ull, 4ull, 5ull}) {
          if (n * n * m > 64) continue;
          u64 p = q;
          u32 e = 1;
          if (q == 4) p = 2, e = 2;
          const BigRat k = kappa(simple_algebra(n, m, p, e));
          if (!(k > 1 && k < 4)) return false;
        }
    return true;
  });

  // 11
  crit("second-order inclusion-exclusion bracket [37/64, 13/16] contains the exact 5/8", [&] {
    const BonferroniBounds bb = bonferroni(m22, 2);
    const BigRat fail_p = BigRat(1) - estimate_P(m22, 2, EstMethod::exhaustive, cfg).exact_value;
    return bb.lower == BigRat(37, 64) && bb.upper == BigRat(13, 16) && fail_p == BigRat(5, 8) &&
           bb.lower <= fail_p && fail_p <= bb.upper;
  });

  // 12
  crit("nilpotent-pair probability equals the direct 16-pair census and Monte Carlo agrees", [&] {
    std::vector<u64> nil;
    for (u64 c = 0; c < m22.size(); ++c)
      if (m22.element_is_nilpotent(m22.decode(c))) nil.push_back(c);
    if (nil.size() != 4) return false;
    const BigRat oracle = pair_probability(m22, nil);
    if (oracle != BigRat(3, 8)) return false;
    const Estimate ex = estimate_conditional(m22, Condition::nilpotent(), 2,
                                             EstMethod::exhaustive, cfg);
    if (!ex.exact || ex.exact_value != oracle) return false;
    McConfig c = cfg;
    c.samples = 10000;
    const Estimate mc = estimate_conditional(m22, Condition::nilpotent(), 2,
                                             EstMethod::montecarlo, c);
    const double tol = 3 * std::sqrt(0.375 * 0.625 / double(c.samples));
    return std::abs(mc.value - 0.375) < tol;
  });

  // 13
  crit("sampler uniformity: chi-square p > 0.001 for two rank targets and one "
       "characteristic-polynomial target at 10^4 draws",
       [&] {
         struct RankCase {
           u64 p;
           u32 n, alpha;
         };
         for (const RankCase rc : {RankCase{2, 2, 1}, RankCase{3, 2, 1}}) {
           const FieldPtr F = FiniteField::make_prime(rc.p);
           // enumerate the target to index the buckets
           std::map<u64, size_t> bucket;
           const u64 cells = big_pow(BigInt(rc.p), static_cast<u64>(rc.n) * rc.n)
                                 .convert_to<u64>();
           for (u64 code = 0; code < cells; ++code) {
             Mat m(F, rc.n, rc.n);
             u64 rem = code;
             for (u32 r = 0; r < rc.n; ++r)
               for (u32 cc = 0; cc < rc.n; ++cc) {
                 m.at(r, cc) = static_cast<u32>(rem % rc.p);
                 rem /= rc.p;
               }
             if (rank(m) == rc.alpha) bucket.emplace(code, bucket.size());
           }
           if (BigInt(bucket.size()) != count_rank(rc.n, rc.p, rc.alpha).value) return false;
           std::vector<u64> observed(bucket.size(), 0);
           RandomStream rs = RandomStream::derive(seed, "acceptance-rank", rc.p);
           const u64 draws = 10000;
           for (u64 i = 0; i < draws; ++i)
             ++observed[bucket.at(mat_code(uniform_rank(F, rc.n, rc.alpha, rs)))];
           const std::vector<double> expected(bucket.size(),
                                              double(draws) / double(bucket.size()));
           if (chi_square_p(observed, expected) <= 1e-3) return false;
         }
         // the two matrices with characteristic polynomial X^2 + X + 1 over F_2
         const FieldPtr F2 = FiniteField::make_prime(2);
         const Poly f = poly_make(F2, {1, 1, 1});
         std::map<u64, size_t> bucket;
         for (u64 code = 0; code < 16; ++code) {
           Mat m(F2, 2, 2);
           u64 rem = code;
           for (u32 r = 0; r < 2; ++r)
             for (u32 cc = 0; cc < 2; ++cc) {
               m.at(r, cc) = static_cast<u32>(rem % 2);
               rem /= 2;
             }
           if (charpoly(m) == f) bucket.emplace(code, bucket.size());
         }
         if (bucket.size() != 2) return false;
         std::vector<u64> observed(2, 0);
         RandomStream rs = RandomStream::derive(seed, "acceptance-charpoly", 0);
         for (u64 i = 0; i < 10000; ++i) ++observed[bucket.at(mat_code(uniform_charpoly(f, rs)))];
         return chi_square_p(observed, {5000.0, 5000.0}) > 1e-3;
       });

  // 14
  crit("embedded-algebra rank shares beat t^(-p a^2) exactly, and the rank-conditioned "
       "generation bound holds exhaustively",
       [&] {
         struct Triple {
           u32 n, p, alpha;
         };
         for (const Triple tr : {Triple{2, 2, 1}, Triple{4, 2, 1}, Triple{4, 2, 2}, Triple{3, 3, 1}})
           for (u64 t : {2ull, 3ull}) {
             const u64 tp = big_pow(BigInt(t), tr.p).convert_to<u64>();
             const BigRat share(count_rank(tr.n / tr.p, tp, tr.alpha).value,
                                count_rank(tr.n, t, tr.alpha).value);
             const BigRat floor_r(BigInt(1),
                                  big_pow(BigInt(t), static_cast<u64>(tr.p) * tr.alpha * tr.alpha));
             if (!(share >= floor_r)) return false;
           }
         const Estimate est = estimate_conditional(m22, Condition::rank(1), 2,
                                                   EstMethod::exhaustive, cfg);
         return est.exact && est.exact_value <= BigRat(15, 16);
       });

  // 15
  crit("maximal-subalgebra tables, growth-degree window checks, trivial-core and "
       "independence lemmas on four reference algebras",
       [&] {
         const AlgebraSpec ff =
             product_algebra({simple_algebra(1, 2, 2, 1), simple_algebra(1, 2, 2, 1)});
         const AlgebraSpec k2 =
             product_algebra({simple_algebra(1, 1, 2, 1), simple_algebra(1, 1, 2, 1)});
         using Table = std::map<BigInt, BigInt>;
         if (m_n_counts(m22) != Table{{BigInt(2), BigInt(3)}, {BigInt(4), BigInt(1)}}) return false;
         if (m_n_counts(m23) != Table{{BigInt(3), BigInt(4)}, {BigInt(9), BigInt(3)}}) return false;
         if (m_n_counts(ff) != Table{{BigInt(2), BigInt(2)}, {BigInt(4), BigInt(2)}}) return false;
         if (m_n_counts(k2) != Table{{BigInt(2), BigInt(1)}}) return false;
         McConfig c = cfg;
         c.samples = 20000;
         for (const AlgebraSpec* a : {&m22, &m23, &ff, &k2}) {
           for (const PfgCheck& ch : pfg_report(*a, c).checks)
             if (!ch.pass) return false;
           // trivial-core count per index, and independence of distinct-core pairs
           const auto subs = all_maximal_subalgebras(*a);
           std::vector<std::vector<Vec>> cores;
           std::map<BigInt, u64> trivial_per_index;
           for (const auto& b : subs) {
             cores.push_back(normalized(*a, core_ideal(*a, b)));
             if (cores.back().empty())
               ++trivial_per_index[big_pow(BigInt(a->k->size()), a->dim - b.size())];
           }
           for (const auto& [index, count] : trivial_per_index)
             if (double(count) > 6.93 * index.convert_to<double>()) return false;
           for (size_t i = 0; i < subs.size(); ++i)
             for (size_t j = i + 1; j < subs.size(); ++j) {
               if (cores[i] == cores[j]) continue;
               const size_t meet = span_intersect(a->k, subs[i], subs[j]).size();
               if (meet + a->dim != subs[i].size() + subs[j].size()) return false;
             }
         }
         // index-2 counts of the 2x2 matrix algebras stay below n + 1
         for (const AlgebraSpec* a : {&m22, &m23})
           for (const auto& [n, cnt] : m_n_counts(*a))
             if (cnt > n + 1) return false;
         return true;
       });

  // 16
  crit("generator-count window -2.33 < d - f < mu + 3.42 across the structured grid", [&] {
    const std::vector<AlgebraSpec> grid = {
        m22,
        m23,
        simple_algebra(1, 2, 2, 1),
        product_algebra({simple_algebra(1, 2, 2, 1), simple_algebra(1, 2, 2, 1)}),
        product_algebra(std::vector<AlgebraSpec>(4, simple_algebra(1, 1, 2, 1))),
        product_algebra({m22, m22}),
        product_algebra({m22, simple_algebra(1, 2, 2, 1)}),
        product_algebra({simple_algebra(1, 2, 2, 1), simple_algebra(1, 4, 2, 1)}),
        truncated_poly_algebra(2, 1, 3),
        truncated_poly_algebra(3, 1, 2),
        parabolic_algebra({1, 1}, 1, 2, 1),
        parabolic_algebra({2, 1}, 1, 3, 1),
    };
    for (const SuiteCheck& ch : verify_suite("mind", grid, cfg))
      if (!ch.pass) return false;
    return true;
  });

  // 17
  crit("minimal generator number of k^r over F_2 equals ceil(log2 r) for r = 2..8", [&] {
    for (u32 r = 2; r <= 8; ++r) {
      const AlgebraSpec a =
          product_algebra(std::vector<AlgebraSpec>(r, simple_algebra(1, 1, 2, 1)));
      const DExact dx = d_exact(a);
      const u32 expected = static_cast<u32>(std::ceil(std::log2(double(r))));
      if (!dx.d || *dx.d != expected) return false;
    }
    return true;
  });

  // 18
  crit("Monte Carlo trend: P(M_n(2)) increasing for n = 2,3,4, with the zeta union bound at "
       "each point and the strict nilpotent variant on two instances",
       [&] {
         double prev = -1;
         for (u32 n = 2; n <= 4; ++n) {
           const Estimate est =
               estimate_P(simple_algebra(n, 1, 2, 1), 2, EstMethod::montecarlo, cfg);
           if (est.value <= prev) return false;
           prev = est.value;
         }
         const std::vector<AlgebraSpec> grid = {m22, m32, simple_algebra(4, 1, 2, 1)};
         for (const SuiteCheck& ch : verify_suite("second", grid, cfg))
           if (!ch.pass) return false;
         const std::vector<AlgebraSpec> nil_grid = {simple_algebra(2, 1, 2, 2), m32};
         for (const SuiteCheck& ch : verify_suite("secondnil", nil_grid, cfg))
           if (!ch.pass) return false;
         return true;
       });

  out << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
      << std::endl;
  return failures;
}

}  // namespace fqgen
