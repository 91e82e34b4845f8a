#include "fqgen/sampler.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

#include "fqgen/counting.hpp"
#include "fqgen/linalg.hpp"

namespace fqgen {

namespace {

// matrix over the factor field -> algebra coordinates through the factor basis
Vec embed_factor_matrix(const AlgebraSpec& a, const SimpleFactor& f, const Mat& M) {
  Vec out = a.zero();
  for (u32 r = 0; r < f.n; ++r)
    for (u32 c = 0; c < f.n; ++c) {
      if (!M.at(r, c)) continue;
      const auto dig = f.tower.digits(M.at(r, c));
      for (u32 s = 0; s < f.m; ++s)
        if (dig[s]) out = a.add(out, a.scale(f.basis[(r * f.n + c) * f.m + s], dig[s]));
    }
  return out;
}

Vec uniform_radical_part(const AlgebraSpec& a, RandomStream& rs) {
  Vec out = a.zero();
  const u32 q = static_cast<u32>(a.k->size());
  for (const auto& j : a.dec->radical) {
    const u32 c = rs.digit(q);
    if (c) out = a.add(out, a.scale(j, c));
  }
  return out;
}

}  // namespace

Vec uniform_element(const AlgebraSpec& a, RandomStream& rs) {
  Vec x(a.dim, 0);
  const u32 q = static_cast<u32>(a.k->size());
  for (u32 i = 0; i < a.dim; ++i) x[i] = rs.digit(q);
  return x;
}

Vec uniform_unit(const AlgebraSpec& a, RandomStream& rs, u64* tries) {
  if (a.dec) {
    Vec out = uniform_radical_part(a, rs);
    for (const auto& f : a.dec->factors)
      out = a.add(out, embed_factor_matrix(a, f, uniform_invertible(f.tower.fqm, f.n, rs, tries)));
    return out;
  }
  for (;;) {
    if (tries) ++*tries;
    Vec x = uniform_element(a, rs);
    if (a.element_is_unit(x)) return x;
  }
}

Vec uniform_nilpotent(const AlgebraSpec& a, RandomStream& rs, u64* tries) {
  if (a.dec) {
    double predicted = 1.0;
    for (const auto& f : a.dec->factors)
      predicted /= std::pow(static_cast<double>(f.tower.fqm->size()), static_cast<double>(f.n));
    if (predicted < kAcceptanceFloor)
      throw acceptance_too_low_error("nilpotent sampler: predicted acceptance below floor",
                                     predicted);
    Vec out = uniform_radical_part(a, rs);
    for (const auto& f : a.dec->factors)
      out = a.add(out,
                  embed_factor_matrix(a, f, uniform_nilpotent_matrix(f.tower.fqm, f.n, rs, tries)));
    return out;
  }
  for (;;) {
    if (tries) ++*tries;
    Vec x = uniform_element(a, rs);
    if (a.element_is_nilpotent(x)) return x;
  }
}

Mat uniform_matrix(const FieldPtr& F, u32 rows, u32 cols, RandomStream& rs) {
  Mat m(F, rows, cols);
  const u32 q = static_cast<u32>(F->size());
  for (auto& e : m.a) e = rs.digit(q);
  return m;
}

Mat uniform_invertible(const FieldPtr& F, u32 n, RandomStream& rs, u64* tries) {
  for (;;) {
    if (tries) ++*tries;
    Mat m = uniform_matrix(F, n, n, rs);
    if (is_invertible(m)) return m;
  }
}

Mat uniform_nilpotent_matrix(const FieldPtr& F, u32 n, RandomStream& rs, u64* tries) {
  const double predicted = std::pow(static_cast<double>(F->size()), -static_cast<double>(n));
  if (predicted < kAcceptanceFloor)
    throw acceptance_too_low_error("nilpotent matrix sampler: predicted acceptance below floor",
                                   predicted);
  for (;;) {
    if (tries) ++*tries;
    Mat m = uniform_matrix(F, n, n, rs);
    if (is_nilpotent_mat(m)) return m;
  }
}

Mat uniform_charpoly(const Poly& f, RandomStream& rs, u64* tries) {
  if (!f.monic() || f.deg() < 1) throw std::invalid_argument("need a monic polynomial of degree >= 1");
  const u32 n = static_cast<u32>(f.deg());
  const BigInt total = big_pow(BigInt(f.F->size()), static_cast<u64>(n) * n);
  const BigRat prediction(count_charpoly(f).value, total);
  const double predicted = prediction.convert_to<double>();
  if (predicted < kAcceptanceFloor)
    throw acceptance_too_low_error("characteristic polynomial sampler: predicted acceptance below floor",
                                   predicted);
  for (;;) {
    if (tries) ++*tries;
    Mat m = uniform_matrix(f.F, n, n, rs);
    if (charpoly(m) == f) return m;
  }
}

Mat uniform_rank(const FieldPtr& F, u32 n, u32 alpha, RandomStream& rs, u64* tries) {
  if (alpha > n) throw std::invalid_argument("rank exceeds matrix size");
  if (alpha == 0) return Mat(F, n, n);
  Mat u(F, n, alpha), v(F, alpha, n);
  for (;;) {
    if (tries) ++*tries;
    u = uniform_matrix(F, n, alpha, rs);
    if (rank(u) == alpha) break;
  }
  for (;;) {
    if (tries) ++*tries;
    v = uniform_matrix(F, alpha, n, rs);
    if (rank(v) == alpha) break;
  }
  return mat_mul(u, v);
}

double chi_square_p(const std::vector<u64>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("need matching count vectors with at least two buckets");
  double stat = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) throw std::invalid_argument("expected counts must be positive");
    const double d = static_cast<double>(observed[i]) - expected[i];
    stat += d * d / expected[i];
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace fqgen
