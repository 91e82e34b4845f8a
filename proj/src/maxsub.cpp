#include "fqgen/maxsub.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace fqgen {

namespace {

constexpr u64 kOrbitUnitLimit = 1ull << 20;   // class_size orbit guard on |A^x|
constexpr u64 kOrbitStateLimit = 1ull << 22;  // visited-subalgebra guard
constexpr u64 kRadicalEnumLimit = 1ull << 14; // guard on |1 + J|
constexpr u64 kDualEnumLimit = 1ull << 20;    // guard on |V*|

bool is_simple_spec(const AlgebraSpec& a) {
  return a.dec && a.dec->factors.size() == 1 && a.dec->radical.empty() &&
         a.dec->factors[0].basis.size() == a.dim;
}

const Decomposition& require_dec(const AlgebraSpec& a) {
  if (!a.dec) throw std::invalid_argument("maximal-subalgebra enumeration needs the decomposition");
  return *a.dec;
}

u32 power_basis_code(const FieldTower& t, u32 s) {
  u64 c = 1;
  for (u32 i = 0; i < s; ++i) c *= t.q;
  return static_cast<u32>(c);
}

// exponent c with index == q^c
u64 q_exponent(BigInt index, u64 q) {
  u64 c = 0;
  while (index > 1) {
    if (index % q != 0) throw std::logic_error("index is not a power of q");
    index /= q;
    ++c;
  }
  return c;
}

std::string span_key(const std::vector<Vec>& rref_rows) {
  std::string key;
  key.reserve(rref_rows.size() * (rref_rows.empty() ? 0 : rref_rows[0].size()));
  for (const auto& r : rref_rows)
    for (u32 v : r) key.push_back(static_cast<char>(v));
  return key;
}

// ---- simple case -----------------------------------------------------------

std::vector<SubalgebraClass> simple_reps(const AlgebraSpec& a) {
  const SimpleFactor& f = a.dec->factors[0];
  const u32 n = f.n, m = f.m;
  const u64 q = f.tower.q;
  std::vector<SubalgebraClass> out;
  auto idx = [n, m](u32 r, u32 c, u32 s) { return (r * n + c) * m + s; };
  for (u32 l = 1; l < n; ++l) {
    SubalgebraClass cl;
    cl.kind = SubalgebraClass::Kind::S1;
    cl.param = l;
    cl.index = big_pow(BigInt(q), static_cast<u64>(m) * l * (n - l));
    std::vector<Vec> basis;
    for (u32 r = 0; r < n; ++r)
      for (u32 c = 0; c < n; ++c) {
        if (r >= l && c < l) continue;  // below-diagonal block
        for (u32 s = 0; s < m; ++s) basis.push_back(f.basis[idx(r, c, s)]);
      }
    cl.rep_basis = span_rref(a.k, basis);
    cl.label = "S1(l=" + std::to_string(l) + ")";
    out.push_back(std::move(cl));
  }
  for (u64 av : prime_divisors(n)) {
    const u32 ap = static_cast<u32>(av);
    SubalgebraClass cl;
    cl.kind = SubalgebraClass::Kind::S2;
    cl.param = ap;
    cl.index = big_pow(BigInt(q), static_cast<u64>(m) * n * n - static_cast<u64>(m) * n * n / ap);
    cl.rep_basis = span_rref(a.k, embed_inner(a, ap));
    cl.label = "S2(a=" + std::to_string(ap) + ")";
    out.push_back(std::move(cl));
  }
  for (u64 bv : prime_divisors(m)) {
    const u32 bp = static_cast<u32>(bv);
    SubalgebraClass cl;
    cl.kind = SubalgebraClass::Kind::S3;
    cl.param = bp;
    cl.index = big_pow(BigInt(q), static_cast<u64>(m) * n * n - static_cast<u64>(m) * n * n / bp);
    cl.rep_basis = span_rref(a.k, embed_subfield(a, bp));
    cl.label = "S3(b=" + std::to_string(bp) + ")";
    out.push_back(std::move(cl));
  }
  return out;
}

// ---- decomposed case -------------------------------------------------------

// w in factor coordinates (length n^2 m) -> algebra coordinates
Vec embed_factor_vec(const AlgebraSpec& a, const SimpleFactor& f, const Vec& w) {
  Vec out = a.zero();
  for (size_t t = 0; t < w.size(); ++t)
    if (w[t]) out = a.add(out, a.scale(f.basis[t], w[t]));
  return out;
}

// everything outside factor j, radical included
std::vector<Vec> complement_span(const AlgebraSpec& a, u32 j) {
  std::vector<Vec> vecs;
  const auto& dec = *a.dec;
  for (u32 i = 0; i < dec.factors.size(); ++i) {
    if (i == j) continue;
    for (const auto& v : dec.factors[i].basis) vecs.push_back(v);
  }
  for (const auto& v : dec.radical) vecs.push_back(v);
  return vecs;
}

// solve sum_i c_i rows[i] = w; rows must be independent
Vec coords_in_span(const FieldPtr& F, const std::vector<Vec>& rows, const Vec& w) {
  const u32 k = static_cast<u32>(rows.size());
  const u32 d = static_cast<u32>(w.size());
  Mat aug(F, d, k + 1);
  for (u32 c = 0; c < k; ++c)
    for (u32 r = 0; r < d; ++r) aug.at(r, c) = rows[c][r];
  for (u32 r = 0; r < d; ++r) aug.at(r, k) = w[r];
  const auto piv = rref(aug);
  Vec coeff(k, 0);
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == k) throw std::logic_error("vector not in span");
    coeff[piv[i]] = aug.at(static_cast<u32>(i), k);
  }
  return coeff;
}

std::vector<Vec> bimodule_closure(const FieldPtr& F, const std::vector<Mat>& acts, const Vec& seed) {
  std::vector<Vec> basis = span_rref(F, {seed});
  for (;;) {
    std::vector<Vec> next = basis;
    for (const auto& M : acts)
      for (const auto& b : basis) {
        Vec w(b.size(), 0);
        for (u32 r = 0; r < M.rows; ++r) {
          u32 acc = 0;
          for (u32 c = 0; c < M.cols; ++c)
            if (M.at(r, c) && b[c]) acc = F->add(acc, F->mul(M.at(r, c), b[c]));
          w[r] = acc;
        }
        next.push_back(std::move(w));
      }
    next = span_rref(F, next);
    if (next.size() == basis.size()) return next;
    basis = std::move(next);
  }
}

struct T3Data {
  std::vector<Vec> vbasis;          // coset representatives of J/J^2 inside A
  std::vector<Vec> j2;              // canonical basis of J^2
  std::vector<Mat> acts;            // left+right actions of the semisimple basis on V
};

T3Data radical_quotient(const AlgebraSpec& a) {
  const auto& dec = *a.dec;
  T3Data d;
  d.j2 = (dec.radical_powers.size() >= 2) ? span_rref(a.k, dec.radical_powers[1])
                                          : std::vector<Vec>{};
  std::vector<Vec> running = d.j2;
  for (const auto& v : dec.radical) {
    const Vec rv = span_reduce(a.k, running, v);
    if (a.is_zero(rv)) continue;
    d.vbasis.push_back(rv);
    running.push_back(rv);
    running = span_rref(a.k, running);
  }
  const u32 dv = static_cast<u32>(d.vbasis.size());
  // rows spanning V + J^2 for coordinate extraction
  std::vector<Vec> frame = d.vbasis;
  for (const auto& v : d.j2) frame.push_back(v);
  std::vector<Vec> sbasis;
  for (const auto& f : dec.factors)
    for (const auto& v : f.basis) sbasis.push_back(v);
  for (const auto& s : sbasis) {
    Mat L(a.k, dv, dv), R(a.k, dv, dv);
    for (u32 t = 0; t < dv; ++t) {
      const Vec lv = a.mul(s, d.vbasis[t]);
      const Vec rv = a.mul(d.vbasis[t], s);
      const Vec lc = coords_in_span(a.k, frame, lv);
      const Vec rc = coords_in_span(a.k, frame, rv);
      for (u32 r = 0; r < dv; ++r) {
        L.at(r, t) = lc[r];
        R.at(r, t) = rc[r];
      }
    }
    d.acts.push_back(std::move(L));
    d.acts.push_back(std::move(R));
  }
  return d;
}

// distinct maximal sub-bimodules of V = J/J^2, each returned as a lifted
// basis (coset reps combined per kernel vector) united with J^2
std::vector<std::vector<Vec>> maximal_radical_subbimodules(const AlgebraSpec& a, const T3Data& d) {
  const u32 dv = static_cast<u32>(d.vbasis.size());
  if (dv == 0) return {};
  const u64 q = a.k->size();
  u64 total = 1;
  for (u32 i = 0; i < dv; ++i) {
    total *= q;
    if (total > kDualEnumLimit) throw too_large_error("radical quotient too large to enumerate");
  }
  // dual actions: transposes
  std::vector<Mat> dual_acts;
  for (const auto& M : d.acts) dual_acts.push_back(mat_transpose(M));
  // all distinct cyclic submodules of V*
  std::map<std::string, std::vector<Vec>> cyclic;
  for (u64 code = 1; code < total; ++code) {
    Vec phi(dv, 0);
    u64 rest = code;
    for (u32 i = 0; i < dv; ++i) {
      phi[i] = static_cast<u32>(rest % q);
      rest /= q;
    }
    auto cl = bimodule_closure(a.k, dual_acts, phi);
    std::string key = span_key(cl);
    cyclic.emplace(std::move(key), std::move(cl));
  }
  // minimal = containing no strictly smaller cyclic submodule
  std::vector<std::vector<Vec>> minimal;
  for (const auto& [key, dmod] : cyclic) {
    bool is_min = true;
    for (const auto& [key2, dmod2] : cyclic) {
      if (key2 == key || dmod2.size() >= dmod.size()) continue;
      bool inside = true;
      for (const auto& row : dmod2)
        if (!span_contains(a.k, dmod, row)) {
          inside = false;
          break;
        }
      if (inside) {
        is_min = false;
        break;
      }
    }
    if (is_min) minimal.push_back(dmod);
  }
  // annihilators, lifted
  std::vector<std::vector<Vec>> out;
  for (const auto& dmod : minimal) {
    Mat phi(a.k, static_cast<u32>(dmod.size()), dv);
    for (u32 r = 0; r < phi.rows; ++r)
      for (u32 c = 0; c < dv; ++c) phi.at(r, c) = dmod[r][c];
    const auto ker = kernel_basis(phi);
    std::vector<Vec> lifted = d.j2;
    for (const auto& h : ker) {
      Vec w = a.zero();
      for (u32 t = 0; t < dv; ++t)
        if (h[t]) w = a.add(w, a.scale(d.vbasis[t], h[t]));
      lifted.push_back(std::move(w));
    }
    out.push_back(span_rref(a.k, lifted));
  }
  return out;
}

std::vector<SubalgebraClass> general_reps(const AlgebraSpec& a) {
  const auto& dec = *a.dec;
  const u64 q = a.k->size();
  std::vector<SubalgebraClass> out;
  // T1: factor-local maximal subalgebras
  for (u32 j = 0; j < dec.factors.size(); ++j) {
    const SimpleFactor& f = dec.factors[j];
    const AlgebraSpec fs = simple_algebra(f.n, f.m, f.tower);
    const auto rest = complement_span(a, j);
    for (const auto& inner : standard_reps(fs)) {
      SubalgebraClass cl;
      cl.kind = SubalgebraClass::Kind::T1;
      cl.factor = j;
      cl.inner_kind = inner.kind;
      cl.param = inner.param;
      cl.index = inner.index;
      std::vector<Vec> basis = rest;
      for (const auto& w : inner.rep_basis) basis.push_back(embed_factor_vec(a, f, w));
      cl.rep_basis = span_rref(a.k, basis);
      cl.label = "T1(j=" + std::to_string(j) + ", " + inner.label + ")";
      out.push_back(std::move(cl));
    }
  }
  // T2: Galois-twisted diagonals of isomorphic factor pairs
  for (u32 j1 = 0; j1 < dec.factors.size(); ++j1)
    for (u32 j2 = j1 + 1; j2 < dec.factors.size(); ++j2) {
      const SimpleFactor& f1 = dec.factors[j1];
      const SimpleFactor& f2 = dec.factors[j2];
      if (f1.n != f2.n || f1.m != f2.m) continue;
      const u32 n = f1.n, m = f1.m;
      std::vector<Vec> rest;
      for (u32 i = 0; i < dec.factors.size(); ++i) {
        if (i == j1 || i == j2) continue;
        for (const auto& v : dec.factors[i].basis) rest.push_back(v);
      }
      for (const auto& v : dec.radical) rest.push_back(v);
      for (u32 k = 0; k < m; ++k) {
        SubalgebraClass cl;
        cl.kind = SubalgebraClass::Kind::T2;
        cl.factor = j1;
        cl.factor2 = j2;
        cl.param = k;
        cl.index = big_pow(BigInt(q), static_cast<u64>(n) * n * m);
        std::vector<Vec> basis = rest;
        for (u32 r = 0; r < n; ++r)
          for (u32 c = 0; c < n; ++c)
            for (u32 s = 0; s < m; ++s) {
              Vec d = f1.basis[(r * n + c) * m + s];
              const u32 fr = f1.tower.frobenius(power_basis_code(f1.tower, s), k);
              const auto dig = f1.tower.digits(fr);
              for (u32 s2 = 0; s2 < m; ++s2)
                if (dig[s2]) d = a.add(d, a.scale(f2.basis[(r * n + c) * m + s2], dig[s2]));
              basis.push_back(std::move(d));
            }
        cl.rep_basis = span_rref(a.k, basis);
        cl.label = "T2(j=" + std::to_string(j1) + "," + std::to_string(j2) +
                   ", twist=" + std::to_string(k) + ")";
        out.push_back(std::move(cl));
      }
    }
  // T3: S (+) H for maximal sub-bimodules H of J containing J^2
  if (!dec.radical.empty()) {
    const T3Data d = radical_quotient(a);
    std::vector<Vec> sbasis;
    for (const auto& f : dec.factors)
      for (const auto& v : f.basis) sbasis.push_back(v);
    std::set<std::string> seen;
    u32 ordinal = 0;
    for (const auto& h : maximal_radical_subbimodules(a, d)) {
      std::vector<Vec> basis = sbasis;
      for (const auto& v : h) basis.push_back(v);
      auto rep = span_rref(a.k, basis);
      if (seen.count(span_key(rep))) continue;  // already in an enumerated orbit
      const auto orbit = subalgebra_orbit(a, rep);
      for (const auto& member : orbit) seen.insert(span_key(member));
      SubalgebraClass cl;
      cl.kind = SubalgebraClass::Kind::T3;
      cl.param = ordinal++;
      cl.index = big_pow(BigInt(q), a.dim - static_cast<u64>(rep.size()));
      cl.class_size = BigInt(orbit.size());
      cl.rep_basis = std::move(rep);
      cl.label = "T3(#" + std::to_string(cl.param) + ")";
      out.push_back(std::move(cl));
    }
  }
  return out;
}

BigInt s1_class_size(u32 n, u32 m, u64 q, u32 l) {
  const BigInt t = big_pow(BigInt(q), m);
  BigInt punits = big_pow(t, static_cast<u64>(l) * (n - l));
  punits *= gl_order(l, t);
  punits *= gl_order(n - l, t);
  return gl_order(n, t) / punits;
}

BigInt s3_class_size(u32 n, u32 m, u64 q, u32 b) {
  const BigInt t = big_pow(BigInt(q), m);
  const BigInt tsub = big_pow(BigInt(q), m / b);
  // |A^x| (t^{1/b} - 1) / (|B^x| (t - 1))
  return gl_order(n, t) * (tsub - 1) / (gl_order(n, tsub) * (t - 1));
}

}  // namespace

std::vector<Vec> unit_conjugation_generators(const AlgebraSpec& a) {
  const auto& dec = require_dec(a);
  std::vector<Vec> gens;
  for (const auto& f : dec.factors) {
    const u32 n = f.n, m = f.m;
    for (u32 i = 0; i < n; ++i)
      for (u32 j = 0; j < n; ++j) {
        if (i == j) continue;
        for (u32 s = 0; s < m; ++s)
          gens.push_back(a.add(a.one, f.basis[(i * n + j) * m + s]));
      }
    const u64 t = f.tower.fqm->size();
    if (t > 2) {
      const u32 gamma = f.tower.fqm->generator();
      const auto dig = f.tower.digits(f.tower.fqm->sub(gamma, 1));
      Vec g = a.one;
      for (u32 s = 0; s < m; ++s)
        if (dig[s]) g = a.add(g, a.scale(f.basis[(0 * n + 0) * m + s], dig[s]));
      gens.push_back(std::move(g));
    }
  }
  if (!dec.radical.empty()) {
    const u64 q = a.k->size();
    u64 total = 1;
    for (size_t i = 0; i < dec.radical.size(); ++i) {
      total *= q;
      if (total > kRadicalEnumLimit) throw too_large_error("radical too large to enumerate 1 + J");
    }
    for (u64 code = 1; code < total; ++code) {
      Vec r = a.zero();
      u64 rest = code;
      for (const auto& rb : dec.radical) {
        const u32 c = static_cast<u32>(rest % q);
        rest /= q;
        if (c) r = a.add(r, a.scale(rb, c));
      }
      gens.push_back(a.add(a.one, r));
    }
  }
  return gens;
}

std::vector<std::vector<Vec>> subalgebra_orbit(const AlgebraSpec& a, const std::vector<Vec>& basis) {
  const auto gens = unit_conjugation_generators(a);
  std::vector<std::pair<Vec, Vec>> conj;
  conj.reserve(gens.size());
  for (const auto& g : gens) conj.emplace_back(g, a.element_inverse(g));
  std::map<std::string, std::vector<Vec>> visited;
  std::deque<const std::vector<Vec>*> queue;
  auto start = span_rref(a.k, basis);
  auto key0 = span_key(start);
  auto seed = visited.emplace(std::move(key0), std::move(start));
  queue.push_back(&seed.first->second);
  while (!queue.empty()) {
    const std::vector<Vec>& cur = *queue.front();
    queue.pop_front();
    for (const auto& [g, gi] : conj) {
      std::vector<Vec> moved;
      moved.reserve(cur.size());
      for (const auto& x : cur) moved.push_back(a.mul(g, a.mul(x, gi)));
      auto rr = span_rref(a.k, moved);
      std::string key = span_key(rr);
      auto [it, inserted] = visited.emplace(std::move(key), std::move(rr));
      if (inserted) {
        if (visited.size() > kOrbitStateLimit) throw too_large_error("conjugation orbit too large");
        queue.push_back(&it->second);
      }
    }
  }
  std::vector<std::vector<Vec>> out;
  out.reserve(visited.size());
  for (auto& [key, b] : visited) out.push_back(std::move(b));
  return out;
}

std::vector<SubalgebraClass> standard_reps(const AlgebraSpec& a) {
  require_dec(a);
  if (is_simple_spec(a)) return simple_reps(a);
  return general_reps(a);
}

BigInt class_size(const AlgebraSpec& a, const SubalgebraClass& rep) {
  if (rep.class_size > 0) return rep.class_size;
  using K = SubalgebraClass::Kind;
  if (is_simple_spec(a)) {
    const SimpleFactor& f = a.dec->factors[0];
    if (rep.kind == K::S1 && (rep.param == 1 || rep.param + 1 == f.n))
      return s1_class_size(f.n, f.m, f.tower.q, rep.param);
    if (rep.kind == K::S3) return s3_class_size(f.n, f.m, f.tower.q, rep.param);
  } else if (rep.kind == K::T1) {
    const SimpleFactor& f = a.dec->factors[rep.factor];
    const AlgebraSpec fs = simple_algebra(f.n, f.m, f.tower);
    for (const auto& inner : standard_reps(fs))
      if (inner.kind == rep.inner_kind && inner.param == rep.param) return class_size(fs, inner);
    throw std::logic_error("factor-local class not found");
  } else if (rep.kind == K::T2) {
    const SimpleFactor& f = a.dec->factors[rep.factor];
    return pgl_order(f.n, BigInt(f.tower.fqm->size()));
  }
  // orbit fallback (S1 with middle l, S2, T3 without cached size)
  if (algebra_units(a) > kOrbitUnitLimit)
    throw too_large_error("unit group too large for orbit enumeration");
  return BigInt(subalgebra_orbit(a, rep.rep_basis).size());
}

MMin m_min(const AlgebraSpec& a) {
  require_dec(a);
  if (!is_simple_spec(a)) throw std::invalid_argument("minimal index defined for simple algebras");
  const SimpleFactor& f = a.dec->factors[0];
  const u32 n = f.n, m = f.m;
  const u64 q = f.tower.q;
  if (n == 1 && m == 1) throw std::invalid_argument("minimal index undefined for the base field");
  MMin out;
  if (n == 1) {
    const u32 p = static_cast<u32>(prime_divisors(m).front());
    out.value = big_pow(BigInt(q), m - m / p);
  } else if (n == 2) {
    out.value = big_pow(BigInt(q), m);
  } else {
    out.value = big_pow(BigInt(q), static_cast<u64>(m) * (n - 1));
  }
  for (auto& cl : standard_reps(a))
    if (cl.index == out.value) out.witnesses.push_back(std::move(cl));
  if (out.witnesses.empty()) throw std::logic_error("no witness class at the minimal index");
  return out;
}

BigRat kappa(const AlgebraSpec& a) {
  require_dec(a);
  if (!is_simple_spec(a)) throw std::invalid_argument("kappa defined for simple algebras");
  const SimpleFactor& f = a.dec->factors[0];
  if (f.n <= 1) throw std::invalid_argument("kappa defined for n > 1");
  const u32 n = f.n, m = f.m;
  const u64 q = f.tower.q;
  const u32 xi = (n > 2) ? 2 : 1;
  const BigInt qm = big_pow(BigInt(q), m);
  const BigInt qmn = big_pow(BigInt(q), static_cast<u64>(m) * n);
  return BigRat(BigInt(xi) * (qmn - 1),
                big_pow(BigInt(q), static_cast<u64>(m) * (n - 1)) * (qm - 1));
}

std::map<BigInt, BigInt> m_n_counts(const AlgebraSpec& a) {
  std::map<BigInt, BigInt> out;
  for (const auto& cl : standard_reps(a)) out[cl.index] += class_size(a, cl);
  return out;
}

std::vector<std::vector<Vec>> all_maximal_subalgebras(const AlgebraSpec& a) {
  std::map<std::string, std::vector<Vec>> seen;
  for (const auto& cl : standard_reps(a)) {
    auto orbit = subalgebra_orbit(a, cl.rep_basis);
    if (cl.class_size > 0 && cl.class_size != BigInt(orbit.size()))
      throw std::logic_error("orbit size disagrees with the recorded class size");
    for (auto& member : orbit) seen.emplace(span_key(member), std::move(member));
  }
  std::vector<std::vector<Vec>> out;
  out.reserve(seen.size());
  for (auto& [key, b] : seen) out.push_back(std::move(b));
  return out;
}

BonferroniBounds bonferroni(const AlgebraSpec& a, u32 d) {
  const auto subs = all_maximal_subalgebras(a);
  const u64 q = a.k->size();
  BonferroniBounds out;
  out.upper = 0;
  auto index_term = [&](u64 dim_b) {
    // [A : B]^{-d} = q^{-d (dim A - dim B)}
    return BigRat(1, big_pow(BigInt(q), static_cast<u64>(d) * (a.dim - dim_b)));
  };
  for (const auto& b : subs) out.upper += index_term(b.size());
  out.lower = out.upper;
  for (size_t i = 0; i < subs.size(); ++i)
    for (size_t j = i + 1; j < subs.size(); ++j) {
      const auto inter = span_intersect(a.k, subs[i], subs[j]);
      out.lower -= index_term(inter.size());
    }
  return out;
}

ZetaValue zeta_general(const AlgebraSpec& a, const BigRat& eps) {
  const u64 q = a.k->size();
  std::vector<BigRat> ex;
  std::vector<u32> mult;
  for (const auto& cl : standard_reps(a)) {
    if (cl.kind == SubalgebraClass::Kind::T2 && cl.param != 0)
      continue;  // one term per merged factor pair, not per Galois twist
    ex.push_back(eps * BigRat(q_exponent(cl.index, q)));
    mult.push_back(1);
  }
  return sum_negative_q_powers(q, ex, mult);
}

}  // namespace fqgen
