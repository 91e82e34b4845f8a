#include "fqgen/closure.hpp"

#include <algorithm>
#include <array>
#include <cstring>

namespace fqgen {

MulTable MulTable::compile(const AlgebraSpec& a) {
  MulTable t;
  t.dim = a.dim;
  t.q = static_cast<u32>(a.k->size());
  t.F = a.k;
  t.bits = (t.q == 2);
  if (t.bits) {
    t.t2.assign(static_cast<size_t>(a.dim) * a.dim, 0);
    for (u32 i = 0; i < a.dim; ++i)
      for (u32 j = 0; j < a.dim; ++j) {
        u64 mask = 0;
        for (const auto& [l, c] : a.prod[static_cast<size_t>(i) * a.dim + j])
          if (c & 1) mask ^= 1ull << l;
        t.t2[static_cast<size_t>(i) * a.dim + j] = mask;
      }
    t.one2 = 0;
    for (u32 i = 0; i < a.dim; ++i)
      if (a.one[i] & 1) t.one2 |= 1ull << i;
  } else {
    if (t.q > 255) throw too_large_error("scalar field too large for the byte engine");
    t.tq.assign(static_cast<size_t>(a.dim) * a.dim * a.dim, 0);
    for (u32 i = 0; i < a.dim; ++i)
      for (u32 j = 0; j < a.dim; ++j)
        for (const auto& [l, c] : a.prod[static_cast<size_t>(i) * a.dim + j])
          t.tq[(static_cast<size_t>(i) * a.dim + j) * a.dim + l] = static_cast<u8>(c);
    t.oneq.assign(a.one.begin(), a.one.end());
    t.addtab.assign(static_cast<size_t>(t.q) * t.q, 0);
    t.multab.assign(static_cast<size_t>(t.q) * t.q, 0);
    t.invtab.assign(t.q, 0);
    for (u32 x = 0; x < t.q; ++x)
      for (u32 y = 0; y < t.q; ++y) {
        t.addtab[static_cast<size_t>(x) * t.q + y] = static_cast<u8>(a.k->add(x, y));
        t.multab[static_cast<size_t>(x) * t.q + y] = static_cast<u8>(a.k->mul(x, y));
      }
    for (u32 x = 1; x < t.q; ++x) t.invtab[x] = static_cast<u8>(a.k->inv(x));
  }
  return t;
}

namespace {

// ---- q = 2 engine: subspace rows are u64 bitmasks --------------------------

struct Engine2 {
  const MulTable& t;
  u32 dim;
  u64 piv[64];       // piv[b] = stored row with highest set bit b (or 0)
  u64 rows[64];      // inserted reduced representatives, insertion order
  u32 gen[64];       // product-depth generation of each row
  u32 nrows = 0;
  u32 rank_ = 0;
  u32 maxgen_ = 0;

  explicit Engine2(const MulTable& tab) : t(tab), dim(tab.dim) { std::memset(piv, 0, sizeof piv); }

  bool insert(u64 v, u32 g) {
    while (v) {
      const u32 b = 63 - static_cast<u32>(__builtin_clzll(v));
      if (piv[b])
        v ^= piv[b];
      else {
        piv[b] = v;
        rows[nrows] = v;
        gen[nrows] = g;
        ++nrows;
        ++rank_;
        maxgen_ = std::max(maxgen_, g);
        return true;
      }
    }
    return false;
  }

  u64 mul(u64 u, u64 v) const {
    // accumulate U[j] = xor_{i in supp(u)} T[i][j] lazily is worthwhile only
    // per processed row; this plain version serves one-off products.
    u64 r = 0;
    u64 uu = u;
    while (uu) {
      const u32 i = static_cast<u32>(__builtin_ctzll(uu));
      uu &= uu - 1;
      const u64* ti = &t.t2[static_cast<size_t>(i) * dim];
      u64 vv = v;
      while (vv) {
        const u32 j = static_cast<u32>(__builtin_ctzll(vv));
        vv &= vv - 1;
        r ^= ti[j];
      }
    }
    return r;
  }

  // run closure; if target > 0, stop early once rank reaches it
  u32 close(u32 target, u32* rounds_out) {
    u32 done = 0;
    u64 U[64], W[64];
    while (done < nrows) {
      const u64 u = rows[done];
      const u32 gu = gen[done];
      ++done;
      for (u32 j = 0; j < dim; ++j) {
        U[j] = 0;
        W[j] = 0;
      }
      u64 uu = u;
      while (uu) {
        const u32 i = static_cast<u32>(__builtin_ctzll(uu));
        uu &= uu - 1;
        const u64* ti = &t.t2[static_cast<size_t>(i) * dim];
        for (u32 j = 0; j < dim; ++j) U[j] ^= ti[j];            // U[j] = u * b_j
        for (u32 j = 0; j < dim; ++j) W[j] ^= t.t2[static_cast<size_t>(j) * dim + i];  // W[j] = b_j * u
      }
      for (u32 r = 0; r < nrows; ++r) {
        const u64 v = rows[r];
        const u32 g = std::max(gu, gen[r]) + 1;
        u64 p1 = 0, p2 = 0;
        u64 vv = v;
        while (vv) {
          const u32 j = static_cast<u32>(__builtin_ctzll(vv));
          vv &= vv - 1;
          p1 ^= U[j];
          p2 ^= W[j];
        }
        if (insert(p1, g) && rank_ == target) {
          if (rounds_out) *rounds_out = maxgen_;
          return rank_;
        }
        if (insert(p2, g) && rank_ == target) {
          if (rounds_out) *rounds_out = maxgen_;
          return rank_;
        }
      }
    }
    if (rounds_out) *rounds_out = maxgen_;
    return rank_;
  }
};

// ---- generic byte engine ----------------------------------------------------

struct EngineQ {
  const MulTable& t;
  u32 dim, q;
  std::array<i64, 64> pivrow;                    // pivrow[c] = row index with pivot at c
  std::vector<std::array<u8, 64>> rows;          // normalized reduced representatives
  std::vector<u32> gen;
  u32 rank_ = 0;
  u32 maxgen_ = 0;

  explicit EngineQ(const MulTable& tab) : t(tab), dim(tab.dim), q(tab.q) { pivrow.fill(-1); }

  u8 fadd(u8 a, u8 b) const { return t.addtab[static_cast<size_t>(a) * q + b]; }
  u8 fmul(u8 a, u8 b) const { return t.multab[static_cast<size_t>(a) * q + b]; }
  u8 fsub(u8 a, u8 b) const {
    // a - b: scan for c with b + c == a is avoidable: b + (a - b); store neg via addtab search
    // cheaper: precomputed in insert path only through scaled rows; use add of additive inverse
    return fadd(a, negtab_[b]);
  }
  std::array<u8, 256> negtab_{};

  void init_neg() {
    for (u32 x = 0; x < q; ++x)
      for (u32 y = 0; y < q; ++y)
        if (fadd(static_cast<u8>(x), static_cast<u8>(y)) == 0) negtab_[x] = static_cast<u8>(y);
  }

  bool insert(std::array<u8, 64>& v, u32 g) {
    for (u32 c = 0; c < dim; ++c) {
      if (v[c] == 0) continue;
      if (pivrow[c] >= 0) {
        const auto& row = rows[static_cast<size_t>(pivrow[c])];
        const u8 f = v[c];
        for (u32 cc = c; cc < dim; ++cc)
          if (row[cc]) v[cc] = fsub(v[cc], fmul(f, row[cc]));
      } else {
        const u8 inv = t.invtab[v[c]];
        if (inv != 1)
          for (u32 cc = c; cc < dim; ++cc) v[cc] = fmul(v[cc], inv);
        pivrow[c] = static_cast<i64>(rows.size());
        rows.push_back(v);
        gen.push_back(g);
        ++rank_;
        maxgen_ = std::max(maxgen_, g);
        return true;
      }
    }
    return false;
  }

  u32 close(u32 target, u32* rounds_out) {
    u32 done = 0;
    // U[j][l]: coordinates of u * b_j; W[j][l]: of b_j * u
    std::vector<u8> U(static_cast<size_t>(dim) * dim), W(static_cast<size_t>(dim) * dim);
    while (done < rows.size()) {
      const auto u = rows[done];         // copy: rows may reallocate
      const u32 gu = gen[done];
      ++done;
      std::fill(U.begin(), U.end(), 0);
      std::fill(W.begin(), W.end(), 0);
      for (u32 i = 0; i < dim; ++i) {
        if (u[i] == 0) continue;
        for (u32 j = 0; j < dim; ++j) {
          const u8* tij = &t.tq[(static_cast<size_t>(i) * dim + j) * dim];
          u8* uj = &U[static_cast<size_t>(j) * dim];
          for (u32 l = 0; l < dim; ++l)
            if (tij[l]) uj[l] = fadd(uj[l], fmul(u[i], tij[l]));
          const u8* tji = &t.tq[(static_cast<size_t>(j) * dim + i) * dim];
          u8* wj = &W[static_cast<size_t>(j) * dim];
          for (u32 l = 0; l < dim; ++l)
            if (tji[l]) wj[l] = fadd(wj[l], fmul(u[i], tji[l]));
        }
      }
      for (size_t r = 0; r < rows.size(); ++r) {
        const auto v = rows[r];
        const u32 g = std::max(gu, gen[r]) + 1;
        std::array<u8, 64> p1{}, p2{};
        for (u32 j = 0; j < dim; ++j) {
          if (v[j] == 0) continue;
          const u8* uj = &U[static_cast<size_t>(j) * dim];
          const u8* wj = &W[static_cast<size_t>(j) * dim];
          for (u32 l = 0; l < dim; ++l) {
            if (uj[l]) p1[l] = fadd(p1[l], fmul(v[j], uj[l]));
            if (wj[l]) p2[l] = fadd(p2[l], fmul(v[j], wj[l]));
          }
        }
        if (insert(p1, g) && rank_ == target) {
          if (rounds_out) *rounds_out = maxgen_;
          return rank_;
        }
        if (insert(p2, g) && rank_ == target) {
          if (rounds_out) *rounds_out = maxgen_;
          return rank_;
        }
      }
    }
    if (rounds_out) *rounds_out = maxgen_;
    return rank_;
  }
};

u64 vec_to_mask(const Vec& v) {
  u64 m = 0;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] & 1) m |= 1ull << i;
  return m;
}

}  // namespace

ClosureResult generated_subalgebra(const MulTable& t, const std::vector<Vec>& xs) {
  ClosureResult res;
  if (t.bits) {
    Engine2 e(t);
    e.insert(t.one2, 0);
    for (const auto& x : xs) e.insert(vec_to_mask(x), 0);
    u32 rounds = 0;
    e.close(0, &rounds);
    res.dim = e.rank_;
    res.rounds = rounds;
    res.generates = (e.rank_ == t.dim);
    std::vector<Vec> vecs;
    for (u32 r = 0; r < e.nrows; ++r) {
      Vec v(t.dim, 0);
      for (u32 b = 0; b < t.dim; ++b)
        if (e.rows[r] >> b & 1) v[b] = 1;
      vecs.push_back(std::move(v));
    }
    res.basis = span_rref(t.F, vecs);
  } else {
    EngineQ e(t);
    e.init_neg();
    std::array<u8, 64> w{};
    for (u32 i = 0; i < t.dim; ++i) w[i] = t.oneq[i];
    e.insert(w, 0);
    for (const auto& x : xs) {
      std::array<u8, 64> y{};
      for (u32 i = 0; i < t.dim; ++i) y[i] = static_cast<u8>(x[i]);
      e.insert(y, 0);
    }
    u32 rounds = 0;
    e.close(0, &rounds);
    res.dim = e.rank_;
    res.rounds = rounds;
    res.generates = (e.rank_ == t.dim);
    std::vector<Vec> vecs;
    for (const auto& row : e.rows) {
      Vec v(t.dim, 0);
      for (u32 b = 0; b < t.dim; ++b) v[b] = row[b];
      vecs.push_back(std::move(v));
    }
    res.basis = span_rref(t.F, vecs);
  }
  return res;
}

bool generates(const MulTable& t, const std::vector<Vec>& xs) {
  if (t.bits) {
    Engine2 e(t);
    e.insert(t.one2, 0);
    for (const auto& x : xs) e.insert(vec_to_mask(x), 0);
    if (e.rank_ == t.dim) return true;
    return e.close(t.dim, nullptr) == t.dim;
  }
  EngineQ e(t);
  e.init_neg();
  std::array<u8, 64> w{};
  for (u32 i = 0; i < t.dim; ++i) w[i] = t.oneq[i];
  e.insert(w, 0);
  for (const auto& x : xs) {
    std::array<u8, 64> y{};
    for (u32 i = 0; i < t.dim; ++i) y[i] = static_cast<u8>(x[i]);
    e.insert(y, 0);
  }
  if (e.rank_ == t.dim) return true;
  return e.close(t.dim, nullptr) == t.dim;
}

bool generates_codes(const MulTable& t, const u64* codes, u32 count) {
  if (t.bits) {
    Engine2 e(t);
    e.insert(t.one2, 0);
    for (u32 i = 0; i < count; ++i) e.insert(codes[i], 0);
    if (e.rank_ == t.dim) return true;
    return e.close(t.dim, nullptr) == t.dim;
  }
  EngineQ e(t);
  e.init_neg();
  std::array<u8, 64> w{};
  for (u32 i = 0; i < t.dim; ++i) w[i] = t.oneq[i];
  e.insert(w, 0);
  for (u32 i = 0; i < count; ++i) {
    u64 c = codes[i];
    std::array<u8, 64> y{};
    for (u32 d = 0; d < t.dim; ++d) {
      y[d] = static_cast<u8>(c % t.q);
      c /= t.q;
    }
    e.insert(y, 0);
  }
  if (e.rank_ == t.dim) return true;
  return e.close(t.dim, nullptr) == t.dim;
}

DExact d_exact(const AlgebraSpec& a, u32 cap, u64 budget) {
  const MulTable t = MulTable::compile(a);
  DExact out;
  const u64 sz = a.size();
  std::vector<u64> tuple;
  for (u32 d = 0; d <= cap; ++d) {
    // lexicographic odometer over d-tuples of element codes
    tuple.assign(d, 0);
    u64 calls = 0;
    bool exceeded = false;
    for (;;) {
      if (calls >= budget) {
        exceeded = true;
        break;
      }
      ++calls;
      if (generates_codes(t, tuple.data(), d)) {
        out.d = d;
        out.witness = tuple;
        out.closure_calls += calls;
        return out;
      }
      // advance odometer (most significant digit first == lexicographic)
      i64 pos = static_cast<i64>(d) - 1;
      while (pos >= 0 && tuple[static_cast<size_t>(pos)] == sz - 1) {
        tuple[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++tuple[static_cast<size_t>(pos)];
    }
    out.closure_calls += calls;
    if (exceeded) {
      out.budget_exceeded = true;
      return out;  // exhausted == d - 1 levels fully ruled out
    }
    out.exhausted = d;
  }
  return out;
}

}  // namespace fqgen
