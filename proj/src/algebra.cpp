#include "fqgen/algebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace fqgen {

namespace {
constexpr u32 kDimLimit = 64;

u32 power_basis_code(const FieldTower& t, u32 s) {
  u64 c = 1;
  for (u32 i = 0; i < s; ++i) c *= t.q;
  return static_cast<u32>(c);
}
}  // namespace

u64 AlgebraSpec::size() const {
  u64 s = 1;
  for (u32 i = 0; i < dim; ++i) {
    if (s > (1ull << 62) / k->size()) throw too_large_error("|A| exceeds u64 range");
    s *= k->size();
  }
  return s;
}

Vec AlgebraSpec::basis_vec(u32 i) const {
  Vec v(dim, 0);
  v[i] = 1;
  return v;
}

Vec AlgebraSpec::add(const Vec& x, const Vec& y) const {
  Vec r(dim);
  for (u32 i = 0; i < dim; ++i) r[i] = k->add(x[i], y[i]);
  return r;
}

Vec AlgebraSpec::sub(const Vec& x, const Vec& y) const {
  Vec r(dim);
  for (u32 i = 0; i < dim; ++i) r[i] = k->sub(x[i], y[i]);
  return r;
}

Vec AlgebraSpec::scale(const Vec& x, u32 s) const {
  Vec r(dim);
  for (u32 i = 0; i < dim; ++i) r[i] = k->mul(x[i], s);
  return r;
}

Vec AlgebraSpec::mul(const Vec& x, const Vec& y) const {
  Vec r(dim, 0);
  for (u32 i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    const size_t row = static_cast<size_t>(i) * dim;
    for (u32 j = 0; j < dim; ++j) {
      if (y[j] == 0) continue;
      const u32 xy = k->mul(x[i], y[j]);
      for (const auto& [l, c] : prod[row + j]) r[l] = k->add(r[l], k->mul(xy, c));
    }
  }
  return r;
}

bool AlgebraSpec::is_zero(const Vec& x) const {
  return std::all_of(x.begin(), x.end(), [](u32 v) { return v == 0; });
}

u64 AlgebraSpec::encode(const Vec& x) const {
  u64 code = 0;
  for (u32 i = dim; i-- > 0;) code = code * k->size() + x[i];
  return code;
}

Vec AlgebraSpec::decode(u64 code) const {
  Vec x(dim);
  for (u32 i = 0; i < dim; ++i) {
    x[i] = static_cast<u32>(code % k->size());
    code /= k->size();
  }
  return x;
}

Mat AlgebraSpec::left_mult_matrix(const Vec& x) const {
  Mat m(k, dim, dim);
  for (u32 i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    const size_t row = static_cast<size_t>(i) * dim;
    for (u32 j = 0; j < dim; ++j)
      for (const auto& [l, c] : prod[row + j]) m.at(l, j) = k->add(m.at(l, j), k->mul(x[i], c));
  }
  return m;
}

Mat AlgebraSpec::right_mult_matrix(const Vec& x) const {
  Mat m(k, dim, dim);
  for (u32 j = 0; j < dim; ++j) {
    if (x[j] == 0) continue;
    for (u32 i = 0; i < dim; ++i)
      for (const auto& [l, c] : prod[static_cast<size_t>(i) * dim + j])
        m.at(l, i) = k->add(m.at(l, i), k->mul(x[j], c));
  }
  return m;
}

bool AlgebraSpec::element_is_unit(const Vec& x) const { return is_invertible(left_mult_matrix(x)); }

bool AlgebraSpec::element_is_nilpotent(const Vec& x) const {
  // x nilpotent iff x^(2^s) = 0 for 2^s > dim (nilpotency index <= dim + 1)
  Vec y = x;
  u64 pw = 1;
  while (pw <= dim) {
    y = mul(y, y);
    pw <<= 1;
  }
  return is_zero(y);
}

Vec AlgebraSpec::element_inverse(const Vec& x) const {
  const Mat inv = mat_inverse(left_mult_matrix(x));
  Vec r(dim, 0);
  for (u32 i = 0; i < dim; ++i) {
    u32 acc = 0;
    for (u32 j = 0; j < dim; ++j) acc = k->add(acc, k->mul(inv.at(i, j), one[j]));
    r[i] = acc;
  }
  return r;
}

// --- validation -------------------------------------------------------------

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("algebra validation failed: ") + what);
}
}  // namespace

void AlgebraSpec::validate() const {
  require(dim > 0 && dim <= kDimLimit, "dimension out of range");
  require(prod.size() == static_cast<size_t>(dim) * dim, "structure constant table size");
  require(one.size() == dim && !is_zero(one), "unity vector");
  for (const auto& cell : prod)
    for (const auto& [l, c] : cell) require(l < dim && c != 0 && c < k->size(), "structure constant entry");

  std::vector<Vec> basis_products(static_cast<size_t>(dim) * dim);
  for (u32 i = 0; i < dim; ++i)
    for (u32 j = 0; j < dim; ++j) {
      Vec v(dim, 0);
      for (const auto& [l, c] : prod[static_cast<size_t>(i) * dim + j]) v[l] = k->add(v[l], c);
      basis_products[static_cast<size_t>(i) * dim + j] = std::move(v);
    }
  for (u32 j = 0; j < dim; ++j) {
    require(mul(one, basis_vec(j)) == basis_vec(j), "left unity");
    require(mul(basis_vec(j), one) == basis_vec(j), "right unity");
  }
  for (u32 i = 0; i < dim; ++i)
    for (u32 j = 0; j < dim; ++j)
      for (u32 l = 0; l < dim; ++l) {
        const Vec lhs = mul(basis_products[static_cast<size_t>(i) * dim + j], basis_vec(l));
        const Vec rhs = mul(basis_vec(i), basis_products[static_cast<size_t>(j) * dim + l]);
        require(lhs == rhs, "associativity");
      }

  if (!dec) return;
  const auto& d = *dec;
  u32 total = static_cast<u32>(d.radical.size());
  for (const auto& f : d.factors) total += f.n * f.n * f.m;
  require(total == dim, "decomposition dimensions");

  // direct-sum spanning
  Mat all(k, total, dim);
  u32 row = 0;
  for (const auto& f : d.factors)
    for (const auto& v : f.basis) {
      for (u32 c = 0; c < dim; ++c) all.at(row, c) = v[c];
      ++row;
    }
  for (const auto& v : d.radical) {
    for (u32 c = 0; c < dim; ++c) all.at(row, c) = v[c];
    ++row;
  }
  require(rank(all) == dim, "factor/radical bases do not span");

  const auto jspan = span_rref(k, d.radical);
  // factors multiply as matrix algebras over the power basis
  Vec esum = zero();
  for (const auto& f : d.factors) {
    const auto& t = f.tower;
    require(t.fq->size() == k->size() && t.fq->characteristic() == k->characteristic(), "factor scalar field");
    require(f.basis.size() == static_cast<size_t>(f.n) * f.n * f.m, "factor basis size");
    auto idx = [&f](u32 r, u32 c, u32 s) { return (r * f.n + c) * f.m + s; };
    for (u32 r = 0; r < f.n; ++r)
      for (u32 c = 0; c < f.n; ++c)
        for (u32 s = 0; s < f.m; ++s)
          for (u32 r2 = 0; r2 < f.n; ++r2)
            for (u32 c2 = 0; c2 < f.n; ++c2)
              for (u32 s2 = 0; s2 < f.m; ++s2) {
                const Vec got = mul(f.basis[idx(r, c, s)], f.basis[idx(r2, c2, s2)]);
                Vec want = zero();
                if (c == r2) {
                  const u32 pc = t.fqm->mul(power_basis_code(t, s), power_basis_code(t, s2));
                  const auto digitsv = t.digits(pc);
                  for (u32 tt = 0; tt < f.m; ++tt)
                    if (digitsv[tt]) want = add(want, scale(f.basis[idx(r, c2, tt)], digitsv[tt]));
                }
                require(got == want, "factor multiplication table");
              }
    Vec unity_check = zero();
    for (u32 r = 0; r < f.n; ++r) unity_check = add(unity_check, f.basis[idx(r, r, 0)]);
    require(unity_check == f.unity, "factor unity");
    esum = add(esum, f.unity);
  }
  // orthogonality across factors
  for (size_t f1 = 0; f1 < d.factors.size(); ++f1)
    for (size_t f2 = 0; f2 < d.factors.size(); ++f2) {
      if (f1 == f2) continue;
      for (const auto& v : d.factors[f1].basis)
        for (const auto& w : d.factors[f2].basis) require(is_zero(mul(v, w)), "factors not orthogonal");
    }
  require(span_contains(k, jspan, sub(one, esum)), "idempotents do not sum to 1 mod J");

  // radical: ideal, and radical_powers is the exact power chain
  for (const auto& r : d.radical)
    for (u32 i = 0; i < dim; ++i) {
      require(span_contains(k, jspan, mul(r, basis_vec(i))), "radical not a right ideal");
      require(span_contains(k, jspan, mul(basis_vec(i), r)), "radical not a left ideal");
    }
  if (!d.radical.empty()) {
    require(!d.radical_powers.empty(), "radical_powers missing");
    require(span_rref(k, d.radical_powers[0]) == jspan, "radical_powers[0] != J");
    for (size_t kk = 0; kk + 1 <= d.radical_powers.size(); ++kk) {
      std::vector<Vec> prods;
      for (const auto& u : d.radical)
        for (const auto& v : d.radical_powers[kk]) prods.push_back(mul(u, v));
      const auto next = span_rref(k, prods);
      if (kk + 1 < d.radical_powers.size())
        require(next == span_rref(k, d.radical_powers[kk + 1]), "radical_powers chain");
      else
        require(next.empty(), "radical_powers chain does not terminate");
    }
  } else {
    require(d.radical_powers.empty(), "radical_powers nonempty for semisimple algebra");
  }
}

// --- constructors -----------------------------------------------------------

AlgebraSpec simple_algebra(u32 n, u32 m, u64 p, u32 e) { return simple_algebra(n, m, make_tower(p, e, m)); }

AlgebraSpec simple_algebra(u32 n, u32 m, const FieldTower& tower) {
  if (n == 0 || m == 0) throw std::invalid_argument("need n, m >= 1");
  if (tower.m != m) throw std::invalid_argument("tower degree does not match m");
  const u32 dim = n * n * m;
  if (dim > kDimLimit) throw too_large_error("algebra dimension exceeds limit");
  AlgebraSpec a;
  a.k = tower.fq;
  a.dim = dim;
  a.prod.assign(static_cast<size_t>(dim) * dim, {});
  auto idx = [n, m](u32 r, u32 c, u32 s) { return (r * n + c) * m + s; };
  for (u32 r = 0; r < n; ++r)
    for (u32 c = 0; c < n; ++c)
      for (u32 s = 0; s < m; ++s)
        for (u32 c2 = 0; c2 < n; ++c2)
          for (u32 s2 = 0; s2 < m; ++s2) {
            // e_{rc} beta_s * e_{c c2} beta_{s2} = e_{r c2} (beta_s beta_{s2})
            const u32 pc = tower.fqm->mul(power_basis_code(tower, s), power_basis_code(tower, s2));
            const auto digitsv = tower.digits(pc);
            auto& cell = a.prod[static_cast<size_t>(idx(r, c, s)) * dim + idx(c, c2, s2)];
            for (u32 t = 0; t < m; ++t)
              if (digitsv[t]) cell.emplace_back(idx(r, c2, t), digitsv[t]);
          }
  a.one = Vec(dim, 0);
  for (u32 r = 0; r < n; ++r) a.one[idx(r, r, 0)] = 1;
  SimpleFactor f;
  f.n = n;
  f.m = m;
  f.tower = tower;
  for (u32 i = 0; i < dim; ++i) f.basis.push_back(a.basis_vec(i));
  f.unity = a.one;
  a.dec = Decomposition{{std::move(f)}, {}, {}};
  a.name = (n == 1) ? "GF(" + std::to_string(tower.q) + "," + std::to_string(m) + ")"
                    : "M(" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(tower.q) + ")";
  return a;
}

AlgebraSpec product_algebra(const std::vector<AlgebraSpec>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty product");
  const auto& k = parts[0].k;
  u32 dim = 0;
  for (const auto& p : parts) {
    if (p.k->size() != k->size() || p.k->characteristic() != k->characteristic())
      throw std::invalid_argument("product factors over different scalar fields");
    if (!p.dec) throw std::invalid_argument("product factors need decompositions");
    dim += p.dim;
  }
  if (dim > kDimLimit) throw too_large_error("algebra dimension exceeds limit");
  AlgebraSpec a;
  a.k = k;
  a.dim = dim;
  a.prod.assign(static_cast<size_t>(dim) * dim, {});
  a.one = Vec(dim, 0);
  Decomposition dec;
  u32 off = 0;
  auto lift = [dim](const Vec& v, u32 off_) {
    Vec r(dim, 0);
    std::copy(v.begin(), v.end(), r.begin() + off_);
    return r;
  };
  size_t max_pow = 0;
  for (const auto& p : parts) max_pow = std::max(max_pow, p.dec->radical_powers.size());
  dec.radical_powers.resize(max_pow);
  for (const auto& p : parts) {
    for (u32 i = 0; i < p.dim; ++i)
      for (u32 j = 0; j < p.dim; ++j) {
        auto& cell = a.prod[static_cast<size_t>(off + i) * dim + (off + j)];
        for (const auto& [l, c] : p.prod[static_cast<size_t>(i) * p.dim + j]) cell.emplace_back(off + l, c);
      }
    for (u32 i = 0; i < p.dim; ++i) a.one[off + i] = p.one[i];
    for (const auto& f : p.dec->factors) {
      SimpleFactor g;
      g.n = f.n;
      g.m = f.m;
      g.tower = f.tower;
      for (const auto& v : f.basis) g.basis.push_back(lift(v, off));
      g.unity = lift(f.unity, off);
      dec.factors.push_back(std::move(g));
    }
    for (const auto& v : p.dec->radical) dec.radical.push_back(lift(v, off));
    for (size_t kk = 0; kk < p.dec->radical_powers.size(); ++kk)
      for (const auto& v : p.dec->radical_powers[kk]) dec.radical_powers[kk].push_back(lift(v, off));
    off += p.dim;
  }
  a.dec = std::move(dec);
  a.name = "prod(";
  for (size_t i = 0; i < parts.size(); ++i) a.name += (i ? "," : "") + parts[i].name;
  a.name += ")";
  return a;
}

AlgebraSpec parabolic_algebra(const std::vector<u32>& alphas, u32 m, u64 p, u32 e) {
  if (alphas.empty() || m == 0) throw std::invalid_argument("need a composition and m >= 1");
  u32 n = 0;
  for (u32 x : alphas) {
    if (x == 0) throw std::invalid_argument("composition parts must be positive");
    n += x;
  }
  const FieldTower tower = make_tower(p, e, m);
  std::vector<u32> block_of(n);
  {
    u32 b = 0, used = 0;
    for (u32 r = 0; r < n; ++r) {
      if (r - used == alphas[b]) {
        used += alphas[b];
        ++b;
      }
      block_of[r] = b;
    }
  }
  // compact index for allowed positions (upper block triangle)
  std::vector<i64> pos(static_cast<size_t>(n) * n * m, -1);
  auto raw = [n, m](u32 r, u32 c, u32 s) { return (static_cast<size_t>(r) * n + c) * m + s; };
  u32 dim = 0;
  for (u32 r = 0; r < n; ++r)
    for (u32 c = 0; c < n; ++c)
      if (block_of[r] <= block_of[c])
        for (u32 s = 0; s < m; ++s) pos[raw(r, c, s)] = dim++;
  if (dim > kDimLimit) throw too_large_error("algebra dimension exceeds limit");
  AlgebraSpec a;
  a.k = tower.fq;
  a.dim = dim;
  a.prod.assign(static_cast<size_t>(dim) * dim, {});
  for (u32 r = 0; r < n; ++r)
    for (u32 c = 0; c < n; ++c) {
      if (block_of[r] > block_of[c]) continue;
      for (u32 c2 = 0; c2 < n; ++c2) {
        if (block_of[c] > block_of[c2]) continue;
        for (u32 s = 0; s < m; ++s)
          for (u32 s2 = 0; s2 < m; ++s2) {
            const u32 pc = tower.fqm->mul(power_basis_code(tower, s), power_basis_code(tower, s2));
            const auto digitsv = tower.digits(pc);
            auto& cell =
                a.prod[static_cast<size_t>(pos[raw(r, c, s)]) * dim + static_cast<size_t>(pos[raw(c, c2, s2)])];
            for (u32 t = 0; t < m; ++t)
              if (digitsv[t]) cell.emplace_back(static_cast<u32>(pos[raw(r, c2, t)]), digitsv[t]);
          }
      }
    }
  a.one = Vec(dim, 0);
  for (u32 r = 0; r < n; ++r) a.one[static_cast<u32>(pos[raw(r, r, 0)])] = 1;
  Decomposition dec;
  u32 row0 = 0;
  for (size_t bi = 0; bi < alphas.size(); ++bi) {
    SimpleFactor f;
    f.n = alphas[bi];
    f.m = m;
    f.tower = tower;
    for (u32 r = 0; r < f.n; ++r)
      for (u32 c = 0; c < f.n; ++c)
        for (u32 s = 0; s < m; ++s) f.basis.push_back(a.basis_vec(static_cast<u32>(pos[raw(row0 + r, row0 + c, s)])));
    f.unity = Vec(dim, 0);
    for (u32 r = 0; r < f.n; ++r) f.unity[static_cast<u32>(pos[raw(row0 + r, row0 + r, 0)])] = 1;
    dec.factors.push_back(std::move(f));
    row0 += alphas[bi];
  }
  for (u32 dist = 1; dist < alphas.size(); ++dist) {
    std::vector<Vec> layer;
    for (u32 r = 0; r < n; ++r)
      for (u32 c = 0; c < n; ++c)
        if (block_of[c] >= block_of[r] + dist)
          for (u32 s = 0; s < m; ++s) layer.push_back(a.basis_vec(static_cast<u32>(pos[raw(r, c, s)])));
    if (layer.empty()) break;
    if (dist == 1) dec.radical = layer;
    dec.radical_powers.push_back(std::move(layer));
  }
  a.dec = std::move(dec);
  a.name = "P(";
  for (size_t i = 0; i < alphas.size(); ++i) a.name += (i ? "," : "") + std::to_string(alphas[i]);
  a.name += ";" + std::to_string(m) + "," + std::to_string(tower.q) + ")";
  return a;
}

AlgebraSpec truncated_poly_algebra(u64 p, u32 e, u32 j) {
  if (j == 0) throw std::invalid_argument("need j >= 1");
  if (j > kDimLimit) throw too_large_error("algebra dimension exceeds limit");
  const FieldTower tower = make_tower(p, e, 1);
  AlgebraSpec a;
  a.k = tower.fq;
  a.dim = j;
  a.prod.assign(static_cast<size_t>(j) * j, {});
  for (u32 x = 0; x < j; ++x)
    for (u32 y = 0; y < j; ++y)
      if (x + y < j) a.prod[static_cast<size_t>(x) * j + y].emplace_back(x + y, 1);
  a.one = Vec(j, 0);
  a.one[0] = 1;
  Decomposition dec;
  SimpleFactor f;
  f.n = 1;
  f.m = 1;
  f.tower = tower;
  f.basis = {a.basis_vec(0)};
  f.unity = a.basis_vec(0);
  dec.factors.push_back(std::move(f));
  for (u32 kk = 1; kk < j; ++kk) {
    std::vector<Vec> layer;
    for (u32 t = kk; t < j; ++t) layer.push_back(a.basis_vec(t));
    if (kk == 1) dec.radical = layer;
    dec.radical_powers.push_back(std::move(layer));
  }
  a.dec = std::move(dec);
  a.name = "T(" + std::to_string(tower.q) + "," + std::to_string(j) + ")";
  return a;
}

AlgebraSpec trivial_extension(const AlgebraSpec& s, u32 vdim, const std::vector<Mat>& left_action,
                              const std::vector<Mat>& right_action) {
  if (!s.dec || !s.dec->radical.empty()) throw std::invalid_argument("trivial_extension needs a semisimple base");
  if (left_action.size() != s.dim || right_action.size() != s.dim)
    throw std::invalid_argument("need one action matrix per basis element");
  const auto& k = s.k;
  for (const auto& M : left_action)
    if (M.rows != vdim || M.cols != vdim) throw std::invalid_argument("action matrix shape");
  for (const auto& M : right_action)
    if (M.rows != vdim || M.cols != vdim) throw std::invalid_argument("action matrix shape");
  // bimodule axioms
  auto lin = [&](const std::vector<Mat>& act, const Vec& x) {
    Mat r(k, vdim, vdim);
    for (u32 i = 0; i < s.dim; ++i)
      if (x[i]) r = mat_add(r, mat_scale(act[i], x[i]));
    return r;
  };
  const Mat idv = mat_identity(k, vdim);
  if (!(lin(left_action, s.one) == idv) || !(lin(right_action, s.one) == idv))
    throw std::invalid_argument("unity must act as identity on the bimodule");
  for (u32 i = 0; i < s.dim; ++i)
    for (u32 j = 0; j < s.dim; ++j) {
      Vec bij(s.dim, 0);
      for (const auto& [l, c] : s.prod[static_cast<size_t>(i) * s.dim + j]) bij[l] = k->add(bij[l], c);
      if (!(lin(left_action, bij) == mat_mul(left_action[i], left_action[j])))
        throw std::invalid_argument("left action is not multiplicative");
      if (!(lin(right_action, bij) == mat_mul(right_action[j], right_action[i])))
        throw std::invalid_argument("right action is not anti-multiplicative");
      if (!(mat_mul(left_action[i], right_action[j]) == mat_mul(right_action[j], left_action[i])))
        throw std::invalid_argument("left and right actions do not commute");
    }
  const u32 dim = s.dim + vdim;
  if (dim > kDimLimit) throw too_large_error("algebra dimension exceeds limit");
  AlgebraSpec a;
  a.k = k;
  a.dim = dim;
  a.prod.assign(static_cast<size_t>(dim) * dim, {});
  for (u32 i = 0; i < s.dim; ++i)
    for (u32 j = 0; j < s.dim; ++j) {
      auto& cell = a.prod[static_cast<size_t>(i) * dim + j];
      for (const auto& [l, c] : s.prod[static_cast<size_t>(i) * s.dim + j]) cell.emplace_back(l, c);
    }
  for (u32 i = 0; i < s.dim; ++i)
    for (u32 j = 0; j < vdim; ++j) {
      auto& lc = a.prod[static_cast<size_t>(i) * dim + (s.dim + j)];
      for (u32 r = 0; r < vdim; ++r)
        if (left_action[i].at(r, j)) lc.emplace_back(s.dim + r, left_action[i].at(r, j));
      auto& rc = a.prod[static_cast<size_t>(s.dim + j) * dim + i];
      for (u32 r = 0; r < vdim; ++r)
        if (right_action[i].at(r, j)) rc.emplace_back(s.dim + r, right_action[i].at(r, j));
    }
  a.one = Vec(dim, 0);
  std::copy(s.one.begin(), s.one.end(), a.one.begin());
  Decomposition dec;
  for (const auto& f : s.dec->factors) {
    SimpleFactor g = f;
    for (auto& v : g.basis) v.resize(dim, 0);
    g.unity.resize(dim, 0);
    dec.factors.push_back(std::move(g));
  }
  for (u32 j = 0; j < vdim; ++j) dec.radical.push_back(a.basis_vec(s.dim + j));
  if (vdim) dec.radical_powers.push_back(dec.radical);
  a.dec = std::move(dec);
  a.name = "triv(" + s.name + "," + std::to_string(vdim) + ")";
  return a;
}

// --- simple matrix view ------------------------------------------------------

bool is_plain_simple(const AlgebraSpec& a) {
  if (!a.dec || a.dec->factors.size() != 1 || !a.dec->radical.empty()) return false;
  const auto& f = a.dec->factors[0];
  if (f.basis.size() != a.dim) return false;
  for (u32 i = 0; i < a.dim; ++i)
    if (f.basis[i] != a.basis_vec(i)) return false;
  return true;
}

Mat simple_to_matrix(const AlgebraSpec& a, const Vec& x) {
  if (!is_plain_simple(a)) throw std::invalid_argument("matrix view needs a plain simple spec");
  const auto& f = a.dec->factors[0];
  Mat m(f.tower.fqm, f.n, f.n);
  for (u32 r = 0; r < f.n; ++r)
    for (u32 c = 0; c < f.n; ++c) {
      std::vector<u32> digitsv(f.m);
      for (u32 s = 0; s < f.m; ++s) digitsv[s] = x[(r * f.n + c) * f.m + s];
      m.at(r, c) = f.tower.from_digits(digitsv);
    }
  return m;
}

Vec simple_from_matrix(const AlgebraSpec& a, const Mat& m) {
  if (!is_plain_simple(a)) throw std::invalid_argument("matrix view needs a plain simple spec");
  const auto& f = a.dec->factors[0];
  Vec x(a.dim, 0);
  for (u32 r = 0; r < f.n; ++r)
    for (u32 c = 0; c < f.n; ++c) {
      const auto digitsv = f.tower.digits(m.at(r, c));
      for (u32 s = 0; s < f.m; ++s) x[(r * f.n + c) * f.m + s] = digitsv[s];
    }
  return x;
}

// --- subspace utilities ------------------------------------------------------

std::vector<Vec> span_rref(const FieldPtr& F, const std::vector<Vec>& vecs) {
  if (vecs.empty()) return {};
  Mat m(F, static_cast<u32>(vecs.size()), static_cast<u32>(vecs[0].size()));
  for (u32 r = 0; r < m.rows; ++r)
    for (u32 c = 0; c < m.cols; ++c) m.at(r, c) = vecs[r][c];
  const auto pivots = rref(m);
  std::vector<Vec> rows;
  for (size_t r = 0; r < pivots.size(); ++r) {
    Vec v(m.cols);
    for (u32 c = 0; c < m.cols; ++c) v[c] = m.at(static_cast<u32>(r), c);
    rows.push_back(std::move(v));
  }
  return rows;
}

Vec span_reduce(const FieldPtr& F, const std::vector<Vec>& rref_rows, const Vec& v) {
  Vec r = v;
  for (const auto& row : rref_rows) {
    u32 piv = 0;
    while (piv < row.size() && row[piv] == 0) ++piv;
    if (piv == row.size() || r[piv] == 0) continue;
    const u32 f = r[piv];
    for (size_t c = piv; c < r.size(); ++c) r[c] = F->sub(r[c], F->mul(f, row[c]));
  }
  return r;
}

bool span_contains(const FieldPtr& F, const std::vector<Vec>& rref_rows, const Vec& v) {
  const Vec r = span_reduce(F, rref_rows, v);
  return std::all_of(r.begin(), r.end(), [](u32 x) { return x == 0; });
}

std::vector<Vec> span_sum(const FieldPtr& F, const std::vector<Vec>& a, const std::vector<Vec>& b) {
  std::vector<Vec> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return span_rref(F, all);
}

std::vector<Vec> span_intersect(const FieldPtr& F, const std::vector<Vec>& a, const std::vector<Vec>& b) {
  // Zassenhaus: rows [u | u] for u in a, [v | 0] for v in b; after RREF the
  // rows whose left half vanished carry the intersection in the right half.
  if (a.empty() || b.empty()) return {};
  const u32 n = static_cast<u32>(a[0].size());
  Mat m(F, static_cast<u32>(a.size() + b.size()), 2 * n);
  u32 r = 0;
  for (const auto& u : a) {
    for (u32 c = 0; c < n; ++c) {
      m.at(r, c) = u[c];
      m.at(r, n + c) = u[c];
    }
    ++r;
  }
  for (const auto& v : b) {
    for (u32 c = 0; c < n; ++c) m.at(r, c) = v[c];
    ++r;
  }
  rref(m);
  std::vector<Vec> out;
  for (u32 row = 0; row < m.rows; ++row) {
    bool left_zero = true, right_zero = true;
    for (u32 c = 0; c < n && left_zero; ++c)
      if (m.at(row, c)) left_zero = false;
    for (u32 c = 0; c < n && right_zero; ++c)
      if (m.at(row, n + c)) right_zero = false;
    if (left_zero && !right_zero) {
      Vec v(n);
      for (u32 c = 0; c < n; ++c) v[c] = m.at(row, n + c);
      out.push_back(std::move(v));
    }
  }
  return span_rref(F, out);
}

std::vector<Vec> core_ideal(const AlgebraSpec& a, const std::vector<Vec>& sub_basis) {
  const auto& F = a.k;
  std::vector<Vec> I = span_rref(F, sub_basis);
  for (;;) {
    if (I.empty()) return I;
    // v in I stays iff b_e * v and v * b_e lie in I for every basis element.
    const u32 t = static_cast<u32>(I.size());
    std::vector<Vec> constraints;  // rows over the t unknowns
    for (u32 e = 0; e < a.dim; ++e) {
      const Vec be = a.basis_vec(e);
      for (u32 side = 0; side < 2; ++side) {
        std::vector<Vec> reduced(t);
        for (u32 j = 0; j < t; ++j) {
          const Vec prod_ = side ? a.mul(I[j], be) : a.mul(be, I[j]);
          reduced[j] = span_reduce(F, I, prod_);
        }
        for (u32 coord = 0; coord < a.dim; ++coord) {
          Vec row(t, 0);
          bool nz = false;
          for (u32 j = 0; j < t; ++j) {
            row[j] = reduced[j][coord];
            nz |= row[j] != 0;
          }
          if (nz) constraints.push_back(std::move(row));
        }
      }
    }
    if (constraints.empty()) return I;  // already an ideal
    Mat cm(F, static_cast<u32>(constraints.size()), t);
    for (u32 r = 0; r < cm.rows; ++r)
      for (u32 c = 0; c < t; ++c) cm.at(r, c) = constraints[r][c];
    const auto ker = kernel_basis(cm);
    if (ker.size() == t) return I;  // nothing removed (cannot happen after the nz filter, kept for safety)
    std::vector<Vec> next;
    for (const auto& coeff : ker) {
      Vec v = a.zero();
      for (u32 j = 0; j < t; ++j)
        if (coeff[j]) v = a.add(v, a.scale(I[j], coeff[j]));
      next.push_back(std::move(v));
    }
    I = span_rref(F, next);
  }
}

// --- embeddings --------------------------------------------------------------

std::vector<Vec> embed_inner(const AlgebraSpec& a, u32 va) {
  if (!is_plain_simple(a)) throw std::invalid_argument("embed_inner needs a plain simple spec");
  const auto& f = a.dec->factors[0];
  if (va == 0 || f.n % va != 0) throw std::invalid_argument("inner degree must divide n");
  const auto& Fm = f.tower.fqm;
  const u32 blocks = f.n / va;
  // Companion matrix of the least irreducible of degree va over F_{q^m}.
  const Poly g = least_irreducible(Fm, va);
  Mat comp(Fm, va, va);
  for (u32 i = 0; i + 1 < va; ++i) comp.at(i + 1, i) = 1;
  for (u32 i = 0; i < va; ++i) comp.at(i, va - 1) = Fm->neg(g.c[i]);
  std::vector<Mat> comp_pow{mat_identity(Fm, va)};
  for (u32 s = 1; s < va; ++s) comp_pow.push_back(mat_mul(comp_pow.back(), comp));
  std::vector<Vec> image;
  for (u32 I = 0; I < blocks; ++I)
    for (u32 J = 0; J < blocks; ++J)
      for (u32 s = 0; s < va; ++s)
        for (u32 t = 0; t < f.m; ++t) {
          Mat M(Fm, f.n, f.n);
          const u32 beta = power_basis_code(f.tower, t);
          for (u32 r = 0; r < va; ++r)
            for (u32 c = 0; c < va; ++c) M.at(I * va + r, J * va + c) = Fm->mul(beta, comp_pow[s].at(r, c));
          image.push_back(simple_from_matrix(a, M));
        }
  return image;
}

std::vector<Vec> embed_subfield(const AlgebraSpec& a, u32 b) {
  if (!is_plain_simple(a)) throw std::invalid_argument("embed_subfield needs a plain simple spec");
  const auto& f = a.dec->factors[0];
  if (b == 0 || f.m % b != 0) throw std::invalid_argument("subfield index must divide m");
  const auto gammas = subfield_basis(f.tower, b);
  std::vector<Vec> image;
  for (u32 r = 0; r < f.n; ++r)
    for (u32 c = 0; c < f.n; ++c)
      for (const u32 g : gammas) {
        Mat M(f.tower.fqm, f.n, f.n);
        M.at(r, c) = g;
        image.push_back(simple_from_matrix(a, M));
      }
  return image;
}

}  // namespace fqgen
