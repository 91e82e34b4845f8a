#include "fqgen/gfield.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "fqgen/poly.hpp"

namespace fqgen {

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> ps;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

namespace {
// exp/log tables above this size cost more to build than they save at the
// scales this library targets; larger fields fall back to digit arithmetic.
constexpr u64 kTableLimit = 1ull << 16;
// Element codes must stay comfortably inside u32.
constexpr u64 kSizeLimit = 1ull << 31;
constexpr u32 kMaxLevelDegree = 32;
}  // namespace

FieldPtr FiniteField::make_prime(u64 p) {
  if (!is_prime_u64(p)) throw std::invalid_argument("characteristic must be prime");
  if (p >= kSizeLimit) throw too_large_error("prime field exceeds code range");
  auto f = std::shared_ptr<FiniteField>(new FiniteField());
  f->p_ = p;
  f->size_ = p;
  f->deg_ = 1;
  f->deg_prime_ = 1;
  // Least primitive root; p = 2 has the empty condition set.
  const u64 n = p - 1;
  const auto primes = prime_divisors(n);
  for (u64 c = 1; c < p; ++c) {
    bool ok = true;
    for (u64 r : primes)
      if (f->pow(static_cast<u32>(c), n / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      f->gen_ = c;
      break;
    }
  }
  return f;
}

FieldPtr FiniteField::make_extension(const FieldPtr& base, const std::vector<u32>& g) {
  if (!base) throw std::invalid_argument("null base field");
  if (g.size() < 2 || g.back() != 1) throw std::invalid_argument("defining polynomial must be monic of degree >= 1");
  const u32 d = static_cast<u32>(g.size() - 1);
  if (d > kMaxLevelDegree) throw too_large_error("extension degree too large for one level");
  for (u32 c : g)
    if (c >= base->size()) throw std::invalid_argument("coefficient code out of range");
  if (d == 1) {
    if (g[0] != 0) throw std::invalid_argument("degree-1 layers must use g = x");
  } else {
    Poly gp{base, g};
    if (!is_irreducible(gp)) throw std::invalid_argument("defining polynomial is reducible");
  }
  u64 size = 1;
  for (u32 i = 0; i < d; ++i) {
    size *= base->size();
    if (size > kSizeLimit) throw too_large_error("field exceeds code range");
  }
  auto f = std::shared_ptr<FiniteField>(new FiniteField());
  f->p_ = base->characteristic();
  f->size_ = size;
  f->deg_ = d;
  f->deg_prime_ = d * base->deg_over_prime();
  f->base_ = base;
  f->defining_ = g;
  if (size <= kTableLimit) {
    f->build_tables();
  } else {
    // Still locate the least generator so generator() is total.
    const u64 n = size - 1;
    const auto primes = prime_divisors(n);
    for (u64 c = 2; c < size; ++c) {
      bool ok = true;
      for (u64 r : primes)
        if (f->pow_slow(static_cast<u32>(c), n / r) == 1) {
          ok = false;
          break;
        }
      if (ok) {
        f->gen_ = c;
        break;
      }
    }
  }
  return f;
}

FieldPtr FiniteField::make_extension_least(const FieldPtr& base, u32 d) {
  return make_extension(base, least_irreducible(base, d).c);
}

void FiniteField::build_tables() {
  const u64 n = size_ - 1;
  const auto primes = prime_divisors(n);
  u64 g = 1;
  for (u64 c = 2; c < size_; ++c) {
    bool ok = true;
    for (u64 r : primes)
      if (pow_slow(static_cast<u32>(c), n / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      g = c;
      break;
    }
  }
  exp_.assign(static_cast<size_t>(n), 0);
  log_.assign(static_cast<size_t>(size_), 0);
  u32 x = 1;
  for (u64 i = 0; i < n; ++i) {
    exp_[static_cast<size_t>(i)] = x;
    log_[x] = static_cast<u32>(i);
    x = mul_slow(x, static_cast<u32>(g));
  }
  if (x != 1) throw std::logic_error("generator order check failed");
  gen_ = g;
  tables_ = true;
}

u32 FiniteField::add(u32 a, u32 b) const {
  if (p_ == 2) return a ^ b;
  if (!base_) return static_cast<u32>((static_cast<u64>(a) + b) % p_);
  // Codes are base-p digit strings at every level, so addition is digitwise.
  u64 r = 0, place = 1;
  u32 x = a, y = b;
  while (x || y) {
    u64 s = x % p_ + y % p_;
    if (s >= p_) s -= p_;
    r += s * place;
    place *= p_;
    x = static_cast<u32>(x / p_);
    y = static_cast<u32>(y / p_);
  }
  return static_cast<u32>(r);
}

u32 FiniteField::neg(u32 a) const {
  if (p_ == 2) return a;
  if (!base_) return a == 0 ? 0 : static_cast<u32>(p_ - a);
  u64 r = 0, place = 1;
  u32 x = a;
  while (x) {
    const u64 d = x % p_;
    if (d) r += (p_ - d) * place;
    place *= p_;
    x = static_cast<u32>(x / p_);
  }
  return static_cast<u32>(r);
}

u32 FiniteField::mul(u32 a, u32 b) const {
  if (!base_) return static_cast<u32>(static_cast<u64>(a) * b % p_);
  if (tables_) {
    if (a == 0 || b == 0) return 0;
    const u64 n = size_ - 1;
    u64 s = log_[a] + log_[b];
    if (s >= n) s -= n;
    return exp_[static_cast<size_t>(s)];
  }
  return mul_slow(a, b);
}

u32 FiniteField::mul_slow(u32 a, u32 b) const {
  if (a == 0 || b == 0) return 0;
  const u64 bs = base_->size();
  const u32 d = deg_;
  u32 A[kMaxLevelDegree], B[kMaxLevelDegree], R[2 * kMaxLevelDegree - 1] = {0};
  u32 x = a;
  for (u32 i = 0; i < d; ++i) {
    A[i] = static_cast<u32>(x % bs);
    x = static_cast<u32>(x / bs);
  }
  x = b;
  for (u32 i = 0; i < d; ++i) {
    B[i] = static_cast<u32>(x % bs);
    x = static_cast<u32>(x / bs);
  }
  for (u32 i = 0; i < d; ++i) {
    if (A[i] == 0) continue;
    for (u32 j = 0; j < d; ++j) {
      if (B[j] == 0) continue;
      R[i + j] = base_->add(R[i + j], base_->mul(A[i], B[j]));
    }
  }
  // Reduce by the monic defining polynomial from the top down.
  for (u32 k = 2 * d - 2; k >= d && k < 2 * d; --k) {
    const u32 c = R[k];
    if (c == 0) continue;
    R[k] = 0;
    for (u32 i = 0; i < d; ++i) {
      if (defining_[i] == 0) continue;
      R[k - d + i] = base_->sub(R[k - d + i], base_->mul(c, defining_[i]));
    }
  }
  u64 r = 0, place = 1;
  for (u32 i = 0; i < d; ++i) {
    r += static_cast<u64>(R[i]) * place;
    place *= bs;
  }
  return static_cast<u32>(r);
}

u32 FiniteField::pow_slow(u32 a, u64 e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  u32 r = 1, sq = a;
  while (e) {
    if (e & 1) r = base_ ? mul_slow(r, sq) : static_cast<u32>(static_cast<u64>(r) * sq % p_);
    sq = base_ ? mul_slow(sq, sq) : static_cast<u32>(static_cast<u64>(sq) * sq % p_);
    e >>= 1;
  }
  return r;
}

u32 FiniteField::pow(u32 a, u64 e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (tables_) {
    const u64 n = size_ - 1;
    const u64 s = static_cast<u64>(log_[a]) % n * (e % n) % n;
    return exp_[static_cast<size_t>(s)];
  }
  u32 r = 1, sq = a;
  while (e) {
    if (e & 1) r = mul(r, sq);
    sq = mul(sq, sq);
    e >>= 1;
  }
  return r;
}

u32 FiniteField::inv(u32 a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (tables_) {
    const u64 n = size_ - 1;
    const u32 l = log_[a];
    return exp_[static_cast<size_t>(l == 0 ? 0 : n - l)];
  }
  return pow(a, size_ - 2);
}

u32 FiniteField::frobenius_p(u32 a, u32 j) const {
  j %= deg_prime_;
  if (j == 0 || a < 2) return a;
  u64 e = 1;
  for (u32 i = 0; i < j; ++i) e *= p_;
  return pow(a, e);
}

u32 FiniteField::generator() const {
  if (gen_ == 0) throw std::logic_error("generator not available");
  return static_cast<u32>(gen_);
}

std::vector<u32> FiniteField::digits(u32 a) const {
  const u64 bs = base_ ? base_->size() : p_;
  std::vector<u32> d(deg_);
  for (u32 i = 0; i < deg_; ++i) {
    d[i] = static_cast<u32>(a % bs);
    a = static_cast<u32>(a / bs);
  }
  return d;
}

u32 FiniteField::from_digits(const std::vector<u32>& d) const {
  const u64 bs = base_ ? base_->size() : p_;
  if (d.size() > deg_) throw std::invalid_argument("too many digits");
  u64 r = 0, place = 1;
  for (u32 c : d) {
    if (c >= bs) throw std::invalid_argument("digit out of range");
    r += c * place;
    place *= bs;
  }
  return static_cast<u32>(r);
}

FieldTower make_tower(u64 p, u32 e, u32 m) {
  if (e == 0 || m == 0) throw std::invalid_argument("extension degrees must be positive");
  FieldTower t;
  t.p = p;
  t.e = e;
  t.m = m;
  t.fp = FiniteField::make_prime(p);
  t.fq = (e == 1) ? t.fp : FiniteField::make_extension_least(t.fp, e);
  t.fqm = (m == 1) ? t.fq : FiniteField::make_extension_least(t.fq, m);
  t.q = t.fq->size();
  return t;
}

u32 FieldTower::frobenius(u32 x, u32 j) const { return fqm->frobenius_p(x, e * j); }

std::vector<u32> FieldTower::digits(u32 x) const {
  if (m == 1) return {x};
  return fqm->digits(x);
}

u32 FieldTower::from_digits(const std::vector<u32>& d) const {
  if (m == 1) {
    if (d.size() != 1 || d[0] >= q) throw std::invalid_argument("digit out of range");
    return d[0];
  }
  return fqm->from_digits(d);
}

u32 min_poly_degree(const FieldTower& t, u32 x) {
  for (u32 d = 1; d <= t.m; ++d)
    if (t.frobenius(x, d) == x) return d;
  throw std::logic_error("element not fixed by full Frobenius power");
}

std::vector<u32> subfield_basis(const FieldTower& t, u32 b) {
  if (b == 0 || t.m % b != 0) throw std::invalid_argument("b must divide m");
  const u32 m = t.m;
  const auto& F = t.fqm;
  const auto& K = t.fq;
  if (m == 1) return {1u};
  const u32 j = m / b;
  // Frobenius^j - id is F_q-linear on F_{q^m}; its kernel is F_{q^(m/b)}.
  // Columns are images of the power-basis vectors, in F_q digits.
  std::vector<std::vector<u32>> col(m);
  for (u32 c = 0; c < m; ++c) {
    u64 place = 1;
    for (u32 i = 0; i < c; ++i) place *= t.q;
    const u32 bc = static_cast<u32>(place);
    const u32 im = t.frobenius(bc, j);
    col[c] = F->digits(F->sub(im, bc));
  }
  // Small self-contained RREF over F_q (m <= 32), then read the kernel.
  std::vector<std::vector<u32>> a(m, std::vector<u32>(m));
  for (u32 r = 0; r < m; ++r)
    for (u32 c = 0; c < m; ++c) a[r][c] = col[c][r];
  std::vector<i64> pivot_of_col(m, -1);
  u32 rank = 0;
  for (u32 c = 0; c < m && rank < m; ++c) {
    u32 pr = rank;
    while (pr < m && a[pr][c] == 0) ++pr;
    if (pr == m) continue;
    std::swap(a[pr], a[rank]);
    const u32 piv_inv = K->inv(a[rank][c]);
    for (u32 cc = 0; cc < m; ++cc) a[rank][cc] = K->mul(a[rank][cc], piv_inv);
    for (u32 r = 0; r < m; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const u32 f = a[r][c];
      for (u32 cc = 0; cc < m; ++cc) a[r][cc] = K->sub(a[r][cc], K->mul(f, a[rank][cc]));
    }
    pivot_of_col[c] = rank;
    ++rank;
  }
  std::vector<u32> basis;
  for (u32 c = 0; c < m; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    std::vector<u32> v(m, 0);
    v[c] = 1;
    for (u32 cc = 0; cc < m; ++cc)
      if (pivot_of_col[cc] >= 0) v[cc] = K->neg(a[static_cast<size_t>(pivot_of_col[cc])][c]);
    basis.push_back(F->from_digits(v));
  }
  if (basis.size() != m / b) throw std::logic_error("fixed-space dimension mismatch");
  std::sort(basis.begin(), basis.end());
  return basis;
}

}  // namespace fqgen
