#include "fqgen/poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "fqgen/rng.hpp"

namespace fqgen {

namespace {
void normalize(Poly& f) {
  while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
}
}  // namespace

Poly poly_zero(const FieldPtr& F) { return Poly{F, {}}; }

Poly poly_const(const FieldPtr& F, u32 a) { return a ? Poly{F, {a}} : Poly{F, {}}; }

Poly poly_x(const FieldPtr& F) { return Poly{F, {0, 1}}; }

Poly poly_make(const FieldPtr& F, std::vector<u32> coeffs) {
  Poly f{F, std::move(coeffs)};
  normalize(f);
  return f;
}

u64 poly_encode(const Poly& f) {
  u64 r = 0;
  for (size_t i = f.c.size(); i-- > 0;) r = r * f.F->size() + f.c[i];
  return r;
}

Poly poly_decode(const FieldPtr& F, u64 code, int max_deg) {
  std::vector<u32> c;
  while (code) {
    c.push_back(static_cast<u32>(code % F->size()));
    code /= F->size();
  }
  if (max_deg >= 0 && static_cast<int>(c.size()) - 1 > max_deg)
    throw std::invalid_argument("encoded degree exceeds bound");
  return Poly{F, std::move(c)};
}

Poly poly_add(const Poly& a, const Poly& b) {
  const auto& F = a.F;
  Poly r{F, std::vector<u32>(std::max(a.c.size(), b.c.size()), 0)};
  for (size_t i = 0; i < r.c.size(); ++i) {
    const u32 x = i < a.c.size() ? a.c[i] : 0;
    const u32 y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F->add(x, y);
  }
  normalize(r);
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  const auto& F = a.F;
  Poly r{F, std::vector<u32>(std::max(a.c.size(), b.c.size()), 0)};
  for (size_t i = 0; i < r.c.size(); ++i) {
    const u32 x = i < a.c.size() ? a.c[i] : 0;
    const u32 y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F->sub(x, y);
  }
  normalize(r);
  return r;
}

Poly poly_scale(const Poly& a, u32 s) {
  if (s == 0) return poly_zero(a.F);
  Poly r = a;
  for (u32& x : r.c) x = a.F->mul(x, s);
  normalize(r);
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  const auto& F = a.F;
  if (a.is_zero() || b.is_zero()) return poly_zero(F);
  Poly r{F, std::vector<u32>(a.c.size() + b.c.size() - 1, 0)};
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      if (b.c[j] == 0) continue;
      r.c[i + j] = F->add(r.c[i + j], F->mul(a.c[i], b.c[j]));
    }
  }
  normalize(r);
  return r;
}

void poly_divrem(const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  const auto& F = a.F;
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  rem = a;
  quo = poly_zero(F);
  if (a.deg() < b.deg()) return;
  quo.c.assign(static_cast<size_t>(a.deg() - b.deg()) + 1, 0);
  const u32 lead_inv = F->inv(b.lead());
  while (!rem.is_zero() && rem.deg() >= b.deg()) {
    const int shift = rem.deg() - b.deg();
    const u32 q = F->mul(rem.lead(), lead_inv);
    quo.c[static_cast<size_t>(shift)] = q;
    for (size_t i = 0; i < b.c.size(); ++i) {
      if (b.c[i] == 0) continue;
      const size_t k = i + static_cast<size_t>(shift);
      rem.c[k] = F->sub(rem.c[k], F->mul(q, b.c[i]));
    }
    normalize(rem);
  }
  normalize(quo);
}

Poly poly_rem(const Poly& a, const Poly& b) {
  Poly q, r;
  poly_divrem(a, b, q, r);
  return r;
}

Poly poly_quo(const Poly& a, const Poly& b) {
  Poly q, r;
  poly_divrem(a, b, q, r);
  return q;
}

Poly poly_monic(const Poly& a) {
  if (a.is_zero() || a.monic()) return a;
  return poly_scale(a, a.F->inv(a.lead()));
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return poly_monic(x);
}

Poly poly_derivative(const Poly& a) {
  const auto& F = a.F;
  if (a.deg() < 1) return poly_zero(F);
  Poly r{F, std::vector<u32>(a.c.size() - 1, 0)};
  const u64 p = F->characteristic();
  for (size_t i = 1; i < a.c.size(); ++i) {
    const u32 k = static_cast<u32>(i % p);
    if (k == 0 || a.c[i] == 0) continue;
    // multiply by the integer i, i.e. add a.c[i] to itself i mod p times
    u32 v = 0;
    for (u32 t = 0; t < k; ++t) v = F->add(v, a.c[i]);
    r.c[i - 1] = v;
  }
  normalize(r);
  return r;
}

u32 poly_eval(const Poly& a, u32 x) {
  const auto& F = a.F;
  u32 r = 0;
  for (size_t i = a.c.size(); i-- > 0;) r = F->add(F->mul(r, x), a.c[i]);
  return r;
}

Poly poly_powmod(const Poly& a, const BigInt& e, const Poly& m) {
  if (m.deg() < 1) throw std::domain_error("modulus must have positive degree");
  Poly r = poly_const(a.F, 1);
  if (e == 0) return poly_rem(r, m);
  Poly base = poly_rem(a, m);
  const unsigned bits = boost::multiprecision::msb(e);
  for (unsigned i = bits + 1; i-- > 0;) {
    r = poly_rem(poly_mul(r, r), m);
    if (boost::multiprecision::bit_test(e, i)) r = poly_rem(poly_mul(r, base), m);
  }
  return r;
}

bool is_irreducible(const Poly& f) {
  if (!f.monic() || f.deg() < 1) throw std::invalid_argument("need a monic polynomial of degree >= 1");
  const auto& F = f.F;
  const u32 d = static_cast<u32>(f.deg());
  if (d == 1) return true;
  if (f.c[0] == 0) return false;  // divisible by x
  // Rabin's test: x^(|F|^d) == x mod f, and gcd(x^(|F|^(d/r)) - x, f) == 1
  // for every prime r | d.
  const Poly x = poly_x(F);
  std::vector<u32> checkpoints;
  for (u64 r : prime_divisors(d)) checkpoints.push_back(d / static_cast<u32>(r));
  Poly u = x;
  for (u32 i = 1; i <= d; ++i) {
    u = poly_powmod(u, BigInt(F->size()), f);
    if (std::find(checkpoints.begin(), checkpoints.end(), i) != checkpoints.end()) {
      if (poly_gcd(poly_sub(u, x), f).deg() != 0) return false;
    }
  }
  return u == poly_rem(x, f);
}

Poly least_irreducible(const FieldPtr& F, u32 d) {
  if (d == 0) throw std::invalid_argument("degree must be positive");
  if (d == 1) return poly_x(F);  // least monic linear: x
  std::vector<u32> c(d + 1, 0);
  c[d] = 1;
  for (u64 t = 0;; ++t) {
    u64 x = t;
    for (u32 i = 0; i < d; ++i) {
      c[i] = static_cast<u32>(x % F->size());
      x /= F->size();
    }
    if (x) throw std::logic_error("no irreducible found in range");  // cannot happen
    Poly g{F, c};
    if (is_irreducible(g)) return g;
  }
}

namespace {

Poly pth_root(const Poly& f) {
  const auto& F = f.F;
  const u64 p = F->characteristic();
  std::vector<u32> c(static_cast<size_t>(f.deg() / static_cast<int>(p)) + 1, 0);
  for (size_t i = 0; i < c.size(); ++i) {
    const u32 a = f.c[i * static_cast<size_t>(p)];
    // p-th root in F_q is a^(q/p)
    c[i] = F->pow(a, F->size() / p);
  }
  return poly_make(F, std::move(c));
}

// Squarefree decomposition in characteristic p (Yun's method adapted):
// returns pairs (g, e) with g squarefree, pairwise coprime, f = prod g^e.
void squarefree(const Poly& f, u32 mult, std::vector<std::pair<Poly, u32>>& out) {
  const auto& F = f.F;
  const u64 p = F->characteristic();
  if (f.deg() == 0) return;
  const Poly df = poly_derivative(f);
  if (df.is_zero()) {
    squarefree(pth_root(f), mult * static_cast<u32>(p), out);
    return;
  }
  Poly c = poly_gcd(f, df);
  Poly w = poly_quo(f, c);
  u32 i = 1;
  while (!w.is_one()) {
    const Poly y = poly_gcd(w, c);
    const Poly z = poly_quo(w, y);
    if (!z.is_one()) out.emplace_back(z, i * mult);
    w = y;
    c = poly_quo(c, y);
    ++i;
  }
  if (!c.is_one()) squarefree(pth_root(c), mult * static_cast<u32>(p), out);
}

// Distinct-degree stage on a squarefree input.
void distinct_degree(const Poly& g, std::vector<std::pair<Poly, u32>>& out) {
  const auto& F = g.F;
  Poly f = g;
  Poly h = poly_rem(poly_x(F), f);
  u32 d = 0;
  while (f.deg() > 0) {
    ++d;
    if (2 * d > static_cast<u32>(f.deg())) {
      out.emplace_back(f, static_cast<u32>(f.deg()));
      return;
    }
    h = poly_powmod(h, BigInt(F->size()), f);
    const Poly G = poly_gcd(poly_sub(h, poly_x(F)), f);
    if (G.deg() > 0) {
      out.emplace_back(G, d);
      f = poly_quo(f, G);
      h = poly_rem(h, f);
    }
  }
}

// Cantor-Zassenhaus equal-degree splitting; f is a product of distinct
// irreducibles, all of degree d.
void equal_degree(const Poly& f, u32 d, RandomStream& rng, std::vector<Poly>& out) {
  const auto& F = f.F;
  if (static_cast<u32>(f.deg()) == d) {
    out.push_back(f);
    return;
  }
  for (;;) {
    // random nonconstant poly of degree < deg f
    std::vector<u32> rc(static_cast<size_t>(f.deg()), 0);
    for (u32& x : rc) x = rng.digit(static_cast<u32>(F->size()));
    Poly r = poly_make(F, std::move(rc));
    if (r.deg() < 1) continue;
    Poly s;
    if (F->characteristic() == 2) {
      // absolute trace: r + r^2 + r^4 + ... over F_2
      Poly t = r;
      s = r;
      const u32 bits = F->deg_over_prime() * d;
      for (u32 i = 1; i < bits; ++i) {
        t = poly_rem(poly_mul(t, t), f);
        s = poly_add(s, t);
      }
    } else {
      const BigInt e = (big_pow(BigInt(F->size()), d) - 1) / 2;
      s = poly_sub(poly_powmod(r, e, f), poly_const(F, 1));
    }
    const Poly g = poly_gcd(s, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree(g, d, rng, out);
      equal_degree(poly_quo(f, g), d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Poly, u32>> factorize(const Poly& f) {
  if (!f.monic() || f.deg() < 1) throw std::invalid_argument("factorize needs a monic polynomial of degree >= 1");
  const auto& F = f.F;
  // Deterministic seed from the input itself.
  u64 h = 0xcbf29ce484222325ull;
  auto mix = [&h](u64 v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(F->size());
  for (u32 c : f.c) mix(c);
  RandomStream rng = RandomStream::derive(h, "equal-degree-split", 0);

  std::vector<std::pair<Poly, u32>> sf;
  squarefree(f, 1, sf);
  std::vector<std::pair<Poly, u32>> out;
  for (const auto& [g, e] : sf) {
    std::vector<std::pair<Poly, u32>> byd;
    distinct_degree(g, byd);
    for (const auto& [prod, d] : byd) {
      std::vector<Poly> irr;
      equal_degree(prod, d, rng, irr);
      for (Poly& q : irr) out.emplace_back(std::move(q), e);
    }
  }
  // Canonical order: by degree, then by integer encoding (== lexicographic
  // on coefficients read from the top), comparing digits exactly so large
  // fields cannot overflow an encoded key.
  auto less = [](const std::pair<Poly, u32>& a, const std::pair<Poly, u32>& b) {
    if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
    return std::lexicographical_compare(a.first.c.rbegin(), a.first.c.rend(), b.first.c.rbegin(),
                                        b.first.c.rend());
  };
  std::sort(out.begin(), out.end(), less);
  // Merge any duplicate irreducible arriving from different squarefree parts.
  std::vector<std::pair<Poly, u32>> merged;
  for (auto& pr : out) {
    if (!merged.empty() && merged.back().first == pr.first)
      merged.back().second += pr.second;
    else
      merged.push_back(std::move(pr));
  }
  return merged;
}

}  // namespace fqgen
