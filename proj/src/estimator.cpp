#include "fqgen/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "fqgen/closure.hpp"
#include "fqgen/maxsub.hpp"
#include "fqgen/sampler.hpp"

namespace fqgen {

namespace {

constexpr u64 kShardSamples = 4096;
constexpr u32 kMaxTupleLen = 64;

bool exhaustive_feasible(u64 base, u32 d, u64 budget) {
  u64 total = 1;
  for (u32 i = 0; i < d; ++i) {
    if (base != 0 && total > budget / base) return false;
    total *= base;
  }
  return total <= budget;
}

u64 u64_pow(u64 base, u32 e) {
  u64 r = 1;
  while (e--) r *= base;
  return r;
}

void run_sharded(u32 workers, size_t jobs, const std::function<void(size_t)>& body) {
  workers = std::max<u32>(1, workers);
  if (workers == 1 || jobs <= 1) {
    for (size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto loop = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (u32 w = 0; w < std::min<size_t>(workers, jobs); ++w) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
}

// number of d-tuples over `target` that generate, with prefix pruning: once a
// partial tuple generates, all completions do
u64 count_generating_suffixes(const MulTable& t, const std::vector<u64>& target, u32 d,
                              std::vector<u64>& stack) {
  if (generates_codes(t, stack.data(), static_cast<u32>(stack.size())))
    return u64_pow(target.size(), d - static_cast<u32>(stack.size()));
  if (stack.size() == d) return 0;
  u64 s = 0;
  for (u64 c : target) {
    stack.push_back(c);
    s += count_generating_suffixes(t, target, d, stack);
    stack.pop_back();
  }
  return s;
}

BigRat exhaustive_tuple_probability(const AlgebraSpec& a, const std::vector<u64>& target, u32 d,
                                    u32 workers) {
  const MulTable t = MulTable::compile(a);
  if (d == 0) {
    std::vector<u64> empty;
    return generates_codes(t, empty.data(), 0) ? BigRat(1) : BigRat(0);
  }
  std::vector<u64> partial(target.size(), 0);
  run_sharded(workers, target.size(), [&](size_t i) {
    std::vector<u64> stack{target[i]};
    partial[i] = count_generating_suffixes(t, target, d, stack);
  });
  u64 hits = 0;
  for (u64 h : partial) hits += h;
  return BigRat(BigInt(hits), big_pow(BigInt(target.size()), d));
}

const SimpleFactor& plain_simple_factor(const AlgebraSpec& a, const char* who) {
  if (!is_plain_simple(a))
    throw std::invalid_argument(std::string(who) + " requires a plain matrix-algebra spec");
  return a.dec->factors[0];
}

Poly localize_poly(const AlgebraSpec& a, const Poly& f) {
  const FieldPtr& F = plain_simple_factor(a, "charpoly condition").tower.fqm;
  if (f.F == F) return f;
  if (f.F->size() != F->size())
    throw std::invalid_argument("polynomial coefficient field does not match the algebra");
  return poly_make(F, f.c);
}

// element-level test of a condition, for exhaustive target enumeration
bool condition_holds(const AlgebraSpec& a, const Condition& c, const Vec& x, const Poly& f_local) {
  switch (c.kind) {
    case Condition::Kind::none:
      return true;
    case Condition::Kind::nilpotent:
      return a.element_is_nilpotent(x);
    case Condition::Kind::unit:
      return a.element_is_unit(x);
    case Condition::Kind::charpoly_fixed:
      return charpoly(simple_to_matrix(a, x)) == f_local;
    case Condition::Kind::rank_fixed:
      return rank(simple_to_matrix(a, x)) == c.alpha;
  }
  return false;
}

Vec draw_conditional(const AlgebraSpec& a, const Condition& c, const Poly& f_local,
                     RandomStream& rs) {
  switch (c.kind) {
    case Condition::Kind::none:
      return uniform_element(a, rs);
    case Condition::Kind::nilpotent:
      return uniform_nilpotent(a, rs);
    case Condition::Kind::unit:
      return uniform_unit(a, rs);
    case Condition::Kind::charpoly_fixed:
      return simple_from_matrix(a, uniform_charpoly(f_local, rs));
    case Condition::Kind::rank_fixed: {
      const SimpleFactor& f = a.dec->factors[0];
      return simple_from_matrix(a, uniform_rank(f.tower.fqm, f.n, c.alpha, rs));
    }
  }
  throw std::logic_error("unreachable condition kind");
}

Estimate monte_carlo_tuples(const AlgebraSpec& a, const Condition& c, u32 d,
                            const McConfig& cfg) {
  if (cfg.samples == 0) throw std::invalid_argument("Monte Carlo estimation needs samples > 0");
  const Poly f_local =
      c.kind == Condition::Kind::charpoly_fixed ? localize_poly(a, c.f) : Poly{};
  if (c.kind == Condition::Kind::rank_fixed) {
    const SimpleFactor& f = plain_simple_factor(a, "rank condition");
    if (c.alpha > f.n) throw std::invalid_argument("rank exceeds the matrix size");
  }
  const MulTable t = MulTable::compile(a);
  const std::string tag = "tuples:" + c.describe() + ":d=" + std::to_string(d);
  const u64 shards = (cfg.samples + kShardSamples - 1) / kShardSamples;
  std::vector<u64> hits(shards, 0);
  run_sharded(cfg.workers, shards, [&](size_t s) {
    RandomStream rs = RandomStream::derive(cfg.seed, tag, s);
    const u64 here = std::min(kShardSamples, cfg.samples - s * kShardSamples);
    std::vector<u64> codes(d);
    u64 h = 0;
    for (u64 i = 0; i < here; ++i) {
      for (u32 j = 0; j < d; ++j) codes[j] = a.encode(draw_conditional(a, c, f_local, rs));
      if (generates_codes(t, codes.data(), d)) ++h;
    }
    hits[s] = h;
  });
  u64 total = 0;
  for (u64 h : hits) total += h;
  Estimate est;
  est.exact = false;
  est.value = static_cast<double>(total) / static_cast<double>(cfg.samples);
  est.method = EstMethod::montecarlo;
  est.samples = cfg.samples;
  std::tie(est.ci_lo, est.ci_hi) = wilson_ci(total, cfg.samples, cfg.z);
  est.seed = cfg.seed;
  est.condition = c.describe();
  return est;
}

Estimate exhaustive_estimate(const AlgebraSpec& a, const Condition& c, u32 d,
                             const McConfig& cfg) {
  const u64 n_all = a.size();
  if (n_all > cfg.exhaustive_budget)
    throw too_large_error("element sweep exceeds the exhaustive budget");
  const Poly f_local =
      c.kind == Condition::Kind::charpoly_fixed ? localize_poly(a, c.f) : Poly{};
  if (c.kind == Condition::Kind::rank_fixed) {
    const SimpleFactor& f = plain_simple_factor(a, "rank condition");
    if (c.alpha > f.n) throw std::invalid_argument("rank exceeds the matrix size");
  }
  std::vector<u64> target;
  if (c.kind == Condition::Kind::none) {
    target.resize(n_all);
    std::iota(target.begin(), target.end(), 0);
  } else {
    for (u64 code = 0; code < n_all; ++code)
      if (condition_holds(a, c, a.decode(code), f_local)) target.push_back(code);
  }
  if (target.empty()) throw std::invalid_argument("condition has an empty target set");
  if (!exhaustive_feasible(target.size(), d, cfg.exhaustive_budget))
    throw too_large_error("tuple enumeration exceeds the exhaustive budget");
  Estimate est;
  est.exact = true;
  est.exact_value = exhaustive_tuple_probability(a, target, d, cfg.workers);
  est.value = est.exact_value.convert_to<double>();
  est.method = EstMethod::exhaustive;
  est.ci_lo = est.ci_hi = est.value;
  est.seed = cfg.seed;
  est.condition = c.describe();
  return est;
}

Estimate estimate_with(const AlgebraSpec& a, const Condition& c, u32 d, EstMethod mode,
                       const McConfig& cfg) {
  if (mode == EstMethod::auto_pick) {
    bool feasible = a.size() <= cfg.exhaustive_budget;
    if (feasible && c.kind == Condition::Kind::none)
      feasible = exhaustive_feasible(a.size(), d, cfg.exhaustive_budget);
    // conditional targets are subsets of A, so the |A|^d test is conservative
    // only in the wrong direction; probe the actual target size cheaply
    if (feasible && c.kind != Condition::Kind::none) {
      const Poly f_local =
          c.kind == Condition::Kind::charpoly_fixed ? localize_poly(a, c.f) : Poly{};
      u64 count = 0;
      for (u64 code = 0; code < a.size(); ++code)
        if (condition_holds(a, c, a.decode(code), f_local)) ++count;
      feasible = count > 0 && exhaustive_feasible(count, d, cfg.exhaustive_budget);
    }
    mode = feasible ? EstMethod::exhaustive : EstMethod::montecarlo;
  }
  return mode == EstMethod::exhaustive ? exhaustive_estimate(a, c, d, cfg)
                                       : monte_carlo_tuples(a, c, d, cfg);
}

// exact tail bound sum_n m_n(A) n^{-d} on 1 - P(A, d), as a rational
BigRat tail_bound(const std::map<BigInt, BigInt>& table, u32 d) {
  BigRat s = 0;
  for (const auto& [idx, count] : table) s += BigRat(count, big_pow(idx, d));
  return s;
}

u32 least_prime_factor(u32 n) {
  for (u32 p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

double to_double(const BigRat& v) { return v.convert_to<double>(); }

HighFloat to_high(const BigRat& v) { return v.convert_to<HighFloat>(); }

struct SimpleShape {
  u32 n, m;
  u64 q, t;
};

std::optional<SimpleShape> simple_shape(const AlgebraSpec& a) {
  if (!a.dec || a.dec->factors.size() != 1 || !a.dec->radical.empty()) return std::nullopt;
  const SimpleFactor& f = a.dec->factors[0];
  SimpleShape s{f.n, f.m, a.k->size(), f.tower.fqm->size()};
  return s;
}

}  // namespace

Condition Condition::nilpotent() {
  Condition c;
  c.kind = Kind::nilpotent;
  return c;
}

Condition Condition::unit() {
  Condition c;
  c.kind = Kind::unit;
  return c;
}

Condition Condition::charpoly(Poly f) {
  Condition c;
  c.kind = Kind::charpoly_fixed;
  c.f = std::move(f);
  return c;
}

Condition Condition::rank(u32 alpha) {
  Condition c;
  c.kind = Kind::rank_fixed;
  c.alpha = alpha;
  return c;
}

std::string Condition::describe() const {
  switch (kind) {
    case Kind::none:
      return "";
    case Kind::nilpotent:
      return "nilpotent";
    case Kind::unit:
      return "unit";
    case Kind::charpoly_fixed:
      return "charpoly(" + std::to_string(poly_encode(f)) + ")";
    case Kind::rank_fixed:
      return "rank(" + std::to_string(alpha) + ")";
  }
  return "";
}

std::pair<double, double> wilson_ci(u64 hits, u64 n, double z) {
  if (n == 0) throw std::invalid_argument("wilson_ci needs at least one sample");
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (ph + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  // at the endpoints the two terms cancel exactly; avoid returning rounding dust
  const double lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = hits == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

Estimate estimate_P(const AlgebraSpec& a, u32 d, EstMethod mode, const McConfig& cfg) {
  return estimate_with(a, Condition::none(), d, mode, cfg);
}

Estimate estimate_conditional(const AlgebraSpec& a, const Condition& c, u32 d, EstMethod mode,
                              const McConfig& cfg) {
  return estimate_with(a, c, d, mode, cfg);
}

Estimate estimate_E(const AlgebraSpec& a, const McConfig& cfg) {
  if (cfg.samples == 0) throw std::invalid_argument("Monte Carlo estimation needs samples > 0");
  const auto table = m_n_counts(a);
  u32 cap = 0;
  for (u32 d = 1; d <= 4096; ++d) {
    if (tail_bound(table, d) < BigRat(1, 1000000)) {
      cap = d;
      break;
    }
  }
  if (cap == 0) throw too_large_error("truncation cap for the draw process not achievable");
  const MulTable t = MulTable::compile(a);
  const u64 shards = (cfg.samples + kShardSamples - 1) / kShardSamples;
  std::vector<u64> sums(shards, 0), sqsums(shards, 0);
  run_sharded(cfg.workers, shards, [&](size_t s) {
    RandomStream rs = RandomStream::derive(cfg.seed, "tau", s);
    const u64 here = std::min(kShardSamples, cfg.samples - s * kShardSamples);
    std::vector<u64> codes;
    u64 sum = 0, sq = 0;
    for (u64 i = 0; i < here; ++i) {
      codes.clear();
      u64 tau = 0;
      while (!generates_codes(t, codes.data(), static_cast<u32>(codes.size()))) {
        if (tau == cap) break;
        codes.push_back(a.encode(uniform_element(a, rs)));
        ++tau;
      }
      sum += tau;
      sq += tau * tau;
    }
    sums[s] = sum;
    sqsums[s] = sq;
  });
  u64 sum = 0, sq = 0;
  for (u64 v : sums) sum += v;
  for (u64 v : sqsums) sq += v;
  const double nn = static_cast<double>(cfg.samples);
  const double mean = static_cast<double>(sum) / nn;
  const double var =
      cfg.samples > 1 ? std::max(0.0, (static_cast<double>(sq) - nn * mean * mean) / (nn - 1)) : 0;
  const double half = cfg.z * std::sqrt(var / nn);
  Estimate est;
  est.exact = false;
  est.value = mean;
  est.method = EstMethod::montecarlo;
  est.samples = cfg.samples;
  est.ci_lo = std::max(0.0, mean - half);
  est.ci_hi = mean + half;
  est.seed = cfg.seed;
  return est;
}

VEtaResult V_eta(const AlgebraSpec& a, const BigRat& eta, EstMethod mode, const McConfig& cfg) {
  VEtaResult res;
  if (eta <= 1) return res;  // P(A, d) > 1/eta >= 1 is impossible
  const BigRat thr = BigRat(1) / eta;
  if (mode == EstMethod::montecarlo) {
    const double thr_d = to_double(thr);
    for (u32 d = 1; d <= kMaxTupleLen; ++d) {
      McConfig local = cfg;
      for (u32 esc = 0;; ++esc) {
        const Estimate est = monte_carlo_tuples(a, Condition::none(), d, local);
        res.samples_used += est.samples;
        if (est.ci_lo > thr_d) {
          res.d = d;
          return res;
        }
        if (est.ci_hi < thr_d) break;  // this d is settled as below; try d + 1
        if (esc == 6)
          throw indeterminate_error("confidence interval straddles the threshold at budget",
                                    est.ci_lo, est.ci_hi, thr_d, res.samples_used);
        local.samples *= 2;
        local.seed = cfg.seed + 0x9e3779b97f4a7c15ull * (esc + 1);
      }
    }
    throw too_large_error("threshold not crossed within the tuple-length cap");
  }
  std::optional<std::map<BigInt, BigInt>> table;
  for (u32 d = 1; d <= kMaxTupleLen; ++d) {
    if (exhaustive_feasible(a.size(), d, cfg.exhaustive_budget)) {
      const Estimate est = exhaustive_estimate(a, Condition::none(), d, cfg);
      if (est.exact_value == thr) {
        res.boundary = true;
        res.boundary_ds.push_back(d);
      }
      if (est.exact_value > thr) {
        res.d = d;
        return res;
      }
    } else {
      // certified crossing: P(A, d) >= 1 - sum m_n n^{-d} > 1/eta.  A gap
      // (uncertified and not enumerable) cannot be skipped, because a later
      // certificate would not prove minimality.
      if (!table) table = m_n_counts(a);
      if (BigRat(1) - tail_bound(*table, d) > thr) {
        res.d = d;
        return res;
      }
      throw too_large_error("P(A, d) cannot be settled against the threshold at this size");
    }
  }
  throw too_large_error("threshold not crossed within the tuple-length cap");
}

u32 V_default(const AlgebraSpec& a, const McConfig& cfg) {
  const HighFloat thr = exp(HighFloat(-1));
  std::optional<std::map<BigInt, BigInt>> table;
  for (u32 d = 1; d <= kMaxTupleLen; ++d) {
    if (exhaustive_feasible(a.size(), d, cfg.exhaustive_budget)) {
      const Estimate est = exhaustive_estimate(a, Condition::none(), d, cfg);
      if (to_high(est.exact_value) > thr) return d;
    } else {
      if (!table) table = m_n_counts(a);
      if (HighFloat(1) - to_high(tail_bound(*table, d)) > thr) return d;
      throw too_large_error("P(A, d) cannot be settled against 1/e at this size");
    }
  }
  throw too_large_error("threshold not crossed within the tuple-length cap");
}

u32 mu_length(const AlgebraSpec& a) {
  if (!a.dec) throw std::invalid_argument("bimodule length needs the decomposition");
  const Decomposition& dec = *a.dec;
  if (dec.radical.empty()) return 0;
  u32 total = 0, seen = 0;
  for (const SimpleFactor& fa : dec.factors) {
    for (const SimpleFactor& fb : dec.factors) {
      std::vector<Vec> block;
      for (const Vec& r : dec.radical) block.push_back(a.mul(a.mul(fa.unity, r), fb.unity));
      const auto rr = span_rref(a.k, block);
      const u32 dim = static_cast<u32>(rr.size());
      seen += dim;
      if (dim == 0) continue;
      const u32 unit = fa.n * fb.n * std::lcm(fa.m, fb.m);
      if (dim % unit != 0)
        throw std::logic_error("radical block is not a multiple of the simple bimodule dimension");
      total += dim / unit;
    }
  }
  if (seen != dec.radical.size())
    throw std::logic_error("radical does not split across the idempotent blocks");
  return total;
}

double f_invariant(const AlgebraSpec& a) {
  if (!a.dec) throw std::invalid_argument("f invariant needs the decomposition");
  std::map<std::pair<u32, u32>, u32> groups;
  for (const SimpleFactor& f : a.dec->factors) groups[{f.n, f.m}] += 1;
  const double logq = std::log(static_cast<double>(a.k->size()));
  double best = 0;
  for (const auto& [shape, alpha] : groups) {
    const auto [n, m] = shape;
    const double fi = std::log(static_cast<double>(alpha) * m) / logq / (m * double(n) * n);
    best = std::max(best, fi);
  }
  return best;
}

PfgReport pfg_report(const AlgebraSpec& a, const McConfig& cfg) {
  if (!a.dec) throw std::invalid_argument("the report needs the decomposition");
  PfgReport r;
  r.m_table = m_n_counts(a);
  double M = 0;
  for (const auto& [idx, count] : r.m_table) {
    const double li = std::log(idx.convert_to<double>());
    const double lc = std::log(count.convert_to<double>());
    M = std::max(M, lc / li);
  }
  r.M = M;
  const DExact dx = d_exact(a, 8, cfg.exhaustive_budget);
  if (!dx.d) throw too_large_error("minimal generator count unresolved within budget");
  r.d = *dx.d;
  r.V = V_default(a, cfg);
  r.E = estimate_E(a, cfg);
  const double rcount = static_cast<double>(a.dec->factors.size());
  const double logq = std::log(static_cast<double>(a.k->size()));

  auto push = [&](std::string id, double lhs, double rhs, bool pass, std::string note = "") {
    r.checks.push_back({std::move(id), lhs, rhs, pass, std::move(note)});
  };
  const double rhs1 = 2 * std::log(rcount) / logq + r.d + 2;
  push("upper-m-vs-d", r.M, rhs1, r.M <= rhs1);
  push("v-lower", std::ceil(r.M - 5.24), static_cast<double>(*r.V),
       std::ceil(r.M - 5.24) <= static_cast<double>(*r.V));
  push("v-upper", static_cast<double>(*r.V), std::ceil(r.M + 2.02),
       static_cast<double>(*r.V) <= std::ceil(r.M + 2.02));
  push("e-lower", std::ceil(r.M - 5.80), r.E.ci_lo, std::ceil(r.M - 5.80) <= r.E.ci_lo,
       "interval edge nearest the claim");
  push("e-upper", r.E.ci_hi, std::ceil(r.M) + 3, r.E.ci_hi <= std::ceil(r.M) + 3,
       "interval edge nearest the claim");
  for (const auto& [idx, count] : r.m_table) {
    const double n = idx.convert_to<double>();
    const double bound =
        n * (6.93 * rcount + rcount * (rcount - 1) / 2 + rcount * rcount * std::pow(n, r.d));
    const double mn = count.convert_to<double>();
    push("count-bound-idx" + idx.str(), mn, bound, mn <= bound);
  }
  return r;
}

namespace {

void suite_minP(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const Estimate est = estimate_P(a, 2, EstMethod::auto_pick, cfg);
  const BigRat bound(3, 8);
  SuiteCheck c{a.name, "min-probability", 0, 0.375, false,
               est.exact ? "exhaustive" : "montecarlo", ""};
  if (est.exact) {
    c.lhs = est.value;
    c.pass = est.exact_value >= bound;
    if (est.exact_value == bound) c.note = "equality";
  } else {
    c.lhs = est.ci_lo;
    c.pass = est.ci_lo >= 0.375;
    c.note = "interval lower edge";
  }
  out.push_back(std::move(c));
}

void suite_second(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const Estimate est = estimate_P(a, 2, EstMethod::auto_pick, cfg);
  const ZetaValue zv = zeta_general(a, BigRat(1));
  const HighFloat zeta_low = zv.exact ? to_high(*zv.exact) : zv.approx - zv.err;
  const HighFloat rhs = zeta_low / to_high(phi_half().hi);
  const HighFloat lhs =
      est.exact ? HighFloat(1) - to_high(est.exact_value) : HighFloat(1 - est.ci_lo);
  out.push_back({a.name, "union-bound-via-zeta", lhs.convert_to<double>(),
                 rhs.convert_to<double>(), lhs <= rhs, est.exact ? "exhaustive" : "montecarlo",
                 "safe-side zeta and unit-fraction constants"});
}

void suite_secondnil(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const Estimate est = estimate_conditional(a, Condition::nilpotent(), 2, EstMethod::auto_pick, cfg);
  const ZetaValue zv = zeta_general(a, BigRat(1, 4));
  const HighFloat zeta_low = zv.exact ? to_high(*zv.exact) : zv.approx - zv.err;
  const HighFloat rhs = zeta_low / to_high(phi_half().hi);
  const HighFloat lhs =
      est.exact ? HighFloat(1) - to_high(est.exact_value) : HighFloat(1 - est.ci_lo);
  out.push_back({a.name, "nilpotent-union-bound", lhs.convert_to<double>(),
                 rhs.convert_to<double>(), lhs < rhs, est.exact ? "exhaustive" : "montecarlo",
                 "strict inequality"});
}

void suite_estimateprob(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const auto shape = simple_shape(a);
  if (!shape || shape->n < 2) {
    out.push_back({a.name, "least-index-asymptotics", 0, 0, false, "skipped",
                   "needs a simple non-field algebra"});
    return;
  }
  const Estimate est = estimate_P(a, 2, EstMethod::exhaustive, cfg);
  const BigRat one_minus = BigRat(1) - est.exact_value;
  const BonferroniBounds bb = bonferroni(a, 2);
  out.push_back({a.name, "bracket-contains", to_double(one_minus), to_double(bb.upper),
                 bb.lower <= one_minus && one_minus <= bb.upper, "exhaustive",
                 "lower edge " + bb.lower.str()});
  const BigRat kap = kappa(a);
  const BigInt mm = m_min(a).value;
  const HighFloat drift = abs(to_high(one_minus) - to_high(kap) / HighFloat(mm));
  const HighFloat scale = pow(HighFloat(mm), HighFloat(-4) / 3);
  out.push_back({a.name, "remainder-ratio", (drift / scale).convert_to<double>(), 0, true,
                 "exhaustive", "reported only; no universal constant asserted"});
}

void suite_rank(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const auto shape = simple_shape(a);
  if (!shape || shape->n < 2) {
    out.push_back({a.name, "rank-generation", 0, 0, false, "skipped",
                   "needs a simple non-field algebra"});
    return;
  }
  const u32 n = shape->n, m = shape->m;
  const u64 q = shape->q, t = shape->t;
  const u32 p = least_prime_factor(n);
  const u64 tp = u64_pow(t, p);
  for (u32 alpha = 1; alpha <= n / p; ++alpha) {
    const std::string suffix = "-rank" + std::to_string(alpha);
    const BigInt b_count = count_rank(n / p, tp, alpha).value;
    const BigInt a_count = count_rank(n, t, alpha).value;
    const BigRat ratio(b_count, a_count);
    const BigRat floor_r(BigInt(1), big_pow(BigInt(t), static_cast<u64>(p) * alpha * alpha));
    out.push_back({a.name, "inner-subalgebra-share" + suffix, to_double(ratio),
                   to_double(floor_r), ratio >= floor_r, "exact", ""});
    // census over the embedded copy: its elements of inner rank alpha are
    // exactly those of ambient rank p * alpha
    const BigInt b_size = big_pow(BigInt(tp), static_cast<u64>(n / p) * (n / p));
    if (b_size <= 65536) {
      const std::vector<Vec> image = embed_inner(a, p);
      const u64 qsz = a.k->size();
      u64 cells = 1;
      for (size_t i = 0; i < image.size(); ++i) cells *= qsz;
      u64 hits = 0;
      for (u64 code = 0; code < cells; ++code) {
        Vec x = a.zero();
        u64 rem = code;
        for (const Vec& base : image) {
          const u32 coef = static_cast<u32>(rem % qsz);
          rem /= qsz;
          if (coef) x = a.add(x, a.scale(base, coef));
        }
        if (rank(simple_to_matrix(a, x)) == p * alpha) ++hits;
      }
      out.push_back({a.name, "embedded-census" + suffix, static_cast<double>(hits),
                     b_count.convert_to<double>(), BigInt(hits) == b_count, "exhaustive", ""});
    }
    const Estimate est = estimate_conditional(a, Condition::rank(alpha), 2, EstMethod::auto_pick, cfg);
    const double lhs = est.exact ? est.value : est.ci_hi;
    const double rhs =
        1 - std::pow(static_cast<double>(q), -2.0 * m * p * alpha * alpha);
    out.push_back({a.name, "rank-generation-upper" + suffix, lhs, rhs, lhs <= rhs,
                   est.exact ? "exhaustive" : "montecarlo",
                   est.exact ? "" : "interval upper edge"});
  }
}

void suite_ranklemma(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const auto shape = simple_shape(a);
  if (!shape || shape->n < 2) {
    out.push_back({a.name, "conditional-generation", 0, 0, false, "skipped",
                   "needs a simple non-field algebra"});
    return;
  }
  const u32 n = shape->n, m = shape->m;
  const u64 q = shape->q, t = shape->t;
  for (u32 alpha = 1; alpha <= n; ++alpha) {
    const BigInt a_count = count_rank(n, t, alpha).value;
    const BigRat pek_one(a_count, big_pow(BigInt(t), static_cast<u64>(n) * n));
    const double pek = to_double(pek_one * pek_one);
    const double rhs =
        1 - 2 * (2.0 * n - 2 + omega(m)) * std::pow(static_cast<double>(q), -m * n / 4.0) / pek;
    const Estimate est = estimate_conditional(a, Condition::rank(alpha), 2, EstMethod::auto_pick, cfg);
    const double lhs = est.exact ? est.value : est.ci_lo;
    out.push_back({a.name, "conditional-generation-rank" + std::to_string(alpha), lhs, rhs,
                   lhs >= rhs, est.exact ? "exhaustive" : "montecarlo",
                   est.exact ? "" : "interval lower edge"});
  }
}

void suite_mind(const AlgebraSpec& a, const McConfig& cfg, std::vector<SuiteCheck>& out) {
  const DExact dx = d_exact(a, 8, cfg.exhaustive_budget);
  if (!dx.d) {
    out.push_back({a.name, "generator-count-window", 0, 0, false, "skipped",
                   "minimal generator count unresolved within budget"});
    return;
  }
  const double gap = static_cast<double>(*dx.d) - f_invariant(a);
  const double mu = mu_length(a);
  out.push_back(
      {a.name, "generator-count-lower", gap, -2.33, gap > -2.33, "exhaustive", ""});
  out.push_back({a.name, "generator-count-upper", gap, mu + 3.42, gap < mu + 3.42, "exhaustive",
                 ""});
}

}  // namespace

std::vector<SuiteCheck> verify_suite(const std::string& name, const std::vector<AlgebraSpec>& grid,
                                     const McConfig& cfg) {
  std::vector<SuiteCheck> out;
  for (const AlgebraSpec& a : grid) {
    if (name == "minP")
      suite_minP(a, cfg, out);
    else if (name == "second")
      suite_second(a, cfg, out);
    else if (name == "secondnil")
      suite_secondnil(a, cfg, out);
    else if (name == "estimateprob")
      suite_estimateprob(a, cfg, out);
    else if (name == "rank_i")
      suite_rank(a, cfg, out);
    else if (name == "ranklemma")
      suite_ranklemma(a, cfg, out);
    else if (name == "mind")
      suite_mind(a, cfg, out);
    else
      throw std::invalid_argument("unknown verification suite: " + name);
  }
  return out;
}

}  // namespace fqgen
