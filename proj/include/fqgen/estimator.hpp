#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fqgen/algebra.hpp"
#include "fqgen/counting.hpp"
#include "fqgen/poly.hpp"

namespace fqgen {

enum class EstMethod { exhaustive, montecarlo, auto_pick };

// Sampling configuration shared by every estimator entry point.  Monte Carlo
// work is split into fixed-size shards, each drawing from the stream
// derive(seed, tag, shard); totals are plain sums over shards, so results
// depend only on (seed, samples), never on the worker count.
struct McConfig {
  u64 seed = 0;
  u64 samples = 100000;
  u32 workers = 1;
  u64 exhaustive_budget = u64(1) << 26;  // max closure calls for exhaustive mode
  double z = 1.959963984540054;          // Wilson score z (95% two-sided)
};

// Element condition restricting the tuple distribution.
struct Condition {
  enum class Kind { none, nilpotent, unit, charpoly_fixed, rank_fixed };
  Kind kind = Kind::none;
  Poly f;         // charpoly_fixed: target characteristic polynomial
  u32 alpha = 0;  // rank_fixed: target rank

  static Condition none() { return {}; }
  static Condition nilpotent();
  static Condition unit();
  static Condition charpoly(Poly f);
  static Condition rank(u32 alpha);
  std::string describe() const;
};

struct Estimate {
  bool exact = false;
  BigRat exact_value;  // valid when exact
  double value = 0;    // always set (exhaustive: the rational, rounded)
  EstMethod method = EstMethod::exhaustive;
  u64 samples = 0;  // Monte Carlo only
  double ci_lo = 0, ci_hi = 0;
  u64 seed = 0;
  std::string condition;  // "", "nilpotent", "unit", "charpoly(...)", "rank(a)"
};

// Wilson score interval for hits successes out of n trials.
std::pair<double, double> wilson_ci(u64 hits, u64 n, double z = 1.959963984540054);

// P(A, d): probability that d independent uniform elements generate A.
// Exhaustive mode enumerates all |A|^d tuples (requires |A|^d within budget,
// with prefix pruning once a partial tuple already generates); Monte Carlo
// mode draws tuples and reports a Wilson interval.
Estimate estimate_P(const AlgebraSpec& a, u32 d, EstMethod mode, const McConfig& cfg);

// Conditional generation probability: d independent draws uniform on the
// condition's target set (nilpotents, units, fixed characteristic polynomial,
// fixed rank).  Exhaustive mode enumerates the target set.
Estimate estimate_conditional(const AlgebraSpec& a, const Condition& c, u32 d, EstMethod mode,
                              const McConfig& cfg);

// E(A) = expected number of uniform draws until the drawn set generates,
// estimated by simulating the draw process.  Trajectories are truncated at
// the least cap C with sum_n m_n(A) n^{-C} < 1e-6 (the union-bound tail of
// 1 - P(A, d)), so the truncation bias is below 2e-6.
Estimate estimate_E(const AlgebraSpec& a, const McConfig& cfg);

struct VEtaResult {
  std::optional<u32> d;          // least d with P(A, d) > 1/eta; nullopt if 1/eta >= 1
  bool boundary = false;         // an exact P(A, d) hit the threshold exactly
  std::vector<u32> boundary_ds;  // the d values where that happened
  u64 samples_used = 0;          // Monte Carlo only
};

// V_eta(A) = min{d >= 1 : P(A, d) > eta^{-1}} under the strict inequality.
// Exact mode settles each d by full enumeration when feasible and otherwise
// by the certified tail bound 1 - P(A, d) <= sum_n m_n(A) n^{-d}; Monte Carlo
// mode escalates samples until the interval excludes the threshold (throws
// indeterminate_error when the budget runs out first).
VEtaResult V_eta(const AlgebraSpec& a, const BigRat& eta, EstMethod mode, const McConfig& cfg);

// V(A): the eta = e case of V_eta (threshold 1/e, irrational, so no boundary
// ties are possible), settled exactly.
u32 V_default(const AlgebraSpec& a, const McConfig& cfg);

// Composition length of J(A) as a bimodule over the Wedderburn complement S:
// every unrefinable chain of S-subbimodules of J(A) has this length.  Block
// e_a J e_b is a module over S_a (x) S_b^op, all of whose simple modules have
// F_q-dimension n_a n_b lcm(m_a, m_b).
u32 mu_length(const AlgebraSpec& a);

// f(A) = max_i  m_i^{-1} n_i^{-2} log_q(alpha_i m_i), the factors grouped into
// isomorphism classes with multiplicities alpha_i.
double f_invariant(const AlgebraSpec& a);

struct PfgCheck {
  std::string id;
  double lhs = 0, rhs = 0;
  bool pass = false;
  std::string note;
};

struct PfgReport {
  std::map<BigInt, BigInt> m_table;  // index -> number of maximal subalgebras
  double M = 0;                      // max over indices n > 1 of log m_n / log n
  std::optional<u32> V;              // V(A) at eta = e
  Estimate E;
  u32 d = 0;
  std::vector<PfgCheck> checks;
};

// The positively-finitely-generated invariants of A with their bound checks:
// M <= 2 log_q r + d + 2;  ceil(M - 5.24) <= V <= ceil(M + 2.02);
// ceil(M - 5.80) <= E <= ceil(M) + 3;  and per index n the bound
// m_n <= n (6.93 r + r(r-1)/2 + r^2 n^d).
PfgReport pfg_report(const AlgebraSpec& a, const McConfig& cfg);

struct SuiteCheck {
  std::string spec_name;
  std::string id;
  double lhs = 0, rhs = 0;
  bool pass = false;
  std::string method;
  std::string note;
};

// Named inequality suites evaluated over a grid of algebras:
//   "minP"         P(A) >= 3/8, equality flagged
//   "second"       1 - P(A) <= phi(1/2)^{-1} zeta_A(1)
//   "secondnil"    1 - P_N(A) < phi(1/2)^{-1} zeta_A(1/4)
//   "estimateprob" exact Bonferroni bracket on 1 - P plus the kappa/m ratio
//   "rank_i"       |B_alpha| / |A_alpha| >= t^{-p alpha^2} (exact, with an
//                  embedded-image census when |B| is enumerable) and
//                  P_alpha(A) <= 1 - q^{-2 m p alpha^2}
//   "ranklemma"    P_alpha(A) >= 1 - 2(2n - 2 + omega(m)) q^{-mn/4} / P(E^K)
//   "mind"         -2.33 < d(A) - f(A) < mu(A) + 3.42
// Monte Carlo comparisons use the confidence-interval edge nearest the claim.
std::vector<SuiteCheck> verify_suite(const std::string& name, const std::vector<AlgebraSpec>& grid,
                                     const McConfig& cfg);

}  // namespace fqgen
