#include "fqgen/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include "fqgen/algebra.hpp"
#include "fqgen/closure.hpp"
#include "fqgen/counting.hpp"
#include "fqgen/estimator.hpp"
#include "fqgen/gfield.hpp"
#include "fqgen/maxsub.hpp"
#include "fqgen/poly.hpp"
#include "fqgen/report.hpp"
#include "fqgen/specparse.hpp"

namespace fqgen {

namespace {

using json = nlohmann::ordered_json;

// ---- shared run options ----------------------------------------------------

struct RunOpts {
  std::vector<std::string> pos_specs;  // positionals, may contain ranges
  std::vector<std::string> specs;      // repeatable --spec
  u64 seed = 0;
  u64 samples = 100000;
  double ci_level = 0.95;
  std::string format = "json";
  u64 threshold = u64(1) << 26;
  u32 workers = 1;

  McConfig mc() const {
    McConfig cfg;
    cfg.seed = seed;
    cfg.samples = samples;
    cfg.workers = workers;
    cfg.exhaustive_budget = threshold;
    boost::math::normal_distribution<double> n01;
    cfg.z = boost::math::quantile(n01, 0.5 + ci_level / 2.0);
    return cfg;
  }
};

void add_run_flags(CLI::App* sub, RunOpts& o, bool takes_spec = true) {
  if (takes_spec) {
    sub->add_option("algebra", o.pos_specs, "algebra specs, ranges allowed, e.g. M(2..4,1,2)");
    sub->add_option("--spec", o.specs, "additional algebra specs (repeatable)");
  }
  sub->add_option("--seed", o.seed, "random stream seed")->capture_default_str();
  sub->add_option("--samples", o.samples, "Monte Carlo sample count")->capture_default_str();
  sub->add_option("--ci", o.ci_level, "two-sided confidence level for intervals")
      ->check(CLI::Range(0.5, 0.9999999))
      ->capture_default_str();
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  sub->add_option("--exhaustive-threshold", o.threshold,
                  "max closure calls before exhaustive mode is refused")
      ->capture_default_str();
  sub->add_option("--workers", o.workers, "worker threads (results are worker-invariant)")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
}

std::vector<AlgebraSpec> collect_grid(const RunOpts& o) {
  std::vector<AlgebraSpec> grid;
  auto take = [&](const std::string& text) {
    for (AlgebraSpec& a : expand_specs(text)) grid.push_back(std::move(a));
  };
  for (const std::string& s : o.pos_specs) take(s);
  for (const std::string& s : o.specs) take(s);
  if (grid.empty()) throw spec_parse_error("no algebra spec given", 0);
  return grid;
}

// ---- serialization helpers -------------------------------------------------

std::string rat_str(const BigRat& r) { return r.str(); }

std::string method_name(EstMethod m) {
  switch (m) {
    case EstMethod::exhaustive: return "exhaustive";
    case EstMethod::montecarlo: return "montecarlo";
    default: return "auto";
  }
}

EstMethod parse_mode(const std::string& s) {
  if (s == "exhaustive") return EstMethod::exhaustive;
  if (s == "montecarlo") return EstMethod::montecarlo;
  return EstMethod::auto_pick;
}

// "a", "a/b", or a plain decimal like "0.25" -> exact rational
BigRat parse_rational(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("not a rational number: '" + text + "'");
  };
  if (text.empty()) throw bad();
  const size_t slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const BigInt num(text.substr(0, slash));
      const BigInt den(text.substr(slash + 1));
      if (den == 0) throw bad();
      return BigRat(num, den);
    }
    const size_t dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const u64 places = text.size() - dot - 1;
      if (digits.empty() || places == 0) throw bad();
      return BigRat(BigInt(digits), big_pow(BigInt(10), places));
    }
    return BigRat(BigInt(text));
  } catch (const std::runtime_error&) {
    throw bad();
  }
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

json estimate_row(const std::string& spec, const std::string& op, std::optional<u32> d,
                  const Estimate& e) {
  json j;
  j["spec"] = spec;
  j["op"] = op;
  j["condition"] = e.condition;
  if (d) j["d"] = *d;
  if (e.exact) {
    j["value"] = rat_str(e.exact_value);
    j["approx"] = e.value;
    j["ci"] = nullptr;
    j["samples"] = nullptr;
  } else {
    j["value"] = e.value;
    j["ci"] = json::array({e.ci_lo, e.ci_hi});
    j["samples"] = e.samples;
  }
  j["seed"] = std::to_string(e.seed);
  j["method"] = method_name(e.method);
  j["version"] = kVersion;
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// The sweep row schema: spec, condition, d, value, ci_low, ci_high, samples, seed, method.
void emit_estimate_csv(std::ostream& out, const std::vector<json>& rows) {
  out << "spec,condition,d,value,ci_low,ci_high,samples,seed,method\n";
  for (const json& j : rows) {
    out << csv_escape(j["spec"].get<std::string>()) << ','
        << csv_escape(j["condition"].get<std::string>()) << ','
        << (j.contains("d") ? std::to_string(j["d"].get<u32>()) : "") << ',';
    if (j["value"].is_string())
      out << csv_escape(j["value"].get<std::string>()) << ",,,,";
    else
      out << fmt_double(j["value"].get<double>()) << ','
          << fmt_double(j["ci"][0].get<double>()) << ',' << fmt_double(j["ci"][1].get<double>())
          << ',' << j["samples"].get<u64>() << ',';
    out << j["seed"].get<std::string>() << ',' << j["method"].get<std::string>() << '\n';
  }
}

void emit_table(std::ostream& out, const std::vector<json>& rows) {
  bool first = true;
  for (const json& j : rows) {
    if (!first) out << "----\n";
    first = false;
    for (const auto& [key, value] : j.items()) {
      out << "  " << key << ": ";
      if (value.is_string())
        out << value.get<std::string>();
      else
        out << value.dump();
      out << '\n';
    }
  }
}

// json: one object for a single row, an array for a sweep.
void emit(std::ostream& out, const RunOpts& o, const std::vector<json>& rows) {
  if (o.format == "csv") {
    emit_estimate_csv(out, rows);
  } else if (o.format == "table") {
    emit_table(out, rows);
  } else {
    if (rows.size() == 1)
      out << rows[0].dump(2) << '\n';
    else
      out << json(rows).dump(2) << '\n';
  }
}

// Flat non-estimate rows (count, zeta, dgen, verify): natural csv columns.
void emit_flat(std::ostream& out, const RunOpts& o, const std::vector<json>& rows,
               const std::vector<std::string>& csv_cols) {
  if (o.format == "csv") {
    for (size_t i = 0; i < csv_cols.size(); ++i) out << (i ? "," : "") << csv_cols[i];
    out << '\n';
    for (const json& j : rows) {
      for (size_t i = 0; i < csv_cols.size(); ++i) {
        if (i) out << ',';
        if (!j.contains(csv_cols[i]) || j[csv_cols[i]].is_null()) continue;
        const json& v = j[csv_cols[i]];
        if (v.is_string())
          out << csv_escape(v.get<std::string>());
        else if (v.is_number_float())
          out << fmt_double(v.get<double>());
        else
          out << v.dump();
      }
      out << '\n';
    }
  } else if (o.format == "table") {
    emit_table(out, rows);
  } else {
    if (rows.size() == 1)
      out << rows[0].dump(2) << '\n';
    else
      out << json(rows).dump(2) << '\n';
  }
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message,
                const json& extra = json::object()) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  err << j.dump() << std::endl;
}

std::string kind_name(SubalgebraClass::Kind k) {
  switch (k) {
    case SubalgebraClass::Kind::S1: return "S1";
    case SubalgebraClass::Kind::S2: return "S2";
    case SubalgebraClass::Kind::S3: return "S3";
    case SubalgebraClass::Kind::T1: return "T1";
    case SubalgebraClass::Kind::T2: return "T2";
    default: return "T3";
  }
}

Poly poly_from_codes(const FieldPtr& F, const std::string& csv) {
  std::vector<u32> coeffs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    const unsigned long v = std::stoul(item, &used, 10);
    if (used != item.size() || v >= F->size())
      throw std::invalid_argument("polynomial coefficient '" + item +
                                  "' is not an element code of the coefficient field");
    coeffs.push_back(static_cast<u32>(v));
  }
  if (coeffs.empty()) throw std::invalid_argument("empty polynomial");
  return poly_make(F, coeffs);
}

// The single simple factor of a plain simple spec, or a typed refusal.
const SimpleFactor& only_factor(const AlgebraSpec& a, const std::string& why) {
  if (!is_plain_simple(a))
    throw std::invalid_argument(why + " needs a simple matrix-algebra spec, got " + a.name);
  return a.dec->factors[0];
}

// ---- subcommands -----------------------------------------------------------

int cmd_field(const RunOpts& o, std::ostream& out) {
  std::vector<json> rows;
  for (const AlgebraSpec& a : collect_grid(o)) {
    const SimpleFactor& f = only_factor(a, "field");
    if (f.n != 1)
      throw std::invalid_argument("field expects GF(q,m) specs, got " + a.name);
    const FieldTower& t = f.tower;
    json j;
    j["spec"] = a.name;
    j["op"] = "field";
    j["p"] = t.p;
    j["e"] = t.e;
    j["m"] = t.m;
    j["q"] = t.q;
    j["value"] = big_pow(BigInt(t.q), t.m).str();  // |F_{q^m}|
    j["defining_q_over_p"] = t.e > 1 ? json(t.fq->defining()) : json(nullptr);
    j["defining_qm_over_q"] = t.m > 1 ? json(t.fqm->defining()) : json(nullptr);
    j["generator"] = t.fqm->generator();
    j["ci"] = nullptr;
    j["samples"] = nullptr;
    j["seed"] = std::to_string(o.seed);
    j["method"] = "exact";
    j["version"] = kVersion;
    rows.push_back(std::move(j));
  }
  emit_flat(out, o, rows,
            {"spec", "p", "e", "m", "q", "value", "generator", "seed", "method"});
  return 0;
}

int cmd_count(const RunOpts& o, const std::string& kind, const std::string& poly_csv, u32 alpha,
              bool alpha_set, std::ostream& out) {
  std::vector<json> rows;
  for (const AlgebraSpec& a : collect_grid(o)) {
    BigInt value;
    std::string tag;
    if (kind == "elements") {
      value = big_pow(BigInt(a.k->size()), a.dim);
      tag = "q^dim";
    } else if (kind == "units") {
      value = algebra_units(a);
      tag = "product-of-GL-orders-times-radical";
    } else if (kind == "nilpotents") {
      value = algebra_nilpotents(a);
      tag = "nilpotent-cone-product-times-radical";
    } else if (kind == "charpoly") {
      const SimpleFactor& f = only_factor(a, "count --kind charpoly");
      if (poly_csv.empty())
        throw std::invalid_argument("count --kind charpoly needs --poly");
      const Poly p = poly_from_codes(f.tower.fqm, poly_csv);
      if (p.deg() != static_cast<int>(f.n) || p.c.back() != 1)
        throw std::invalid_argument("--poly must be monic of degree " + std::to_string(f.n) +
                                    " over the entry field of " + a.name);
      const CountResult r = count_charpoly(p);
      value = r.value;
      tag = r.formula_tag;
    } else {  // rank
      const SimpleFactor& f = only_factor(a, "count --kind rank");
      if (!alpha_set) throw std::invalid_argument("count --kind rank needs --alpha");
      if (alpha > f.n)
        throw std::invalid_argument("--alpha exceeds the matrix size of " + a.name);
      const BigInt t = big_pow(BigInt(f.tower.q), f.m);
      if (t > BigInt(u64(1) << 62))
        throw too_large_error("entry field of " + a.name + " is too large for rank counting");
      const CountResult r = count_rank(f.n, t.convert_to<u64>(), alpha);
      value = r.value;
      tag = r.formula_tag;
    }
    json j;
    j["spec"] = a.name;
    j["op"] = "count";
    j["kind"] = kind;
    if (kind == "charpoly") j["poly"] = poly_csv;
    if (kind == "rank") j["alpha"] = alpha;
    j["value"] = value.str();
    j["formula_tag"] = tag;
    j["ci"] = nullptr;
    j["samples"] = nullptr;
    j["seed"] = std::to_string(o.seed);
    j["method"] = "closed-form";
    j["version"] = kVersion;
    rows.push_back(std::move(j));
  }
  emit_flat(out, o, rows, {"spec", "kind", "value", "formula_tag", "seed", "method"});
  return 0;
}

int cmd_zeta(const RunOpts& o, const std::string& eps_text, std::ostream& out) {
  const BigRat eps = parse_rational(eps_text);
  std::vector<json> rows;
  for (const AlgebraSpec& a : collect_grid(o)) {
    const ZetaValue z = zeta_general(a, eps);
    json j;
    j["spec"] = a.name;
    j["op"] = "zeta";
    j["eps"] = rat_str(eps);
    j["value"] = z.exact ? json(rat_str(*z.exact)) : json(nullptr);
    j["approx"] = z.approx.convert_to<double>();
    j["err"] = z.err.convert_to<double>();
    j["ci"] = nullptr;
    j["samples"] = nullptr;
    j["seed"] = std::to_string(o.seed);
    j["method"] = z.exact ? "exact" : "bounded-float";
    j["version"] = kVersion;
    rows.push_back(std::move(j));
  }
  emit_flat(out, o, rows, {"spec", "eps", "value", "approx", "err", "seed", "method"});
  return 0;
}

int cmd_maxsub(const RunOpts& o, std::ostream& out) {
  if (o.format == "csv")
    throw std::invalid_argument("maxsub output is nested; use --format json or table");
  std::vector<json> rows;
  for (const AlgebraSpec& a : collect_grid(o)) {
    std::vector<SubalgebraClass> classes = standard_reps(a);
    for (SubalgebraClass& cl : classes)
      if (cl.class_size == 0) cl.class_size = class_size(a, cl);
    const std::map<BigInt, BigInt> table = m_n_counts(a);
    json j;
    j["spec"] = a.name;
    j["op"] = "maxsub";
    if (table.empty()) {
      j["value"] = nullptr;  // no proper unital subalgebras at all
      j["kappa"] = nullptr;
    } else {
      const auto& [min_index, at_min] = *table.begin();
      j["value"] = min_index.str();  // m(A)
      j["kappa"] = rat_str(BigRat(at_min, min_index));
    }
    json tbl = json::object();
    for (const auto& [index, count] : table) tbl[index.str()] = count.str();
    j["m_n"] = std::move(tbl);
    json cls = json::array();
    for (const SubalgebraClass& cl : classes) {
      json c;
      c["label"] = cl.label;
      c["kind"] = kind_name(cl.kind);
      c["index"] = cl.index.str();
      c["class_size"] = cl.class_size.str();
      cls.push_back(std::move(c));
    }
    j["classes"] = std::move(cls);
    j["ci"] = nullptr;
    j["samples"] = nullptr;
    j["seed"] = std::to_string(o.seed);
    j["method"] = "enumeration";
    j["version"] = kVersion;
    rows.push_back(std::move(j));
  }
  emit_flat(out, o, rows, {});
  return 0;
}

Condition make_condition(const std::string& name, const std::string& poly_csv, u32 alpha,
                         bool alpha_set, const std::vector<AlgebraSpec>& grid) {
  if (name == "none") return Condition::none();
  if (name == "nilpotent") return Condition::nilpotent();
  if (name == "unit") return Condition::unit();
  if (name == "charpoly") {
    if (poly_csv.empty()) throw std::invalid_argument("--condition charpoly needs --poly");
    const SimpleFactor& f = only_factor(grid.front(), "--condition charpoly");
    const Poly p = poly_from_codes(f.tower.fqm, poly_csv);
    if (p.deg() != static_cast<int>(f.n) || p.c.back() != 1)
      throw std::invalid_argument("--poly must be monic of degree " + std::to_string(f.n));
    return Condition::charpoly(p);
  }
  if (name == "rank") {
    if (!alpha_set) throw std::invalid_argument("--condition rank needs --alpha");
    return Condition::rank(alpha);
  }
  throw std::invalid_argument("unknown condition '" + name + "'");
}

int cmd_prob(const RunOpts& o, u32 d, const std::string& mode, const std::string& condition,
             const std::string& poly_csv, u32 alpha, bool alpha_set, std::ostream& out) {
  const std::vector<AlgebraSpec> grid = collect_grid(o);
  const EstMethod m = parse_mode(mode);
  const McConfig cfg = o.mc();
  std::vector<json> rows;
  for (const AlgebraSpec& a : grid) {
    const Estimate e =
        condition == "none"
            ? estimate_P(a, d, m, cfg)
            : estimate_conditional(a, make_condition(condition, poly_csv, alpha, alpha_set, grid),
                                   d, m, cfg);
    rows.push_back(estimate_row(a.name, "prob", d, e));
  }
  emit(out, o, rows);
  return 0;
}

int cmd_expect(const RunOpts& o, std::ostream& out) {
  const McConfig cfg = o.mc();
  std::vector<json> rows;
  for (const AlgebraSpec& a : collect_grid(o))
    rows.push_back(estimate_row(a.name, "expect", std::nullopt, estimate_E(a, cfg)));
  emit(out, o, rows);
  return 0;
}

int cmd_pfg(const RunOpts& o, std::ostream& out) {
  if (o.format == "csv")
    throw std::invalid_argument("pfg output is nested; use --format json or table");
  const McConfig cfg = o.mc();
  std::vector<json> rows;
  bool all_pass = true;
  for (const AlgebraSpec& a : collect_grid(o)) {
    const PfgReport r = pfg_report(a, cfg);
    json j;
    j["spec"] = a.name;
    j["op"] = "pfg";
    j["value"] = r.M;  // polynomial growth degree of m_n
    json tbl = json::object();
    for (const auto& [index, count] : r.m_table) tbl[index.str()] = count.str();
    j["m_n"] = std::move(tbl);
    j["V"] = r.V ? json(*r.V) : json(nullptr);
    j["E"] = estimate_row(a.name, "expect", std::nullopt, r.E);
    j["d"] = r.d;
    json checks = json::array();
    for (const PfgCheck& c : r.checks) {
      json cj;
      cj["id"] = c.id;
      cj["lhs"] = c.lhs;
      cj["rhs"] = c.rhs;
      cj["pass"] = c.pass;
      cj["note"] = c.note;
      checks.push_back(std::move(cj));
      all_pass = all_pass && c.pass;
    }
    j["checks"] = std::move(checks);
    j["ci"] = nullptr;
    j["samples"] = nullptr;
    j["seed"] = std::to_string(o.seed);
    j["method"] = "mixed";
    j["version"] = kVersion;
    rows.push_back(std::move(j));
  }
  emit_flat(out, o, rows, {});
  return all_pass ? 0 : 1;
}

int cmd_dgen(const RunOpts& o, u32 cap, std::ostream& out, std::ostream& err) {
  std::vector<json> rows;
  bool budget_hit = false, open = false;
  for (const AlgebraSpec& a : collect_grid(o)) {
    const DExact r = d_exact(a, cap, o.threshold);
    json j;
    j["spec"] = a.name;
    j["op"] = "dgen";
    j["cap"] = cap;
    j["value"] = r.d ? json(*r.d) : json(nullptr);
    j["exhausted"] = r.exhausted;
    j["closure_calls"] = r.closure_calls;
    j["budget_exceeded"] = r.budget_exceeded;
    if (r.d) {
      json w = json::array();
      for (u64 code : r.witness) w.push_back(std::to_string(code));
      j["witness"] = std::move(w);
    } else {
      j["witness"] = nullptr;
    }
    j["ci"] = nullptr;
    j["samples"] = nullptr;
    j["seed"] = std::to_string(o.seed);
    j["method"] = "exhaustive";
    j["version"] = kVersion;
    rows.push_back(std::move(j));
    if (!r.d) (r.budget_exceeded ? budget_hit : open) = true;
  }
  emit_flat(out, o, rows,
            {"spec", "cap", "value", "exhausted", "closure_calls", "seed", "method"});
  if (budget_hit) {
    emit_error(err, "budget", "generator search ran out of closure-call budget");
    return 3;
  }
  if (open) {
    emit_error(err, "indeterminate", "no generating tuple within the length cap; raise --cap");
    return 4;
  }
  return 0;
}

int cmd_verify(const RunOpts& o, const std::string& suite, std::ostream& out) {
  const McConfig cfg = o.mc();
  const std::vector<AlgebraSpec> grid = collect_grid(o);
  const std::vector<SuiteCheck> checks = verify_suite(suite, grid, cfg);
  std::vector<json> rows;
  bool all_pass = true;
  for (const SuiteCheck& c : checks) {
    json j;
    j["spec"] = c.spec_name;
    j["op"] = "verify";
    j["suite"] = suite;
    j["id"] = c.id;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["pass"] = c.pass;
    j["seed"] = std::to_string(o.seed);
    j["method"] = c.method;
    j["note"] = c.note;
    j["version"] = kVersion;
    rows.push_back(std::move(j));
    if (!c.pass && c.method != "skipped") all_pass = false;
  }
  emit_flat(out, o, rows, {"spec", "suite", "id", "lhs", "rhs", "pass", "method", "note"});
  return all_pass ? 0 : 1;
}

int cmd_report(const RunOpts& o, const std::string& target, std::ostream& out) {
  if (target != "acceptance")
    throw std::invalid_argument("unknown report '" + target + "' (available: acceptance)");
  return run_acceptance(o.seed, o.workers, out) == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite associative unital algebras over F_q: exact counts, maximal "
               "subalgebras, zeta values, and seeded generation-probability estimates",
               "fqgen"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunOpts o;

  CLI::App* field = app.add_subcommand("field", "inspect the field tower of a GF(q,m) spec");
  add_run_flags(field, o);

  CLI::App* count = app.add_subcommand("count", "exact element counts (closed forms)");
  std::string count_kind = "elements";
  std::string poly_csv;
  u32 alpha = 0;
  add_run_flags(count, o);
  count->add_option("--kind", count_kind, "what to count")
      ->check(CLI::IsMember({"elements", "units", "nilpotents", "charpoly", "rank"}))
      ->capture_default_str();
  count->add_option("--poly", poly_csv,
                    "monic polynomial, comma-separated little-endian element codes");
  CLI::Option* count_alpha = count->add_option("--alpha", alpha, "target rank");

  CLI::App* zeta = app.add_subcommand("zeta", "subalgebra zeta value at a rational exponent");
  std::string eps_text = "1";
  add_run_flags(zeta, o);
  zeta->add_option("--eps", eps_text, "exponent, e.g. 1 or 1/4")->capture_default_str();

  CLI::App* maxsub =
      app.add_subcommand("maxsub", "maximal-subalgebra classes, m_n table, m(A), kappa");
  add_run_flags(maxsub, o);

  CLI::App* prob = app.add_subcommand("prob", "P(A,d): probability that d draws generate A");
  u32 d = 2;
  std::string mode = "auto";
  std::string condition = "none";
  add_run_flags(prob, o);
  prob->add_option("--d", d, "tuple length")->capture_default_str();
  prob->add_option("--mode", mode, "evaluation mode")
      ->check(CLI::IsMember({"exhaustive", "montecarlo", "auto"}))
      ->capture_default_str();
  prob->add_option("--condition", condition, "restrict the element distribution")
      ->check(CLI::IsMember({"none", "nilpotent", "unit", "charpoly", "rank"}))
      ->capture_default_str();
  prob->add_option("--poly", poly_csv,
                   "target characteristic polynomial (little-endian element codes)");
  CLI::Option* prob_alpha = prob->add_option("--alpha", alpha, "target rank");

  CLI::App* expect =
      app.add_subcommand("expect", "E(A): expected number of uniform draws until generation");
  add_run_flags(expect, o);

  CLI::App* pfg = app.add_subcommand("pfg", "generation invariants M, V, E, d with bound checks");
  add_run_flags(pfg, o);

  CLI::App* dgen = app.add_subcommand("dgen", "exact minimal generator number by search");
  u32 cap = 4;
  add_run_flags(dgen, o);
  dgen->add_option("--cap", cap, "largest tuple length to try")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "named inequality suites over a spec grid");
  std::string suite;
  verify->add_option("suite", suite, "one of: minP, second, secondnil, estimateprob, rank_i, ranklemma, mind")
      ->required();
  add_run_flags(verify, o);

  CLI::App* report = app.add_subcommand("report", "run a built-in checklist");
  std::string target;
  report->add_option("target", target, "checklist name (acceptance)")->required();
  add_run_flags(report, o, /*takes_spec=*/false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help / --version
    emit_error(err, "input", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(field)) return cmd_field(o, out);
    if (app.got_subcommand(count))
      return cmd_count(o, count_kind, poly_csv, alpha, !count_alpha->empty(), out);
    if (app.got_subcommand(zeta)) return cmd_zeta(o, eps_text, out);
    if (app.got_subcommand(maxsub)) return cmd_maxsub(o, out);
    if (app.got_subcommand(prob))
      return cmd_prob(o, d, mode, condition, poly_csv, alpha, !prob_alpha->empty(), out);
    if (app.got_subcommand(expect)) return cmd_expect(o, out);
    if (app.got_subcommand(pfg)) return cmd_pfg(o, out);
    if (app.got_subcommand(dgen)) return cmd_dgen(o, cap, out, err);
    if (app.got_subcommand(verify)) return cmd_verify(o, suite, out);
    if (app.got_subcommand(report)) return cmd_report(o, target, out);
    emit_error(err, "input", "no subcommand given");
    return 2;
  } catch (const spec_parse_error& e) {
    json extra;
    extra["position"] = e.position;
    emit_error(err, "input", e.what(), extra);
    return 2;
  } catch (const std::invalid_argument& e) {
    emit_error(err, "input", e.what());
    return 2;
  } catch (const indeterminate_error& e) {
    json extra;
    extra["ci"] = json::array({e.ci_lo, e.ci_hi});
    extra["threshold"] = e.threshold;
    extra["samples"] = e.samples;
    emit_error(err, "indeterminate", e.what(), extra);
    return 4;
  } catch (const too_large_error& e) {
    emit_error(err, "budget", e.what());
    return 3;
  } catch (const acceptance_too_low_error& e) {
    json extra;
    extra["predicted_acceptance"] = e.predicted_acceptance;
    emit_error(err, "budget", e.what(), extra);
    return 3;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
    return 1;
  }
}

}  // namespace fqgen
