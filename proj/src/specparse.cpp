#include "fqgen/specparse.hpp"

#include <cctype>
#include <cstdlib>

#include "json.hpp"

namespace fqgen {

namespace {

// q = p^e for a prime p, or report failure
bool prime_power(u64 q, u64& p, u32& e) {
  if (q < 2) return false;
  u64 d = 2;
  while (d * d <= q && q % d != 0) ++d;
  p = (d * d <= q) ? d : q;
  e = 0;
  u64 r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  return r == 1;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  AlgebraSpec parse() {
    AlgebraSpec a = spec();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return a;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw spec_parse_error(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  u64 integer() {
    skip_ws();
    const size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    if (pos_ - start > 18) fail("integer too large");
    return std::strtoull(s_.substr(start, pos_ - start).c_str(), nullptr, 10);
  }

  std::string keyword() {
    skip_ws();
    const size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an algebra description");
    return s_.substr(start, pos_ - start);
  }

  // q as written in the text, factored
  void prime_power_arg(u64& p, u32& e) {
    skip_ws();
    const size_t at = pos_;
    const u64 q = integer();
    if (!prime_power(q, p, e)) throw spec_parse_error("q must be a prime power", at);
  }

  AlgebraSpec spec() {
    const size_t at = pos_;
    const std::string kw = keyword();
    if (kw == "M") {
      expect('(');
      const u64 n = integer();
      expect(',');
      const u64 m = integer();
      expect(',');
      u64 p;
      u32 e;
      prime_power_arg(p, e);
      expect(')');
      if (n == 0 || m == 0) throw spec_parse_error("M needs n >= 1 and m >= 1", at);
      return simple_algebra(static_cast<u32>(n), static_cast<u32>(m), p, e);
    }
    if (kw == "GF") {
      expect('(');
      u64 p;
      u32 e;
      prime_power_arg(p, e);
      expect(',');
      const u64 m = integer();
      expect(')');
      if (m == 0) throw spec_parse_error("GF needs m >= 1", at);
      return simple_algebra(1, static_cast<u32>(m), p, e);
    }
    if (kw == "prod") {
      expect('(');
      std::vector<AlgebraSpec> parts;
      parts.push_back(spec());
      while (peek(',')) {
        expect(',');
        parts.push_back(spec());
      }
      expect(')');
      if (parts.size() < 2) throw spec_parse_error("prod needs at least two factors", at);
      return product_algebra(parts);
    }
    if (kw == "P") {
      expect('(');
      std::vector<u32> blocks;
      blocks.push_back(static_cast<u32>(integer()));
      while (peek(',')) {
        expect(',');
        blocks.push_back(static_cast<u32>(integer()));
      }
      expect(';');
      const u64 m = integer();
      expect(',');
      u64 p;
      u32 e;
      prime_power_arg(p, e);
      expect(')');
      if (blocks.size() < 2)
        throw spec_parse_error("P needs at least two diagonal blocks (one block is M)", at);
      for (u32 b : blocks)
        if (b == 0) throw spec_parse_error("P blocks must be >= 1", at);
      if (m == 0) throw spec_parse_error("P needs m >= 1", at);
      return parabolic_algebra(blocks, static_cast<u32>(m), p, e);
    }
    if (kw == "T") {
      expect('(');
      u64 p;
      u32 e;
      prime_power_arg(p, e);
      expect(',');
      const u64 j = integer();
      expect(')');
      if (j == 0) throw spec_parse_error("T needs j >= 1", at);
      return truncated_poly_algebra(p, e, static_cast<u32>(j));
    }
    throw spec_parse_error("unknown algebra form '" + kw + "'", at);
  }
};

}  // namespace

AlgebraSpec parse_spec(const std::string& text) { return Parser(text).parse(); }

std::vector<AlgebraSpec> expand_specs(const std::string& text) {
  // textual expansion: each "a..b" range multiplies the candidate list
  std::vector<std::string> forms{text};
  for (size_t i = 0; i < forms.size();) {
    const std::string& f = forms[i];
    const size_t dots = f.find("..");
    if (dots == std::string::npos) {
      ++i;
      continue;
    }
    size_t lo_start = dots;
    while (lo_start > 0 && std::isdigit(static_cast<unsigned char>(f[lo_start - 1]))) --lo_start;
    size_t hi_end = dots + 2;
    while (hi_end < f.size() && std::isdigit(static_cast<unsigned char>(f[hi_end]))) ++hi_end;
    if (lo_start == dots || hi_end == dots + 2)
      throw spec_parse_error("malformed range", dots);
    const u64 lo = std::strtoull(f.substr(lo_start, dots - lo_start).c_str(), nullptr, 10);
    const u64 hi = std::strtoull(f.substr(dots + 2, hi_end - dots - 2).c_str(), nullptr, 10);
    if (lo > hi) throw spec_parse_error("empty range", lo_start);
    std::vector<std::string> expanded;
    expanded.reserve(forms.size() + hi - lo);
    for (size_t j = 0; j < i; ++j) expanded.push_back(forms[j]);
    for (u64 v = lo; v <= hi; ++v)
      expanded.push_back(f.substr(0, lo_start) + std::to_string(v) + f.substr(hi_end));
    for (size_t j = i + 1; j < forms.size(); ++j) expanded.push_back(forms[j]);
    forms = std::move(expanded);
    if (forms.size() > 4096) throw spec_parse_error("range expands to more than 4096 entries", 0);
  }
  std::vector<AlgebraSpec> out;
  out.reserve(forms.size());
  for (const std::string& f : forms) out.push_back(parse_spec(f));
  return out;
}

std::string spec_to_json(const AlgebraSpec& a) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["name"] = a.name;
  doc["q"] = a.k->size();
  doc["dim"] = a.dim;
  doc["unity"] = a.one;
  json tensor = json::array();
  for (u32 i = 0; i < a.dim; ++i)
    for (u32 j = 0; j < a.dim; ++j)
      for (const auto& [l, c] : a.prod[static_cast<size_t>(i) * a.dim + j])
        tensor.push_back({i, j, l, c});
  doc["tensor"] = std::move(tensor);
  if (a.dec) {
    json dec;
    json factors = json::array();
    for (const SimpleFactor& f : a.dec->factors) {
      json fd;
      fd["n"] = f.n;
      fd["m"] = f.m;
      fd["q"] = f.tower.q;
      fd["basis"] = f.basis;
      fd["unity"] = f.unity;
      factors.push_back(std::move(fd));
    }
    dec["factors"] = std::move(factors);
    dec["radical"] = a.dec->radical;
    json powers = json::array();
    for (const auto& layer : a.dec->radical_powers) powers.push_back(layer);
    dec["radical_powers"] = std::move(powers);
    doc["decomposition"] = std::move(dec);
  } else {
    doc["decomposition"] = nullptr;
  }
  return doc.dump();
}

}  // namespace fqgen
