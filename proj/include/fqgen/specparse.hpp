#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fqgen/algebra.hpp"

namespace fqgen {

// Parse failure with the byte offset into the input where it was detected.
struct spec_parse_error : std::runtime_error {
  size_t position;
  spec_parse_error(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Parse one algebra description.  Grammar (whitespace ignored):
//   M(n,m,q)           n x n matrices over the degree-m extension of F_q
//   GF(q,m)            the field with q^m elements, viewed over F_q
//   prod(s1,s2,...)    direct product of two or more descriptions
//   P(a1,...,ak;m,q)   block upper-triangular matrices over F_{q^m} with
//                      diagonal blocks a1..ak (k >= 2)
//   T(q,j)             F_q[x]/(x^j)
// q must be a prime power.  Constructed algebras carry their Wedderburn
// decomposition, and parse_spec(a.name) reproduces a for every constructible
// description.
AlgebraSpec parse_spec(const std::string& text);

// Like parse_spec, but any integer slot may carry a range "a..b" (inclusive);
// the cartesian product of all ranges is expanded left to right.  A plain
// description expands to itself.  At most 4096 expansions.
std::vector<AlgebraSpec> expand_specs(const std::string& text);

// Canonical JSON document for an algebra: name, scalar field, dimension,
// unity coordinates, sparse structure constants as [i, j, l, c] rows in
// lexicographic order, and the Wedderburn data when present.  Byte-stable
// for equal inputs.
std::string spec_to_json(const AlgebraSpec& a);

}  // namespace fqgen
