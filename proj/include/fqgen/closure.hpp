#pragma once

#include <optional>

#include "fqgen/algebra.hpp"

namespace fqgen {

// Multiplication table compiled out of an AlgebraSpec for the generation
// hot path.  Two layouts:
//   q == 2: basis products are u64 bitmasks and subspace rows live in single
//           words, so closure arithmetic is XOR and popcount;
//   q > 2:  flat dim^3 byte table of structure constants plus small add/mul/
//           inv tables for the scalar field (codes fit in a byte).
struct MulTable {
  u32 dim = 0;
  u32 q = 2;
  bool bits = false;
  FieldPtr F;
  std::vector<u64> t2;   // [i*dim+j] -> product bitmask
  u64 one2 = 0;
  std::vector<u8> tq;    // [(i*dim+j)*dim+l] -> coefficient
  std::vector<u8> oneq;
  std::vector<u8> addtab, multab, invtab;

  static MulTable compile(const AlgebraSpec& a);
};

struct ClosureResult {
  u32 dim = 0;
  bool generates = false;
  u32 rounds = 0;           // product depth of the last new basis element
                            // (seeds are depth 0, u*v is 1 + max of depths)
  std::vector<Vec> basis;   // canonical (RREF) basis of the generated subalgebra
};

// Subalgebra generated by {1} united with xs (unital closure).
ClosureResult generated_subalgebra(const MulTable& t, const std::vector<Vec>& xs);

// Early-exit variant: true iff {1} u xs generates the whole algebra.
bool generates(const MulTable& t, const std::vector<Vec>& xs);
// Same, elements given by their integer codes (radix-q coordinate strings).
bool generates_codes(const MulTable& t, const u64* codes, u32 count);

struct DExact {
  std::optional<u32> d;     // minimal number of generators, if found
  u32 exhausted = 0;        // all tuple lengths <= exhausted were ruled out
  u64 closure_calls = 0;
  bool budget_exceeded = false;
  std::vector<u64> witness; // element codes of the first generating tuple
};

// Minimal d with P(A, d) > 0 by exhaustive search in lexicographic code
// order, one tuple length at a time, up to `cap` generators and at most
// `budget` closure calls per tuple length.
DExact d_exact(const AlgebraSpec& a, u32 cap = 4, u64 budget = 1ull << 26);

}  // namespace fqgen
