#pragma once

#include <cstring>
#include <string_view>

#include "fqgen/common.hpp"

namespace fqgen {

// Counter-based stream: Philox4x64-10 (Salmon et al., SC'11), the same
// generator NumPy and JAX ship.  A stream is fully determined by
// (master_seed, stream_id); the counter indexes 256-bit blocks.  Streams
// never overlap and results are byte-stable across platforms and thread
// counts, which is what makes sharded Monte Carlo reproducible.
struct RandomStream {
  u64 master_seed = 0;
  u64 stream_id = 0;
  u64 counter = 0;

  RandomStream() = default;
  RandomStream(u64 seed, u64 stream) : master_seed(seed), stream_id(stream) {}

  // Documented derivation for sharded work: stream_id is FNV-1a over the
  // operation tag bytes followed by the little-endian shard index.
  static RandomStream derive(u64 seed, std::string_view tag, u64 shard) {
    u64 h = 0xcbf29ce484222325ull;
    auto mix = [&h](unsigned char b) {
      h ^= b;
      h *= 0x100000001b3ull;
    };
    for (unsigned char c : tag) mix(c);
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(shard >> (8 * i)));
    return RandomStream(seed, h);
  }

  u64 next_u64() {
    if (avail_ == 0) refill();
    return buf_[4 - avail_--];
  }

  // Uniform on [0, n) by rejection; exact, no modulo bias.
  u64 below(u64 n) {
    // 2^64 mod n == (2^64 - n) mod n for n >= 1.
    const u64 bad = (0 - n) % n;
    for (;;) {
      const u64 x = next_u64();
      if (x <= ~bad) return x % n;  // x < 2^64 - bad
    }
  }

  // Uniform field-digit in [0, q); q a prime power far below 2^32.
  u32 digit(u32 q) {
    if ((q & (q - 1)) == 0) return static_cast<u32>(next_u64() & (q - 1));
    return static_cast<u32>(below(q));
  }

  double unit_double() {  // [0, 1) with 53 random bits
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  u64 buf_[4] = {0, 0, 0, 0};
  unsigned avail_ = 0;

  static void mulhilo(u64 a, u64 b, u64& hi, u64& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<u64>(p >> 64);
    lo = static_cast<u64>(p);
  }

  void refill() {
    // Philox4x64 round constants from the reference implementation.
    constexpr u64 M0 = 0xD2E7470EE14C6C93ull, M1 = 0xCA5A826395121157ull;
    constexpr u64 W0 = 0x9E3779B97F4A7C15ull, W1 = 0xBB67AE8584CAA73Bull;
    u64 x0 = counter, x1 = 0, x2 = 0, x3 = 0;
    u64 k0 = master_seed, k1 = stream_id;
    for (int round = 0; round < 10; ++round) {
      if (round) {
        k0 += W0;
        k1 += W1;
      }
      u64 hi0, lo0, hi1, lo1;
      mulhilo(M0, x0, hi0, lo0);
      mulhilo(M1, x2, hi1, lo1);
      const u64 y0 = hi1 ^ x1 ^ k0;
      const u64 y1 = lo1;
      const u64 y2 = hi0 ^ x3 ^ k1;
      const u64 y3 = lo0;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
    }
    buf_[0] = x0;
    buf_[1] = x1;
    buf_[2] = x2;
    buf_[3] = x3;
    ++counter;
    avail_ = 4;
  }
};

}  // namespace fqgen
