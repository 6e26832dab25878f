// Copyright 2026 The sortnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Word-parallel kernels over sets of binary words.  A set over n channels is
// a bitset of 2^n bits stored as word_count(n) uint64 words; bit x is set
// when word x belongs to the set.  These are the hot loops of the search.

#ifndef SORTNET_BITS_HH_
#define SORTNET_BITS_HH_

#include <bit>
#include <cstddef>
#include <cstdint>

#include "netcore.hh"

namespace sortnet::bits {

inline constexpr std::size_t kMaxWords = std::size_t{1} << (16 - 6);

constexpr std::size_t word_count(int n) {
  return n <= 6 ? 1 : (std::size_t{1} << (n - 6));
}

// Mask of the valid index range inside the last storage word (n <= 6 only;
// for larger n every storage word is fully in range).
constexpr std::uint64_t tail_mask(int n) {
  return n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (1u << n)) - 1);
}

// 64-bit slice, at word offset w, of the indicator "index has bit p set".
inline std::uint64_t index_bit_mask(int p, std::size_t w) {
  constexpr std::uint64_t kPattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  if (p < 6) return kPattern[p];
  return ((w >> (p - 6)) & 1u) ? ~std::uint64_t{0} : 0;
}

// Applies comparator <pi+1, pj+1> (0-based bit positions pi < pj) to the set
// in place: every member with bit pi set and bit pj clear moves to the word
// with those two bits exchanged, i.e. its index grows by 2^pj - 2^pi.
// scratch must hold w_count words.
inline void apply_comparator(std::uint64_t* x, std::size_t w_count, int pi,
                             int pj, std::uint64_t* scratch) {
  const std::uint64_t delta =
      (std::uint64_t{1} << pj) - (std::uint64_t{1} << pi);
  if (w_count == 1) {
    const std::uint64_t moved =
        x[0] & index_bit_mask(pi, 0) & ~index_bit_mask(pj, 0);
    x[0] = (x[0] ^ moved) | (moved << delta);
    return;
  }
  for (std::size_t w = 0; w < w_count; ++w) {
    const std::uint64_t moved =
        x[w] & index_bit_mask(pi, w) & ~index_bit_mask(pj, w);
    x[w] ^= moved;
    scratch[w] = moved;
  }
  const std::size_t q = static_cast<std::size_t>(delta >> 6);
  const unsigned r = static_cast<unsigned>(delta & 63u);
  if (r == 0) {
    for (std::size_t w = 0; w + q < w_count; ++w) x[w + q] |= scratch[w];
  } else {
    for (std::size_t w = 0; w + q < w_count; ++w) {
      const std::uint64_t v = scratch[w];
      x[w + q] |= v << r;
      if (w + q + 1 < w_count) x[w + q + 1] |= v >> (64 - r);
    }
  }
}

// Applies a whole level in place; comparators touch disjoint index bits, so
// sequential application matches parallel semantics.
inline void apply_level(std::uint64_t* x, std::size_t w_count,
                        const Comparator* comps, std::size_t count,
                        std::uint64_t* scratch) {
  for (std::size_t k = 0; k < count; ++k) {
    apply_comparator(x, w_count, comps[k].lo - 1, comps[k].hi - 1, scratch);
  }
}

inline std::uint32_t popcount_all(const std::uint64_t* x,
                                  std::size_t w_count) {
  std::uint32_t total = 0;
  for (std::size_t w = 0; w < w_count; ++w) {
    total += static_cast<std::uint32_t>(std::popcount(x[w]));
  }
  return total;
}

inline bool subset(const std::uint64_t* a, const std::uint64_t* b,
                   std::size_t w_count) {
  for (std::size_t w = 0; w < w_count; ++w) {
    if (a[w] & ~b[w]) return false;
  }
  return true;
}

inline bool equal(const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t w_count) {
  for (std::size_t w = 0; w < w_count; ++w) {
    if (a[w] != b[w]) return false;
  }
  return true;
}

inline bool test(const std::uint64_t* x, word_t index) {
  return (x[index >> 6] >> (index & 63u)) & 1u;
}

inline void set(std::uint64_t* x, word_t index) {
  x[index >> 6] |= std::uint64_t{1} << (index & 63u);
}

// Content hash, stable across runs; equal sets hash equal.
inline std::uint64_t hash_bits(const std::uint64_t* x, std::size_t w_count) {
  std::uint64_t h = 0x9E3779B97F4A7C15ull + w_count;
  for (std::size_t w = 0; w < w_count; ++w) {
    std::uint64_t v = x[w] + 0x9E3779B97F4A7C15ull;
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
    h = (h ^ v ^ (v >> 31)) * 0xD6E8FEB86659FD93ull;
  }
  return h ^ (h >> 32);
}

// Calls fn(word) for every member in ascending word order.
template <typename Fn>
inline void for_each_member(const std::uint64_t* x, std::size_t w_count,
                            Fn&& fn) {
  for (std::size_t w = 0; w < w_count; ++w) {
    std::uint64_t v = x[w];
    while (v) {
      fn(static_cast<word_t>((w << 6) + std::countr_zero(v)));
      v &= v - 1;
    }
  }
}

}  // namespace sortnet::bits

#endif  // SORTNET_BITS_HH_
