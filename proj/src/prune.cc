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

#include "prune.hh"

#include <bit>
#include <cstring>

#include "bits.hh"

namespace sortnet {

namespace {

// Visits every (coordinate j, destination dest) incidence of the set: member
// x with set bit (j-1) whose flip is also a member contributes
// dest = n - weight(x) + 1.  Stops and reports false when visit does.
template <typename Visit>
bool scan_incidences(const std::uint64_t* words, int n, Visit&& visit) {
  const std::size_t w_count = bits::word_count(n);
  for (std::size_t w = 0; w < w_count; ++w) {
    std::uint64_t v = words[w];
    while (v) {
      const word_t x =
          static_cast<word_t>((w << 6) + std::countr_zero(v));
      v &= v - 1;
      const int weight = std::popcount(x);
      if (weight == 0) continue;
      const int dest = n - weight + 1;
      word_t rest = x;
      while (rest) {
        const int b = std::countr_zero(rest);
        rest &= rest - 1;
        if (!bits::test(words, x ^ (word_t{1} << b))) continue;
        if (!visit(b + 1, dest)) return false;
      }
    }
  }
  return true;
}

struct Masks {
  std::array<std::uint32_t, kMaxChannels + 1> from{};
  std::array<std::uint32_t, kMaxChannels + 1> to{};
  std::array<std::uint32_t, kMaxChannels + 1> reach{};
};

}  // namespace

ChannelSets from_to_reach(const OutputSet& s) {
  ChannelSets sets;
  sets.n = s.n();
  scan_incidences(s.words().data(), s.n(), [&](int j, int dest) {
    sets.from[j] |= std::uint32_t{1} << (dest - 1);
    sets.to[dest] |= std::uint32_t{1} << (j - 1);
    return true;
  });
  for (int c = 1; c <= s.n(); ++c) {
    sets.reach[c] =
        sets.from[c] | sets.to[c] | (std::uint32_t{1} << (c - 1));
  }
  return sets;
}

bool sortable_in_two_words(const std::uint64_t* words, int n) {
  Masks m;
  for (int c = 1; c <= n; ++c) m.reach[c] = std::uint32_t{1} << (c - 1);
  return scan_incidences(words, n, [&](int j, int dest) {
    const std::uint32_t dest_bit = std::uint32_t{1} << (dest - 1);
    const std::uint32_t j_bit = std::uint32_t{1} << (j - 1);
    if (std::popcount(m.from[j] |= dest_bit) > 4) return false;
    if (std::popcount(m.to[dest] |= j_bit) > 4) return false;
    if (std::popcount(m.reach[j] |= dest_bit) > 5) return false;
    if (std::popcount(m.reach[dest] |= j_bit) > 5) return false;
    return true;
  });
}

bool sortable_in_three_words(const std::uint64_t* words, int n) {
  Masks m;
  return scan_incidences(words, n, [&](int j, int dest) {
    if (std::popcount(m.from[j] |= std::uint32_t{1} << (dest - 1)) > 8) {
      return false;
    }
    if (std::popcount(m.to[dest] |= std::uint32_t{1} << (j - 1)) > 8) {
      return false;
    }
    return true;
  });
}

bool sortable_in_two(const OutputSet& s) {
  return sortable_in_two_words(s.words().data(), s.n());
}

bool sortable_in_three(const OutputSet& s) {
  return sortable_in_three_words(s.words().data(), s.n());
}

bool lookahead_admits_words(const std::uint64_t* words, int n, Comparator c,
                            int bound) {
  const std::size_t w_count = bits::word_count(n);
  std::uint64_t ext[bits::kMaxWords];
  std::uint64_t scratch[bits::kMaxWords];
  std::memcpy(ext, words, w_count * sizeof(std::uint64_t));
  bits::apply_comparator(ext, w_count, c.lo - 1, c.hi - 1, scratch);

  // Only the comparator's own channels are bounded, and from[p] collects the
  // destinations dest(x) of members x carrying a set bit at coordinate p
  // whose flip is also a member.
  const word_t bit_lo = word_t{1} << (c.lo - 1);
  const word_t bit_hi = word_t{1} << (c.hi - 1);
  std::uint32_t mask_lo = 0;
  std::uint32_t mask_hi = 0;
  for (std::size_t w = 0; w < w_count; ++w) {
    std::uint64_t v = ext[w];
    while (v) {
      const word_t x =
          static_cast<word_t>((w << 6) + std::countr_zero(v));
      v &= v - 1;
      if (!(x & (bit_lo | bit_hi))) continue;
      const std::uint32_t dest_bit = std::uint32_t{1}
                                     << (n - std::popcount(x));
      if ((x & bit_lo) && bits::test(ext, x ^ bit_lo)) {
        if (std::popcount(mask_lo |= dest_bit) > bound) return false;
      }
      if ((x & bit_hi) && bits::test(ext, x ^ bit_hi)) {
        if (std::popcount(mask_hi |= dest_bit) > bound) return false;
      }
    }
  }
  return true;
}

bool lookahead_admits(const OutputSet& s, Comparator c, int bound) {
  return lookahead_admits_words(s.words().data(), s.n(), c, bound);
}

namespace {

// Shared shape of the level filters: an optional per-comparator look-ahead
// bound and an optional check on the extended set.
std::vector<Level> filter_levels(const OutputSet& s,
                                 const std::vector<Level>& levels,
                                 int comparator_bound,
                                 bool (*check)(const std::uint64_t*, int)) {
  const int n = s.n();
  const std::size_t w_count = bits::word_count(n);

  // admit[lo][hi] caches the look-ahead verdict per comparator; one
  // evaluation covers every level containing that comparator.
  std::array<std::array<bool, kMaxChannels + 1>, kMaxChannels + 1> admit;
  if (comparator_bound > 0) {
    for (int lo = 1; lo < n; ++lo) {
      for (int hi = lo + 1; hi <= n; ++hi) {
        admit[lo][hi] = lookahead_admits(
            s, Comparator{static_cast<std::uint8_t>(lo),
                          static_cast<std::uint8_t>(hi)},
            comparator_bound);
      }
    }
  }

  std::vector<Level> out;
  std::uint64_t ext[bits::kMaxWords];
  std::uint64_t scratch[bits::kMaxWords];
  for (const Level& level : levels) {
    bool ok = true;
    if (comparator_bound > 0) {
      for (const Comparator& c : level) {
        if (!admit[c.lo][c.hi]) {
          ok = false;
          break;
        }
      }
    }
    if (ok && check != nullptr) {
      std::memcpy(ext, s.words().data(), w_count * sizeof(std::uint64_t));
      bits::apply_level(ext, w_count, level.data(), level.size(), scratch);
      ok = check(ext, n);
    }
    if (ok) out.push_back(level);
  }
  return out;
}

}  // namespace

std::vector<Level> second_last_levels(const OutputSet& s,
                                      const std::vector<Level>& levels) {
  return filter_levels(s, levels, 0, &sortable_in_two_words);
}

std::vector<Level> third_last_levels(const OutputSet& s,
                                     const std::vector<Level>& levels) {
  return filter_levels(s, levels, 4, &sortable_in_three_words);
}

std::vector<Level> fourth_last_levels(const OutputSet& s,
                                      const std::vector<Level>& levels) {
  return filter_levels(s, levels, 8, nullptr);
}

}  // namespace sortnet
