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

// Test-only reference implementations, deliberately independent of the word
// encoding and bit tricks used by the library: channels live in a plain
// array here.  Library results are checked against these.

#ifndef SORTNET_TESTS_TEST_UTIL_HH_
#define SORTNET_TESTS_TEST_UTIL_HH_

#include <algorithm>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "netcore.hh"

namespace testutil {

// Channel-string to word: "0101" lists x_1 x_2 x_3 x_4 left to right.
inline sortnet::word_t wrd(std::string_view s) {
  sortnet::word_t x = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') x |= sortnet::word_t{1} << i;
  }
  return x;
}

inline std::string wstr(sortnet::word_t x, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i) {
    if ((x >> i) & 1u) s[i] = '1';
  }
  return s;
}

// Array-model evaluator: values in channel order, min to lo, max to hi.
inline sortnet::word_t eval_reference(const sortnet::Network& net,
                                      sortnet::word_t input) {
  std::vector<int> v(net.n);
  for (int i = 0; i < net.n; ++i) v[i] = (input >> i) & 1;
  for (const sortnet::Level& level : net.levels) {
    for (const sortnet::Comparator& c : level) {
      int& a = v[c.lo - 1];
      int& b = v[c.hi - 1];
      if (a > b) std::swap(a, b);
    }
  }
  sortnet::word_t out = 0;
  for (int i = 0; i < net.n; ++i) {
    if (v[i]) out |= sortnet::word_t{1} << i;
  }
  return out;
}

inline bool sorted_reference(sortnet::word_t x, int n) {
  for (int i = 0; i + 1 < n; ++i) {
    if (((x >> i) & 1u) > ((x >> (i + 1)) & 1u)) return false;
  }
  return true;
}

// Odd-even mergesort for power-of-two n: depth 3 at n=4, 6 at n=8, 10 at
// n=16.  Each (p, k) pass forms one level of disjoint comparators.
inline sortnet::Network batcher(int n) {
  sortnet::Network net{n, {}};
  for (int p = 1; p < n; p *= 2) {
    for (int k = p; k >= 1; k /= 2) {
      sortnet::Level level;
      for (int j = k % p; j <= n - 1 - k; j += 2 * k) {
        for (int i = 0; i <= std::min(k - 1, n - j - k - 1); ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) {
            level.push_back(
                {static_cast<std::uint8_t>(i + j + 1),
                 static_cast<std::uint8_t>(i + j + k + 1)});
          }
        }
      }
      std::sort(level.begin(), level.end());
      net.levels.push_back(std::move(level));
    }
  }
  return net;
}

// Keeps only comparators inside the first keep_n channels.  Fixing the
// dropped high channels at 1 makes the dropped comparators identities, so a
// sorting network stays sorting after the cut.
inline sortnet::Network keep_low_channels(const sortnet::Network& net,
                                          int keep_n) {
  sortnet::Network out{keep_n, {}};
  for (const sortnet::Level& level : net.levels) {
    sortnet::Level cut;
    for (const sortnet::Comparator& c : level) {
      if (c.hi <= keep_n) cut.push_back(c);
    }
    out.levels.push_back(std::move(cut));
  }
  return out;
}

inline sortnet::Network random_network(std::mt19937& rng,
                                       const std::vector<sortnet::Level>& all,
                                       int n, int depth) {
  sortnet::Network net{n, {}};
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int t = 0; t < depth; ++t) net.levels.push_back(all[pick(rng)]);
  return net;
}

}  // namespace testutil

#endif  // SORTNET_TESTS_TEST_UTIL_HH_
