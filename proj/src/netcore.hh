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

// Core model: comparators, levels (parallel comparator sets), networks, and
// evaluation on binary words.
//
// Word encoding, fixed once and used everywhere: a binary input on n channels
// is an n-bit machine word in which bit (i-1) carries the value on channel i,
// so channel 1 is the least significant bit.  A word is sorted when the zeros
// occupy the low channels and the ones the high channels, i.e. the set bits
// form the top block of the n-bit window.

#ifndef SORTNET_NETCORE_HH_
#define SORTNET_NETCORE_HH_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sortnet {

inline constexpr int kMinChannels = 2;
inline constexpr int kMaxChannels = 16;

// Binary input/output word; only the low n bits are meaningful.
using word_t = std::uint32_t;

// Min-max comparator between two distinct channels, 1 <= lo < hi <= n.
// The minimum lands on lo and the maximum on hi; generalized comparators
// (descending pairs) are rejected everywhere, including the parser.
struct Comparator {
  std::uint8_t lo = 0;
  std::uint8_t hi = 0;

  friend bool operator==(const Comparator&, const Comparator&) = default;
  friend auto operator<=>(const Comparator&, const Comparator&) = default;
};

// One depth level: comparators acting in parallel on pairwise-disjoint
// channels, kept sorted by lo channel.  The empty level is valid.
using Level = std::vector<Comparator>;

// A comparator network: an ordered sequence of levels on n channels.
// depth() is the number of levels, including empty ones.
struct Network {
  int n = 0;
  std::vector<Level> levels;

  int depth() const { return static_cast<int>(levels.size()); }
  std::size_t comparator_count() const;

  friend bool operator==(const Network&, const Network&) = default;
};

// Validation helpers; throw std::invalid_argument on violation.
void check_channel_count(int n);
void check_level(int n, const Level& level);
void check_network(const Network& net);

// Applies one level to a word: every comparator routes its smaller value to
// lo and larger value to hi.  Comparators within a level commute.
word_t apply_level(word_t x, const Level& level);

// Runs the whole network on one input word.
word_t evaluate(const Network& net, word_t input);

word_t word_mask(int n);
bool is_sorted_word(word_t x, int n);

// The unique sorted word with the given number of ones (0 <= ones <= n).
word_t sorted_word(int n, int ones);

// True iff the network sorts all 2^n binary inputs (and hence all inputs).
bool is_sorting_network(const Network& net);

// Reflection: channel i maps to n+1-i and values are complemented.  A word
// maps to its reversed complement; a comparator <i,j> maps to <n-j+1,n-i+1>.
// Reflection preserves the sorting property and is an involution.
word_t reflect_word(word_t x, int n);
Level reflect_level(const Level& level, int n);
Network reflect_network(const Network& net);

// Concatenation: appends the levels of b (a network or a single level) after
// the levels of a.  Channel counts must match.
Network concat(const Network& a, const Network& b);
Network concat(const Network& a, const Level& b);

// Every level on n channels (every matching of the channel graph, empty level
// included), in canonical lexicographic order: levels compare element-wise as
// comparator sequences, comparators by (lo, hi), shorter prefix first.  The
// count equals the involution number I(n).
std::vector<Level> enumerate_levels(int n);

// Text format, one network per file:
//   n=<int>                 header line
//   1:2 3:4                 one line per level, comparators as lo:hi
//                           (a blank line is an empty level)
// '#' starts a comment; comment-only lines are ignored.  format_network
// emits canonical text (no comments), and parse/format round-trip exactly
// on canonical text.  Parse failures throw std::invalid_argument whose
// what() begins with "line <k>: " (1-based).
Network parse_network(std::string_view text);
std::string format_network(const Network& net);

}  // namespace sortnet

#endif  // SORTNET_NETCORE_HH_
