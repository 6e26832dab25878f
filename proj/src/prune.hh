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

// Necessary conditions for an output set to be completable within a small
// number of levels, derived from how single channels can still move.
//
// For members x of S with a set bit at coordinate i whose flip y = x - bit(i)
// is also in S, the distinguishing one of x must still travel from channel i
// to output channel dest(x) = n - weight(x) + 1 inside any completion; we
// record dest(x) in from[i] (destinations demanded of channel i) and i in
// to[dest(x)] (channels that must feed dest(x)).  Bounds on those per-channel
// sets limit how much routing the remaining levels can still perform: a
// channel splits into at most 4 others through two levels (8 through three),
// and its reach, self included, covers at most 5 channels through two.  All
// checks are necessary conditions only; they may pass for uncompletable sets
// but never fail for completable ones.

#ifndef SORTNET_PRUNE_HH_
#define SORTNET_PRUNE_HH_

#include <array>
#include <cstdint>
#include <vector>

#include "netcore.hh"
#include "outset.hh"

namespace sortnet {

// Per-channel movement sets.  Masks are indexed by channel (1-based, index 0
// unused); bit (q-1) set in from[c] means channel q is a member of from[c].
// from[c] holds the destinations of differences currently sitting on channel
// c; to[c] holds the channels whose differences must arrive at c.
// Invariants: q in from[c] iff c in to[q]; reach[c] = from[c] | to[c] | {c}.
struct ChannelSets {
  int n = 0;
  std::array<std::uint32_t, kMaxChannels + 1> from{};
  std::array<std::uint32_t, kMaxChannels + 1> to{};
  std::array<std::uint32_t, kMaxChannels + 1> reach{};
};

// Builds the full movement sets by flipping each set bit of each member and
// testing membership (never by pairwise comparison of members).
ChannelSets from_to_reach(const OutputSet& s);

// False iff some channel has |from| > 4, |to| > 4, or |reach| > 5; a set
// failing this cannot be completed by two further levels.
bool sortable_in_two(const OutputSet& s);

// False iff some channel has |from| > 8 or |to| > 8; a set failing this
// cannot be completed by three further levels.
bool sortable_in_three(const OutputSet& s);

// Raw-word forms of the two checks for inner loops that extend sets into
// scratch buffers; `words` holds the bits::word_count(n) set words.
bool sortable_in_two_words(const std::uint64_t* words, int n);
bool sortable_in_three_words(const std::uint64_t* words, int n);

// Per-comparator look-ahead: true when appending the single-comparator level
// {c} keeps |from| of both of c's channels within `bound`.  Appending the
// rest of any level containing c separately leaves those two channels
// unpaired in it, which caps their onward spread by the same bound, so this
// one evaluation soundly decides c for every level containing it (bound 8
// when four levels remain, 4 when three remain).
bool lookahead_admits(const OutputSet& s, Comparator c, int bound);
bool lookahead_admits_words(const std::uint64_t* words, int n, Comparator c,
                            int bound);

// Candidate filters for the last levels of a depth-d construction.  Each
// returns the sublist of `levels` (order preserved) that the corresponding
// necessary conditions admit.

// Levels L with sortable_in_two(extend(s, L)).
std::vector<Level> second_last_levels(const OutputSet& s,
                                      const std::vector<Level>& levels);

// Levels whose every comparator passes the bound-4 look-ahead and whose
// extension passes sortable_in_three.
std::vector<Level> third_last_levels(const OutputSet& s,
                                     const std::vector<Level>& levels);

// Levels whose every comparator passes the bound-8 look-ahead.
std::vector<Level> fourth_last_levels(const OutputSet& s,
                                      const std::vector<Level>& levels);

}  // namespace sortnet

#endif  // SORTNET_PRUNE_HH_
