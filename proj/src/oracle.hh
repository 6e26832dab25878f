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

// Brute-force ground truth for validating the fast paths: input-pair tracing
// of channel movement, exhaustive k-level extension search, and exhaustive
// minimal-depth computation for tiny n.  None of this code is performance
// sensitive; it favors directness over speed and refuses sizes it cannot
// finish exactly.

#ifndef SORTNET_ORACLE_HH_
#define SORTNET_ORACLE_HH_

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "netcore.hh"
#include "outset.hh"

namespace sortnet {

// Per-channel from/to/reach memberships derived by tracing pairs of inputs
// that differ in a single bit.  Masks are indexed by channel (1-based, index
// 0 unused); bit (q-1) set in from[c] means channel q is a member of from[c].
struct TraceResult {
  int n = 0;
  std::array<std::uint32_t, kMaxChannels + 1> from{};
  std::array<std::uint32_t, kMaxChannels + 1> to{};
  std::array<std::uint32_t, kMaxChannels + 1> reach{};
};

// Traces every input pair (v, w) with w = v minus one set bit.  When the two
// outputs differ, they differ in exactly one coordinate j; channel
// dest(v) = n - weight(v) + 1 joins from[j] and j joins to[dest(v)], the
// same orientation the set-derived construction uses.  reach[c] is from[c]
// and to[c] together with c itself.
// Requires n <= 12; throws std::invalid_argument beyond that.
TraceResult trace_from_to_reach(const Network& net);

// Exhaustive answer to "can k appended levels turn net into a sorting
// network", searching all level sequences.  Feasibility guard: n <= 6 with
// k <= 3, or n <= 7 with k <= 2; anything larger throws
// std::invalid_argument rather than silently truncating.
bool brute_force_extendable(const Network& net, int k);

// Same question asked repeatedly against one fixed n, with results memoized
// across calls by output set, so exhaustive sweeps stay cheap.
class ExtendOracle {
 public:
  explicit ExtendOracle(int n);

  // Same contract and feasibility guard as brute_force_extendable.
  bool extendable(const OutputSet& s, int k);

 private:
  struct Key {
    std::uint64_t bits[2];
    int k;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  int n_;
  std::vector<Level> levels_;
  std::unordered_map<Key, bool, KeyHash> memo_;
};

// All distinct output sets reachable by some depth-`depth` network on n
// channels, deduplicated by membership only (no symmetry reduction), in a
// deterministic order.  Requires n <= 6.
std::vector<OutputSet> reachable_sets(int n, int depth);

// Minimal depth of a sorting network on n channels, found by breadth-first
// search over reachable output sets with membership-only deduplication.
// Requires n <= 6.
int brute_force_optimal_depth(int n);

}  // namespace sortnet

#endif  // SORTNET_ORACLE_HH_
