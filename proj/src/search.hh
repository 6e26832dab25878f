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

// Depth-by-depth existence search.  R[0] holds the output set of the empty
// network; each round extends every surviving prefix by one level, filters
// extensions that provably cannot reach a sorting network within the
// remaining depth, deduplicates, and minimizes up to permutation and
// reflection.  A sorting network of depth d exists iff R[d] is the single
// fully sorted set.
//
// With r = d - t levels remaining after the generated one, the filters are:
// r >= 4 none; r = 3 the bound-8 per-comparator look-ahead, then the
// three-level completability check on the extension; r = 2 the bound-4
// look-ahead, then the two-level check; r = 1 the two-level check; r = 0
// keeps exactly the extensions that sort outright.

#ifndef SORTNET_SEARCH_HH_
#define SORTNET_SEARCH_HH_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netcore.hh"
#include "outset.hh"
#include "subsume.hh"

namespace sortnet {

// One generation round.  Counts never increase along
// considered >= lookahead_passed >= filter_passed >= distinct >= minimized;
// stages without a filter pass everything through unchanged.  distinct is
// the deduplicated count entering minimization, recorded separately because
// the pre-dedup filter_passed and the post-dedup view are both of interest.
struct DepthStats {
  int depth = 0;
  std::uint64_t considered = 0;        // (entry, level) pairs examined
  std::uint64_t lookahead_passed = 0;  // pairs past the comparator look-ahead
  std::uint64_t filter_passed = 0;     // pairs past the per-extension check
  std::uint64_t distinct = 0;          // distinct sets entering minimization
  std::uint64_t minimized = 0;         // |R[depth]|
  double seconds = 0.0;
};

struct SearchStats {
  std::vector<DepthStats> depths;
  double total_seconds = 0.0;

  // Column sums over all recorded depths (the depth field stays 0).
  DepthStats totals() const;
};

struct SearchConfig {
  int n = 0;
  int d = 0;
  // Accepted for interface stability; results never depend on it.
  int worker_count = 1;
  // Depths above this keep deduplication only; negative means minimize at
  // every depth, which is the default behavior.
  int minimize_through_depth = -1;
  // When nonempty, R[t] is saved here after every finished depth t < d and
  // a compatible saved state is resumed from instead of recomputed.
  std::string checkpoint_directory;
  bool emit_witness = true;
};

struct SearchOutcome {
  bool exists = false;
  SearchStats stats;
  // Present iff exists and emit_witness; verified to sort at depth d.
  std::optional<Network> witness;
};

// Called after each finished depth with its statistics row.
using ProgressFn = std::function<void(const DepthStats&)>;

// Decides whether a depth-d sorting network on cfg.n channels exists.
// Deterministic: the outcome and every count are the same for any
// worker_count and across checkpoint interruptions.  Memory exhaustion
// propagates as an exception, never as a false "no".
SearchOutcome exists_sorting_network(const SearchConfig& cfg,
                                     const ProgressFn& progress = {});

// Candidate levels for the prefix depth t of a depth-d construction: the
// last-level filters when 1 <= d - t <= 3, the full catalog otherwise.
std::vector<Level> get_all_levels(const OutputSet& s, int t, int d,
                                  const std::vector<Level>& all_levels);

// Extends every entry of R[t-1] by one level, streaming extensions through
// the depth-appropriate filters into a deduplicated pool (witnesses extend
// with the new level; duplicates keep the smaller witness).  The caller
// minimizes the result.
CandidatePool generate_next_depth(const CandidatePool& pool, int t, int d,
                                  DepthStats* stats = nullptr);

struct OptimalOutcome {
  // Smallest depth in [1, d_max] that admits a sorting network, if any.
  std::optional<int> depth;
  std::optional<Network> witness;
  // Stats of every attempted depth, ascending; the last entry is the
  // successful one when depth is set.
  std::vector<SearchStats> attempts;
};

// Runs exists_sorting_network for d = 1, 2, ... until the first success.
// Each attempt runs from scratch: the filters depend on the target depth,
// so pools cannot be shared across attempts.  With checkpointing enabled
// every attempt uses the subdirectory depth-<d>.
OptimalOutcome optimal_depth(const SearchConfig& cfg, int d_max,
                             const ProgressFn& progress = {});

// Checkpoint directory layout: meta.txt carries the format version, n,
// depth, target depth, entry count, a content hash of pool.txt, and the
// statistics rows of all finished depths; pool.txt holds every entry as its
// witness network text followed by its output set text.  Loading verifies
// the hash and that every witness reproduces its set; any mismatch,
// truncation, or version skew throws with a diagnostic.
void checkpoint_save(const CandidatePool& pool, const SearchStats& stats,
                     int target, const std::string& dir);

struct CheckpointInfo {
  int n = 0;
  int depth = 0;
  int target = 0;
  std::uint64_t count = 0;
};

// Reads only meta.txt; nullopt when the directory holds no checkpoint.
std::optional<CheckpointInfo> checkpoint_peek(const std::string& dir);

struct CheckpointData {
  CandidatePool pool;
  SearchStats stats;
  int target = 0;
};

CheckpointData checkpoint_load(const std::string& dir, int expected_n,
                               int expected_depth);

}  // namespace sortnet

#endif  // SORTNET_SEARCH_HH_
