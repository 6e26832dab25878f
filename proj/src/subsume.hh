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

// Subsumption between output sets, up to channel permutation and reflection,
// and pool minimization built on it.
//
// A subsumes B when some channel permutation pi maps every member of A into
// B (pi relabels channels, so bit i-1 of a member moves to bit pi(i)-1).
// Any suffix that completes B into a sorting network then completes A after
// relabeling, so a search may keep A and drop B.  Reflection preserves the
// sorting property as well, so the working relation also admits one
// reflection before the permutation.

#ifndef SORTNET_SUBSUME_HH_
#define SORTNET_SUBSUME_HH_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "netcore.hh"
#include "outset.hh"

namespace sortnet {

// A bijection on channels 1..n; map[i] is the image of channel i.
struct ChannelPermutation {
  int n = 0;
  std::array<std::uint8_t, kMaxChannels + 1> map{};

  static ChannelPermutation identity(int n);

  // Relabels the channels of a word: bit i-1 moves to bit map[i]-1.
  word_t apply(word_t x) const;

  friend bool operator==(const ChannelPermutation&,
                         const ChannelPermutation&) = default;
};

// Searches for a permutation pi with pi(A) subset of B; returns the first
// witness found (deterministically) or nullopt.  Channel counts must match.
// Per-weight member counts prune the search: pi can exist only if every
// weight class of A is at most as large as the same class of B, and channel
// i can map to j only if, in every weight class, at least as many members of
// B carry bit j as members of A carry bit i.
std::optional<ChannelPermutation> permutation_subsumes(const OutputSet& a,
                                                       const OutputSet& b);

// The working relation: a permutation alone, or reflection followed by a
// permutation.  Transitive, since reflection conjugates permutations.
bool subsumes_perm_refl(const OutputSet& a, const OutputSet& b);

// Reference decision by brute force over all n! permutations, with and
// without reflection.  Only for n <= 7; larger n throws invalid_argument.
bool naive_subsumes(const OutputSet& a, const OutputSet& b);

// A deduplicated collection of (output set, witness prefix) pairs, all on n
// channels at one fixed depth.  Witnesses are stored as indices into a
// shared catalog holding every level in canonical order, so comparing index
// sequences lexicographically is exactly the canonical network order
// (levels element-wise, comparators by (lo, hi)).
//
// Invariants: no two entries hold the same member bitset, and for every
// entry the witness network's output set is the stored set.  When the same
// set is inserted twice the canonically smaller witness is kept.
class CandidatePool {
 public:
  // The canonical catalog for n channels, shared between pools.
  static std::shared_ptr<const std::vector<Level>> shared_catalog(int n);

  // The catalog must be sorted canonically with distinct entries, each a
  // valid level on n channels (shared_catalog satisfies all of this).
  CandidatePool(int n, int depth,
                std::shared_ptr<const std::vector<Level>> catalog);

  int n() const { return n_; }
  int depth() const { return depth_; }
  std::size_t size() const { return cards_.size(); }
  std::size_t word_count() const { return w_count_; }
  const std::shared_ptr<const std::vector<Level>>& catalog() const {
    return catalog_;
  }

  // Inserts a set given as a packed bitset plus a witness of depth() level
  // indices.  Returns true when a new entry was appended, false when the
  // set was already present (the smaller witness is retained either way).
  bool insert(const std::uint64_t* words,
              std::span<const std::uint32_t> witness);

  // Convenience form; the witness levels must all occur in the catalog and
  // the set must be on the pool's channel count.
  bool insert(const OutputSet& set, const Network& witness);

  const std::uint64_t* words_of(std::size_t idx) const {
    return bits_.data() + idx * w_count_;
  }
  std::span<const std::uint32_t> witness_ids_of(std::size_t idx) const {
    return {wit_.data() + idx * depth_, static_cast<std::size_t>(depth_)};
  }
  std::uint32_t cardinality_of(std::size_t idx) const { return cards_[idx]; }

  // Per-weight member counts, n+1 entries (weight 0..n).
  std::span<const std::uint16_t> weight_vector_of(std::size_t idx) const {
    return {wv_.data() + idx * (n_ + 1), static_cast<std::size_t>(n_ + 1)};
  }

  OutputSet output_set(std::size_t idx) const;
  Network witness_network(std::size_t idx) const;

  void reserve(std::size_t entries);

  // Bytes of pool storage one entry occupies; lets callers budget batches.
  std::size_t bytes_per_entry() const;

 private:
  std::size_t probe(const std::uint64_t* words, std::uint64_t hash) const;
  void rehash(std::size_t slot_count);

  int n_ = 0;
  int depth_ = 0;
  std::size_t w_count_ = 0;
  std::shared_ptr<const std::vector<Level>> catalog_;
  std::vector<std::uint64_t> bits_;    // size * w_count_ packed bitsets
  std::vector<std::uint32_t> wit_;     // size * depth_ level indices
  std::vector<std::uint32_t> cards_;   // member counts
  std::vector<std::uint16_t> wv_;      // size * (n_+1) per-weight counts
  std::vector<std::uint64_t> hashes_;  // content hashes, kept for rehashing
  std::vector<std::uint32_t> slots_;   // open addressing, entry index + 1
};

// Keeps one representative per equivalence class (mutual subsumption), the
// one with the canonically least witness, then drops every entry subsumed
// by a kept entry of strictly smaller cardinality.  The result is in
// canonical order (cardinality, then witness) and depends only on the entry
// set, not on insertion order; minimize(minimize(p)) == minimize(p).
CandidatePool minimize(const CandidatePool& pool);

// The equivalence stage of minimize alone: one representative per class,
// least witness, canonical order, but nothing is dropped across
// cardinalities.  Much cheaper than minimize on large pools, and safe as an
// intermediate reducer because every class survives with the same
// representative minimize would pick; minimize(merge_equivalent(p)) ==
// minimize(p).
CandidatePool merge_equivalent(const CandidatePool& pool);

}  // namespace sortnet

#endif  // SORTNET_SUBSUME_HH_
