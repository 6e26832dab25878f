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

// Output sets: the image of all 2^n binary inputs under a network prefix.
// The set always contains the n+1 sorted words, extending by a level never
// grows it, and it shrinks to exactly n+1 members precisely when the prefix
// sorts every input.

#ifndef SORTNET_OUTSET_HH_
#define SORTNET_OUTSET_HH_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netcore.hh"

namespace sortnet {

class OutputSet {
 public:
  // The image of the empty network: all 2^n words.
  static OutputSet all_inputs(int n);

  // The n+1 sorted words only; the fixed point of every sorting prefix.
  static OutputSet sorted_only(int n);

  // Image of the given network, computed by repeated extension from
  // all_inputs so there is a single code path for set evolution.
  static OutputSet of_network(const Network& net);

  // Raw construction from an explicit member list.
  static OutputSet of_members(int n, std::span<const word_t> members);

  // Raw construction from a packed bitset; words.size() must match
  // bits::word_count(n) and bits above position 2^n must be clear.
  static OutputSet of_words(int n, std::span<const std::uint64_t> words);

  int n() const { return n_; }
  std::uint32_t cardinality() const { return cardinality_; }
  bool contains(word_t x) const;

  // Members with the given number of ones; weights() spans 0..n.
  std::span<const std::uint32_t> weights() const { return weights_; }

  // Applies one level to every member.  Cardinality never increases and
  // per-weight counts never grow.
  OutputSet extended(const Level& level) const;

  // Member-wise reflection (reversed complement); an involution.
  OutputSet reflected() const;

  // True iff the generating prefix sorts everything: exactly n+1 members.
  bool sorted_complete() const { return cardinality_ == n_ + 1u; }

  // Content hash for exact-duplicate pools: equal sets agree, and lookups
  // that collide must fall back to same_members.
  std::uint64_t dedup_key() const;
  bool same_members(const OutputSet& other) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<word_t> members() const;

  // Text form: header "n=<int> count=<int>", then one lowercase-hex member
  // per line in ascending order.  parse rejects anything else; the pair
  // round-trips bit-exactly.
  std::string serialize() const;
  static OutputSet deserialize(std::string_view text);

  friend bool operator==(const OutputSet& a, const OutputSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  OutputSet(int n, std::vector<std::uint64_t> words);

  int n_ = 0;
  std::uint32_t cardinality_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> weights_;
};

}  // namespace sortnet

#endif  // SORTNET_OUTSET_HH_
