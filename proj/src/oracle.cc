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

#include "oracle.hh"

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "bits.hh"

namespace sortnet {

namespace {

constexpr int kMaxTraceChannels = 12;
constexpr int kMaxBfsChannels = 6;

void check_extend_feasible(int n, int k) {
  if (k < 0) throw std::invalid_argument("extension level count is negative");
  const bool ok = (n <= 6 && k <= 3) || (n <= 7 && k <= 2);
  if (!ok) {
    throw std::invalid_argument("extension search infeasible for n=" +
                                std::to_string(n) + " k=" + std::to_string(k));
  }
}

}  // namespace

TraceResult trace_from_to_reach(const Network& net) {
  check_network(net);
  if (net.n > kMaxTraceChannels) {
    throw std::invalid_argument("trace oracle limited to 12 channels");
  }
  const int n = net.n;
  TraceResult result;
  result.n = n;
  for (word_t v = 1; v <= word_mask(n); ++v) {
    const word_t out_v = evaluate(net, v);
    const int dest = n - std::popcount(v) + 1;
    for (int i = 1; i <= n; ++i) {
      const word_t bit = word_t{1} << (i - 1);
      if (!(v & bit)) continue;
      const word_t diff = out_v ^ evaluate(net, v ^ bit);
      if (diff == 0) continue;
      // Weight preservation plus monotonicity force a single differing
      // coordinate; anything else would be an evaluator defect.
      if (!std::has_single_bit(diff)) {
        throw std::logic_error("one-bit input pair diverged in two outputs");
      }
      const int j = std::countr_zero(diff) + 1;
      result.from[j] |= std::uint32_t{1} << (dest - 1);
      result.to[dest] |= std::uint32_t{1} << (j - 1);
    }
  }
  for (int c = 1; c <= n; ++c) {
    result.reach[c] =
        result.from[c] | result.to[c] | (std::uint32_t{1} << (c - 1));
  }
  return result;
}

ExtendOracle::ExtendOracle(int n) : n_(n), levels_(enumerate_levels(n)) {}

std::size_t ExtendOracle::KeyHash::operator()(const Key& key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15u * static_cast<std::uint64_t>(key.k + 1);
  for (std::uint64_t w : key.bits) {
    h ^= w + 0x9e3779b97f4a7c15u + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool ExtendOracle::extendable(const OutputSet& s, int k) {
  check_extend_feasible(n_, k);
  if (s.n() != n_) throw std::invalid_argument("channel count mismatch");
  if (s.sorted_complete()) return true;
  if (k == 0) return false;

  const auto words = s.words();
  Key key{{words[0], words.size() > 1 ? words[1] : 0}, k};
  if (const auto it = memo_.find(key); it != memo_.end()) return it->second;

  bool ok = false;
  for (const Level& level : levels_) {
    if (extendable(s.extended(level), k - 1)) {
      ok = true;
      break;
    }
  }
  memo_.emplace(key, ok);
  return ok;
}

bool brute_force_extendable(const Network& net, int k) {
  check_network(net);
  check_extend_feasible(net.n, k);
  ExtendOracle oracle(net.n);
  return oracle.extendable(OutputSet::of_network(net), k);
}

namespace {

// One breadth-first layer: every distinct extension of `frontier` by one
// level, excluding sets seen before.  n <= 6 keeps the whole membership in
// one 64-bit word, so deduplication can key on that word alone.
std::vector<OutputSet> bfs_layer(const std::vector<Level>& levels,
                                 const std::vector<OutputSet>& frontier,
                                 std::unordered_set<std::uint64_t>& seen) {
  std::vector<OutputSet> next;
  for (const OutputSet& s : frontier) {
    for (const Level& level : levels) {
      if (level.empty()) continue;
      OutputSet ext = s.extended(level);
      if (seen.insert(ext.words()[0]).second) next.push_back(std::move(ext));
    }
  }
  return next;
}

}  // namespace

std::vector<OutputSet> reachable_sets(int n, int depth) {
  check_channel_count(n);
  if (n > kMaxBfsChannels) {
    throw std::invalid_argument("exhaustive set search limited to 6 channels");
  }
  if (depth < 0) throw std::invalid_argument("depth is negative");
  const std::vector<Level> levels = enumerate_levels(n);
  std::unordered_set<std::uint64_t> seen;
  std::vector<OutputSet> frontier{OutputSet::all_inputs(n)};
  seen.insert(frontier[0].words()[0]);
  for (int t = 0; t < depth; ++t) {
    frontier = bfs_layer(levels, frontier, seen);
  }
  return frontier;
}

int brute_force_optimal_depth(int n) {
  check_channel_count(n);
  if (n > kMaxBfsChannels) {
    throw std::invalid_argument("exhaustive depth search limited to 6 channels");
  }
  const std::vector<Level> levels = enumerate_levels(n);
  std::unordered_set<std::uint64_t> seen;
  std::vector<OutputSet> frontier{OutputSet::all_inputs(n)};
  seen.insert(frontier[0].words()[0]);
  for (int depth = 1;; ++depth) {
    frontier = bfs_layer(levels, frontier, seen);
    for (const OutputSet& s : frontier) {
      if (s.sorted_complete()) return depth;
    }
    // Every n <= 6 sorts within depth 5; an empty frontier or a depth past
    // that bound means the search itself is broken.
    if (frontier.empty() || depth > 8) {
      throw std::logic_error("breadth-first depth search failed to terminate");
    }
  }
}

}  // namespace sortnet
