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

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "netcore.hh"
#include "outset.hh"
#include "test_util.hh"

using namespace sortnet;

namespace {

const Network kBatcher4{4, {{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{2, 3}}}};

std::uint32_t channel_bit(int c) { return std::uint32_t{1} << (c - 1); }

}  // namespace

TEST_CASE("tracing the empty network touches every channel pair") {
  const TraceResult t = trace_from_to_reach(Network{3, {}});
  for (int c = 1; c <= 3; ++c) {
    CHECK(t.from[c] == 0b111);
    CHECK(t.to[c] == 0b111);
    CHECK(t.reach[c] == 0b111);
  }
}

TEST_CASE("tracing a sorting network pins every channel to itself") {
  for (const Network& net : {kBatcher4, testutil::batcher(8)}) {
    REQUIRE(is_sorting_network(net));
    const TraceResult t = trace_from_to_reach(net);
    for (int c = 1; c <= net.n; ++c) {
      CHECK(t.from[c] == channel_bit(c));
      CHECK(t.to[c] == channel_bit(c));
      CHECK(t.reach[c] == channel_bit(c));
    }
  }
}

TEST_CASE("trace membership is symmetric and reach contains self") {
  std::mt19937 rng(50);
  for (int n : {3, 5, 8, 10}) {
    const auto all = enumerate_levels(n);
    for (int rep = 0; rep < 25; ++rep) {
      const Network net = testutil::random_network(rng, all, n, rep % 5);
      const TraceResult t = trace_from_to_reach(net);
      for (int c = 1; c <= n; ++c) {
        CHECK((t.reach[c] & channel_bit(c)) != 0);
        CHECK(t.reach[c] == (t.from[c] | t.to[c] | channel_bit(c)));
        for (int q = 1; q <= n; ++q) {
          CHECK(((t.to[c] & channel_bit(q)) != 0) ==
                ((t.from[q] & channel_bit(c)) != 0));
        }
      }
    }
  }
}

TEST_CASE("trace handles 12 channels and refuses 13") {
  const Network net = testutil::batcher(12);
  REQUIRE(is_sorting_network(net));
  const TraceResult t = trace_from_to_reach(net);
  CHECK(t.from[12] == channel_bit(12));
  CHECK_THROWS_AS(trace_from_to_reach(Network{13, {}}), std::invalid_argument);
}

TEST_CASE("extension search confirms completable prefixes") {
  const Network prefix{4, {kBatcher4.levels[0]}};
  CHECK(brute_force_extendable(prefix, 2));
  CHECK(brute_force_extendable(Network{4, {kBatcher4.levels[0],
                                           kBatcher4.levels[1]}}, 1));
  CHECK(brute_force_extendable(Network{2, {}}, 1));
  CHECK(brute_force_extendable(kBatcher4, 0));
}

TEST_CASE("extension search rejects impossible budgets") {
  CHECK(!brute_force_extendable(Network{4, {}}, 2));
  CHECK(brute_force_extendable(Network{4, {}}, 3));
  CHECK(!brute_force_extendable(Network{5, {}}, 3));
  CHECK(!brute_force_extendable(Network{2, {}}, 0));
}

TEST_CASE("extension search refuses infeasible sizes") {
  CHECK_THROWS_AS(brute_force_extendable(Network{7, {}}, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force_extendable(Network{8, {}}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force_extendable(Network{4, {}}, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force_extendable(Network{4, {}}, 4),
                  std::invalid_argument);
}

TEST_CASE("memoized oracle matches the one-shot entry point") {
  std::mt19937 rng(51);
  const int n = 5;
  const auto all = enumerate_levels(n);
  ExtendOracle oracle(n);
  for (int rep = 0; rep < 30; ++rep) {
    const Network net = testutil::random_network(rng, all, n, rep % 4);
    const OutputSet s = OutputSet::of_network(net);
    for (int k = 0; k <= 3; ++k) {
      CHECK(oracle.extendable(s, k) == brute_force_extendable(net, k));
    }
  }
}

TEST_CASE("reachable set layers have the expected shape") {
  CHECK(reachable_sets(4, 0).size() == 1);
  CHECK(reachable_sets(4, 0)[0].cardinality() == 16);
  // Distinct nonempty levels give distinct depth-1 images.
  CHECK(reachable_sets(2, 1).size() == 1);
  CHECK(reachable_sets(4, 1).size() == 9);
  for (const OutputSet& s : reachable_sets(5, 2)) {
    CHECK(s.n() == 5);
    CHECK(s.cardinality() > 6);
    for (int ones = 0; ones <= 5; ++ones) {
      CHECK(s.contains(sorted_word(5, ones)));
    }
  }
  CHECK_THROWS_AS(reachable_sets(7, 1), std::invalid_argument);
}

TEST_CASE("exhaustive minimal depths match the known table") {
  CHECK(brute_force_optimal_depth(2) == 1);
  CHECK(brute_force_optimal_depth(3) == 3);
  CHECK(brute_force_optimal_depth(4) == 3);
  CHECK(brute_force_optimal_depth(5) == 5);
  CHECK(brute_force_optimal_depth(6) == 5);
  CHECK_THROWS_AS(brute_force_optimal_depth(7), std::invalid_argument);
}
