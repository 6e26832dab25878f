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

#include "subsume.hh"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "netcore.hh"
#include "oracle.hh"
#include "outset.hh"
#include "test_util.hh"

using namespace sortnet;

namespace {

const Network kBatcher4{4, {{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{2, 3}}}};

// Every distinct output set of a network of depth at most two.
std::vector<OutputSet> shallow_sets(int n) {
  const std::vector<Level> levels = enumerate_levels(n);
  std::vector<OutputSet> out;
  const auto add = [&out](const OutputSet& s) {
    for (const OutputSet& t : out) {
      if (t == s) return;
    }
    out.push_back(s);
  };
  const OutputSet base = OutputSet::all_inputs(n);
  add(base);
  for (const Level& first : levels) {
    const OutputSet s1 = base.extended(first);
    add(s1);
    for (const Level& second : levels) add(s1.extended(second));
  }
  return out;
}

bool mapped_into(const ChannelPermutation& pi, const OutputSet& a,
                 const OutputSet& b) {
  for (word_t x : a.members()) {
    if (!b.contains(pi.apply(x))) return false;
  }
  return true;
}

bool pools_equal(const CandidatePool& x, const CandidatePool& y) {
  if (x.size() != y.size() || x.n() != y.n() || x.depth() != y.depth()) {
    return false;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.output_set(i) != y.output_set(i)) return false;
    const auto wx = x.witness_ids_of(i);
    const auto wy = y.witness_ids_of(i);
    if (!std::equal(wx.begin(), wx.end(), wy.begin(), wy.end())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("permutations relabel channels and preserve weight") {
  const ChannelPermutation id = ChannelPermutation::identity(4);
  CHECK(id.apply(testutil::wrd("0110")) == testutil::wrd("0110"));
  ChannelPermutation rev;
  rev.n = 3;
  rev.map[1] = 3;
  rev.map[2] = 2;
  rev.map[3] = 1;
  CHECK(rev.apply(testutil::wrd("100")) == testutil::wrd("001"));
  CHECK(rev.apply(testutil::wrd("110")) == testutil::wrd("011"));
  for (word_t x = 0; x < 8; ++x) {
    CHECK(std::popcount(rev.apply(x)) == std::popcount(x));
  }
}

TEST_CASE("every set subsumes itself through the identity") {
  std::mt19937 rng(80801);
  const auto levels = enumerate_levels(5);
  for (int trial = 0; trial < 10; ++trial) {
    const OutputSet s =
        OutputSet::of_network(testutil::random_network(rng, levels, 5, 3));
    const auto pi = permutation_subsumes(s, s);
    REQUIRE(pi.has_value());
    CHECK(*pi == ChannelPermutation::identity(5));
    CHECK(subsumes_perm_refl(s, s));
  }
}

TEST_CASE("relabeled single comparators subsume each other") {
  const OutputSet a = OutputSet::of_network(Network{3, {{{1, 2}}}});
  const OutputSet b = OutputSet::of_network(Network{3, {{{2, 3}}}});
  const auto ab = permutation_subsumes(a, b);
  const auto ba = permutation_subsumes(b, a);
  REQUIRE(ab.has_value());
  REQUIRE(ba.has_value());
  CHECK(mapped_into(*ab, a, b));
  CHECK(mapped_into(*ba, b, a));
}

TEST_CASE("the fully sorted set subsumes every network image") {
  std::mt19937 rng(80802);
  const auto levels = enumerate_levels(6);
  const OutputSet sorted = OutputSet::sorted_only(6);
  for (int trial = 0; trial < 10; ++trial) {
    const OutputSet s =
        OutputSet::of_network(testutil::random_network(rng, levels, 6, 2));
    const auto pi = permutation_subsumes(sorted, s);
    REQUIRE(pi.has_value());
    CHECK(*pi == ChannelPermutation::identity(6));
  }
}

TEST_CASE("a reflected copy subsumes its original and vice versa") {
  std::mt19937 rng(80803);
  const auto levels = enumerate_levels(5);
  for (int trial = 0; trial < 10; ++trial) {
    const OutputSet s =
        OutputSet::of_network(testutil::random_network(rng, levels, 5, 2));
    CHECK(subsumes_perm_refl(s.reflected(), s));
    CHECK(subsumes_perm_refl(s, s.reflected()));
  }
}

TEST_CASE("agreement with brute force on every shallow pair") {
  for (int n = 3; n <= 5; ++n) {
    CAPTURE(n);
    const std::vector<OutputSet> sets = shallow_sets(n);
    const std::size_t count = sets.size();
    std::vector<char> related(count * count, 0);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        const bool fast = subsumes_perm_refl(sets[i], sets[j]);
        const bool slow = naive_subsumes(sets[i], sets[j]);
        REQUIRE(fast == slow);
        related[i * count + j] = fast ? 1 : 0;
        if (const auto pi = permutation_subsumes(sets[i], sets[j])) {
          REQUIRE(mapped_into(*pi, sets[i], sets[j]));
        }
      }
    }
    // The relation is a preorder: transitivity across the whole corpus.
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        if (!related[i * count + j]) continue;
        for (std::size_t k = 0; k < count; ++k) {
          if (related[j * count + k]) REQUIRE(related[i * count + k]);
        }
      }
    }
  }
}

TEST_CASE("agreement with brute force on random deeper pairs") {
  std::mt19937 rng(80804);
  for (int n = 6; n <= 7; ++n) {
    CAPTURE(n);
    const auto levels = enumerate_levels(n);
    const int pairs = n == 6 ? 120 : 50;
    for (int trial = 0; trial < pairs; ++trial) {
      const OutputSet a =
          OutputSet::of_network(testutil::random_network(rng, levels, n, 3));
      const OutputSet b =
          OutputSet::of_network(testutil::random_network(rng, levels, n, 2));
      CHECK(subsumes_perm_refl(a, b) == naive_subsumes(a, b));
      CHECK(subsumes_perm_refl(b, a) == naive_subsumes(b, a));
    }
  }
}

TEST_CASE("subsumption transfers equal depth completions") {
  for (int n = 4; n <= 5; ++n) {
    CAPTURE(n);
    const std::vector<OutputSet> sets = shallow_sets(n);
    ExtendOracle oracle(n);
    for (const OutputSet& a : sets) {
      for (const OutputSet& b : sets) {
        if (!subsumes_perm_refl(a, b)) continue;
        for (int k = 0; k <= 3; ++k) {
          if (oracle.extendable(b, k)) REQUIRE(oracle.extendable(a, k));
        }
      }
    }
  }
}

TEST_CASE("brute force oracle rejects large inputs and mixed sizes") {
  CHECK_THROWS_AS(naive_subsumes(OutputSet::all_inputs(8),
                                 OutputSet::all_inputs(8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(naive_subsumes(OutputSet::all_inputs(4),
                                 OutputSet::all_inputs(5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(permutation_subsumes(OutputSet::all_inputs(4),
                                       OutputSet::all_inputs(5)),
                  std::invalid_argument);
}

TEST_CASE("pools validate their catalog and inserts") {
  const auto catalog = CandidatePool::shared_catalog(4);
  CHECK(catalog->size() == 10);
  CHECK(std::is_sorted(catalog->begin(), catalog->end()));
  CHECK_THROWS_AS(CandidatePool(4, 1, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(CandidatePool(4, -1, catalog), std::invalid_argument);
  {
    auto unsorted = std::make_shared<std::vector<Level>>(
        std::vector<Level>{{{1, 2}}, {}});
    CHECK_THROWS_AS(CandidatePool(4, 1, unsorted), std::invalid_argument);
  }
  {
    auto foreign = std::make_shared<std::vector<Level>>(
        std::vector<Level>{{{1, 5}}});
    CHECK_THROWS_AS(CandidatePool(4, 1, foreign), std::invalid_argument);
  }
  CandidatePool pool(4, 1, catalog);
  const OutputSet s = OutputSet::all_inputs(4);
  const std::uint32_t bad_id[] = {std::uint32_t(catalog->size())};
  CHECK_THROWS_AS(pool.insert(s.words().data(), bad_id), std::invalid_argument);
  const std::uint32_t two_ids[] = {0, 0};
  CHECK_THROWS_AS(pool.insert(s.words().data(), two_ids),
                  std::invalid_argument);
  CHECK_THROWS_AS(pool.insert(s, Network{5, {{{1, 2}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pool.insert(s, Network{4, {{{1, 2}}, {{1, 2}}}}),
                  std::invalid_argument);
  const std::uint64_t stray[] = {~std::uint64_t{0}};
  const std::uint32_t id0[] = {0};
  CHECK_THROWS_AS(pool.insert(stray, id0), std::invalid_argument);
  CHECK(pool.size() == 0);
}

TEST_CASE("pools deduplicate sets and keep the smaller witness") {
  const auto catalog = CandidatePool::shared_catalog(4);
  const Level pair{{1, 2}, {3, 4}};
  const std::uint32_t pair_id = static_cast<std::uint32_t>(
      std::lower_bound(catalog->begin(), catalog->end(), pair) -
      catalog->begin());
  const OutputSet s = OutputSet::all_inputs(4).extended(pair);

  for (const bool late_first : {true, false}) {
    CandidatePool pool(4, 2, catalog);
    const std::uint32_t late[] = {pair_id, 0};
    const std::uint32_t early[] = {0, pair_id};
    CHECK(pool.insert(s.words().data(), late_first ? late : early));
    CHECK_FALSE(pool.insert(s.words().data(), late_first ? early : late));
    REQUIRE(pool.size() == 1);
    CHECK(pool.witness_ids_of(0)[0] == 0);
    CHECK(pool.witness_ids_of(0)[1] == pair_id);
    CHECK(pool.output_set(0) == s);
  }
}

TEST_CASE("pool witnesses reproduce their sets") {
  std::mt19937 rng(80805);
  const auto catalog = CandidatePool::shared_catalog(5);
  CandidatePool pool(5, 2, catalog);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = testutil::random_network(rng, *catalog, 5, 2);
    pool.insert(OutputSet::of_network(net), net);
  }
  REQUIRE(pool.size() > 10);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const Network wit = pool.witness_network(i);
    CHECK(wit.depth() == 2);
    CHECK(OutputSet::of_network(wit) == pool.output_set(i));
  }
}

TEST_CASE("minimizing all first levels leaves one densest level") {
  const char* expected[] = {"", "", "", "n=3\n1:2\n", "n=4\n1:2 3:4\n",
                            "n=5\n1:2 3:4\n", "n=6\n1:2 3:4 5:6\n"};
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const auto catalog = CandidatePool::shared_catalog(n);
    CandidatePool pool(n, 1, catalog);
    const OutputSet base = OutputSet::all_inputs(n);
    for (std::uint32_t id = 0; id < catalog->size(); ++id) {
      const std::uint32_t ids[] = {id};
      pool.insert(base.extended((*catalog)[id]).words().data(), ids);
    }
    const CandidatePool minimal = minimize(pool);
    REQUIRE(minimal.size() == 1);
    CHECK(minimal.witness_network(0) == parse_network(expected[n]));
  }
}

TEST_CASE("a complete sorted set absorbs the whole pool") {
  std::mt19937 rng(80806);
  const auto catalog = CandidatePool::shared_catalog(4);
  CandidatePool pool(4, 3, catalog);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = testutil::random_network(rng, *catalog, 4, 3);
    if (is_sorting_network(net)) continue;
    pool.insert(OutputSet::of_network(net), net);
  }
  REQUIRE(is_sorting_network(kBatcher4));
  pool.insert(OutputSet::sorted_only(4), kBatcher4);
  const CandidatePool minimal = minimize(pool);
  REQUIRE(minimal.size() == 1);
  CHECK(minimal.output_set(0) == OutputSet::sorted_only(4));
  CHECK(minimal.witness_network(0) == kBatcher4);
}

TEST_CASE("minimize is canonical, idempotent, and order independent") {
  const auto catalog = CandidatePool::shared_catalog(5);
  const std::size_t level_count = catalog->size();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> inserts;
  for (std::uint32_t i = 0; i < level_count; ++i) {
    for (std::uint32_t j = 0; j < level_count; ++j) inserts.push_back({i, j});
  }
  const OutputSet base = OutputSet::all_inputs(5);

  const auto build = [&](const auto& sequence) {
    CandidatePool pool(5, 2, catalog);
    for (const auto& [i, j] : sequence) {
      const std::uint32_t ids[] = {i, j};
      pool.insert(
          base.extended((*catalog)[i]).extended((*catalog)[j]).words().data(),
          ids);
    }
    return minimize(pool);
  };

  const CandidatePool forward = build(inserts);
  REQUIRE(forward.size() > 1);

  // Canonical output order: cardinality ascending, witness as tie-break.
  for (std::size_t i = 0; i + 1 < forward.size(); ++i) {
    const auto ca = forward.cardinality_of(i);
    const auto cb = forward.cardinality_of(i + 1);
    CHECK(ca <= cb);
    if (ca == cb) {
      const auto wa = forward.witness_ids_of(i);
      const auto wb = forward.witness_ids_of(i + 1);
      CHECK(std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(),
                                         wb.end()));
    }
  }

  // No surviving entry subsumes another: the result is an antichain.
  for (std::size_t i = 0; i < forward.size(); ++i) {
    for (std::size_t j = 0; j < forward.size(); ++j) {
      if (i == j) continue;
      CHECK_FALSE(
          subsumes_perm_refl(forward.output_set(i), forward.output_set(j)));
    }
  }

  CHECK(pools_equal(minimize(forward), forward));

  // Completeness: every pool entry is subsumed by some survivor, so nothing
  // was dropped without a surviving class covering it.
  {
    CandidatePool pool(5, 2, catalog);
    for (const auto& [i, j] : inserts) {
      const std::uint32_t ids[] = {i, j};
      pool.insert(
          base.extended((*catalog)[i]).extended((*catalog)[j]).words().data(),
          ids);
    }
    for (std::size_t e = 0; e < pool.size(); ++e) {
      bool covered = false;
      for (std::size_t s = 0; s < forward.size() && !covered; ++s) {
        covered = subsumes_perm_refl(forward.output_set(s), pool.output_set(e));
      }
      CHECK(covered);
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> shuffled = inserts;
  std::mt19937 rng(80807);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(pools_equal(build(shuffled), forward));
  }
}
