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
#include <bit>
#include <compare>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "bits.hh"

namespace sortnet {
namespace {

// Per-channel occurrence signature, stored flat and row-major: entry
// (i-1)*(n+1) + k counts the weight-k members carrying bit i (channels are
// 1-based).  If pi(A) is a subset of B then row_a[i][k] <= row_b[pi(i)][k]
// for every weight k, with equality throughout when the sets have equal
// size.  Flat storage keeps millions of cached signatures affordable.
constexpr std::size_t sig_size(int n) {
  return static_cast<std::size_t>(n) * (n + 1);
}

// Largest flat signature; fits comfortably on the stack.
constexpr std::size_t kMaxSigSize = sig_size(kMaxChannels);

void signature_into(const std::uint64_t* words, std::size_t w_count, int n,
                    std::uint16_t* out) {
  std::fill_n(out, sig_size(n), std::uint16_t{0});
  const int stride = n + 1;
  bits::for_each_member(words, w_count, [&](word_t x) {
    const int k = std::popcount(x);
    word_t v = x;
    while (v) {
      ++out[std::countr_zero(v) * stride + k];
      v &= v - 1;
    }
  });
}

// Reflection sends channel i to n+1-i and complements values, so a weight-k
// member lacking bit i becomes a weight-(n-k) member carrying bit n+1-i:
// row_r[n+1-i][n-k] = wv[k] - row[i][k].
void reflect_signature_into(const std::uint16_t* sig,
                            std::span<const std::uint16_t> wv, int n,
                            std::uint16_t* out) {
  const int stride = n + 1;
  for (int i = 1; i <= n; ++i) {
    for (int k = 0; k <= n; ++k) {
      out[(n - i) * stride + (n - k)] =
          static_cast<std::uint16_t>(wv[k] - sig[(i - 1) * stride + k]);
    }
  }
}

// Pairwise refinement of the signature: row (i, j), i != j, counts per
// weight k the members carrying both bit i and bit j.  A permutation taking
// a into b maps those members into b's row (pi(i), pi(j)), so rowwise <=
// over every assigned channel pair is a further necessary condition.
constexpr std::size_t pair_sig_size(int n) {
  return static_cast<std::size_t>(n) * n * (n + 1);
}

void pair_signature_into(const std::uint64_t* words, std::size_t w_count,
                         int n, std::uint16_t* out) {
  std::fill_n(out, pair_sig_size(n), 0);
  const int stride = n + 1;
  bits::for_each_member(words, w_count, [&](word_t x) {
    const int k = std::popcount(x);
    word_t rest = x;
    while (rest) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      word_t other = rest;
      while (other) {
        const int j = std::countr_zero(other);
        other &= other - 1;
        ++out[(static_cast<std::size_t>(i) * n + j) * stride + k];
        ++out[(static_cast<std::size_t>(j) * n + i) * stride + k];
      }
    }
  });
}

// cand[i] holds the admissible images of channel i, bit j-1 for channel j.
struct CandidateMasks {
  std::array<std::uint32_t, kMaxChannels + 1> cand{};
};

// Row-wise compatibility; returns false when some channel has no image at
// all, which already refutes the pair.
bool build_masks(const std::uint16_t* a, const std::uint16_t* b, int n,
                 bool equal_rows, CandidateMasks& out) {
  const int stride = n + 1;
  for (int i = 0; i < n; ++i) {
    std::uint32_t mask = 0;
    const std::uint16_t* row_a = a + i * stride;
    for (int j = 0; j < n; ++j) {
      const std::uint16_t* row_b = b + j * stride;
      bool ok = true;
      for (int k = 0; k < stride && ok; ++k) {
        ok = equal_rows ? row_a[k] == row_b[k] : row_a[k] <= row_b[k];
      }
      if (ok) mask |= 1u << j;
    }
    if (mask == 0) return false;
    out.cand[i + 1] = mask;
  }
  return true;
}

word_t apply_channel_map(word_t x, const std::uint8_t* map) {
  word_t out = 0;
  while (x) {
    out |= word_t{1} << (map[std::countr_zero(x) + 1] - 1);
    x &= x - 1;
  }
  return out;
}

// Maps every member of a through map and tests membership in b.
bool mapped_subset(const std::uint64_t* a, const std::uint64_t* b,
                   std::size_t w_count, const std::uint8_t* map) {
  for (std::size_t w = 0; w < w_count; ++w) {
    std::uint64_t v = a[w];
    while (v) {
      const word_t x = static_cast<word_t>((w << 6) + std::countr_zero(v));
      if (!bits::test(b, apply_channel_map(x, map))) return false;
      v &= v - 1;
    }
  }
  return true;
}

// Backtracking assignment search.  Always extends the channel with the
// fewest remaining images and tries images in ascending order, so the first
// witness found is deterministic.  The masks are necessary conditions only;
// a full assignment is accepted only after the member-wise subset check.
class Matcher {
 public:
  Matcher(int n, std::size_t w_count, const std::uint64_t* a,
          const std::uint64_t* b)
      : n_(n), w_count_(w_count), a_(a), b_(b) {
    map_.fill(0);
  }

  bool solve(const CandidateMasks& masks) { return descend(masks.cand, 0, 0); }

  // Optional pairwise signatures; trials violating them cannot complete into
  // a subset mapping, so pruning on them leaves the outcome and the first
  // accepted witness unchanged.
  void set_pair_sigs(const std::uint16_t* a, const std::uint16_t* b) {
    pair_a_ = a;
    pair_b_ = b;
  }

  const std::uint8_t* map() const { return map_.data(); }

 private:
  bool descend(std::array<std::uint32_t, kMaxChannels + 1> cand,
               std::uint32_t used, int assigned) {
    if (assigned == n_) return mapped_subset(a_, b_, w_count_, map_.data());
    int best = 0;
    int best_count = kMaxChannels + 1;
    for (int i = 1; i <= n_; ++i) {
      if (map_[i] != 0) continue;
      const int c = std::popcount(cand[i] & ~used);
      if (c < best_count) {
        best_count = c;
        best = i;
      }
    }
    if (best_count == 0) return false;
    std::uint32_t avail = cand[best] & ~used;
    while (avail) {
      const int j = std::countr_zero(avail) + 1;
      avail &= avail - 1;
      if (pair_a_ != nullptr && !pair_rows_fit(best, j, used)) continue;
      map_[best] = static_cast<std::uint8_t>(j);
      if (descend(cand, used | (1u << (j - 1)), assigned + 1)) return true;
    }
    map_[best] = 0;
    return false;
  }

  // Counts over {i, u} in a must fit within {j, map_[u]} in b for every
  // channel u already assigned on the current path.  map_[i] itself may hold
  // a stale value from an abandoned sibling trial, so i is skipped via the
  // used mask rather than the map.
  bool pair_rows_fit(int i, int j, std::uint32_t used) const {
    const int stride = n_ + 1;
    for (int u = 1; u <= n_; ++u) {
      if (u == i || map_[u] == 0 || (used & (1u << (map_[u] - 1))) == 0) {
        continue;
      }
      const std::uint16_t* ra =
          pair_a_ + (static_cast<std::size_t>(i - 1) * n_ + (u - 1)) * stride;
      const std::uint16_t* rb =
          pair_b_ +
          (static_cast<std::size_t>(j - 1) * n_ + (map_[u] - 1)) * stride;
      for (int k = 0; k < stride; ++k) {
        if (ra[k] > rb[k]) return false;
      }
    }
    return true;
  }

  int n_;
  std::size_t w_count_;
  const std::uint64_t* a_;
  const std::uint64_t* b_;
  const std::uint16_t* pair_a_ = nullptr;
  const std::uint16_t* pair_b_ = nullptr;
  std::array<std::uint8_t, kMaxChannels + 1> map_{};
};

void reflect_words(const std::uint64_t* in, std::uint64_t* out, int n,
                   std::size_t w_count) {
  std::fill_n(out, w_count, std::uint64_t{0});
  bits::for_each_member(in, w_count, [&](word_t x) {
    bits::set(out, reflect_word(x, n));
  });
}

std::array<std::uint16_t, kMaxChannels + 1> reversed_wv(
    std::span<const std::uint16_t> wv, int n) {
  std::array<std::uint16_t, kMaxChannels + 1> out{};
  for (int k = 0; k <= n; ++k) out[k] = wv[n - k];
  return out;
}

}  // namespace

ChannelPermutation ChannelPermutation::identity(int n) {
  check_channel_count(n);
  ChannelPermutation p;
  p.n = n;
  for (int i = 1; i <= n; ++i) p.map[i] = static_cast<std::uint8_t>(i);
  return p;
}

word_t ChannelPermutation::apply(word_t x) const {
  return apply_channel_map(x, map.data());
}

std::optional<ChannelPermutation> permutation_subsumes(const OutputSet& a,
                                                       const OutputSet& b) {
  if (a.n() != b.n()) throw std::invalid_argument("channel count mismatch");
  const int n = a.n();
  const std::size_t w = bits::word_count(n);
  for (int k = 0; k <= n; ++k) {
    if (a.weights()[k] > b.weights()[k]) return std::nullopt;
  }
  if (bits::subset(a.words().data(), b.words().data(), w)) {
    return ChannelPermutation::identity(n);
  }
  std::uint16_t sa[kMaxSigSize];
  std::uint16_t sb[kMaxSigSize];
  signature_into(a.words().data(), w, n, sa);
  signature_into(b.words().data(), w, n, sb);
  CandidateMasks masks;
  if (!build_masks(sa, sb, n, false, masks)) return std::nullopt;
  Matcher m(n, w, a.words().data(), b.words().data());
  if (!m.solve(masks)) return std::nullopt;
  ChannelPermutation p;
  p.n = n;
  std::copy_n(m.map(), n + 1, p.map.begin());
  return p;
}

bool subsumes_perm_refl(const OutputSet& a, const OutputSet& b) {
  if (permutation_subsumes(a, b)) return true;
  return permutation_subsumes(a.reflected(), b).has_value();
}

namespace {

// Word images under every permutation of 1..n, flattened as perm * 2^n + x.
// Built once per channel count; n <= 7 keeps the largest table at 5040*128
// bytes.
struct PermTable {
  int perm_count = 0;
  std::vector<std::uint8_t> image;
};

const PermTable& perm_table(int n) {
  static std::mutex mu;
  static std::array<PermTable, 8> cache;
  std::lock_guard<std::mutex> lock(mu);
  PermTable& t = cache[n];
  if (t.perm_count == 0) {
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), std::uint8_t{1});
    const word_t size = word_t{1} << n;
    do {
      std::uint8_t map[kMaxChannels + 1] = {};
      for (int i = 1; i <= n; ++i) map[i] = p[i - 1];
      for (word_t x = 0; x < size; ++x) {
        t.image.push_back(
            static_cast<std::uint8_t>(apply_channel_map(x, map)));
      }
      ++t.perm_count;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return t;
}

bool naive_oriented(const std::vector<word_t>& members, const OutputSet& b,
                    const PermTable& t, int n) {
  const word_t size = word_t{1} << n;
  const std::uint64_t* bw = b.words().data();
  const std::uint8_t* img = t.image.data();
  for (int p = 0; p < t.perm_count; ++p, img += size) {
    bool ok = true;
    for (word_t x : members) {
      if (!bits::test(bw, img[x])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool naive_subsumes(const OutputSet& a, const OutputSet& b) {
  if (a.n() != b.n()) throw std::invalid_argument("channel count mismatch");
  const int n = a.n();
  if (n > 7) {
    throw std::invalid_argument("naive_subsumes handles at most 7 channels");
  }
  const PermTable& t = perm_table(n);
  bool forward = true;
  bool mirrored = true;
  for (int k = 0; k <= n; ++k) {
    if (a.weights()[k] > b.weights()[k]) forward = false;
    if (a.weights()[n - k] > b.weights()[k]) mirrored = false;
  }
  if (forward && naive_oriented(a.members(), b, t, n)) return true;
  if (mirrored && naive_oriented(a.reflected().members(), b, t, n)) {
    return true;
  }
  return false;
}

std::shared_ptr<const std::vector<Level>> CandidatePool::shared_catalog(
    int n) {
  return std::make_shared<const std::vector<Level>>(enumerate_levels(n));
}

CandidatePool::CandidatePool(
    int n, int depth, std::shared_ptr<const std::vector<Level>> catalog)
    : n_(n), depth_(depth), catalog_(std::move(catalog)) {
  check_channel_count(n_);
  if (depth_ < 0) throw std::invalid_argument("negative depth");
  if (!catalog_) throw std::invalid_argument("null level catalog");
  for (std::size_t i = 0; i < catalog_->size(); ++i) {
    check_level(n_, (*catalog_)[i]);
    if (i > 0 && !((*catalog_)[i - 1] < (*catalog_)[i])) {
      throw std::invalid_argument(
          "catalog must be sorted with distinct levels");
    }
  }
  w_count_ = bits::word_count(n_);
  slots_.assign(16, 0);
}

std::size_t CandidatePool::probe(const std::uint64_t* words,
                                 std::uint64_t hash) const {
  const std::size_t mask = slots_.size() - 1;
  std::size_t slot = hash & mask;
  while (slots_[slot] != 0) {
    const std::size_t idx = slots_[slot] - 1;
    if (hashes_[idx] == hash &&
        bits::equal(bits_.data() + idx * w_count_, words, w_count_)) {
      return slot;
    }
    slot = (slot + 1) & mask;
  }
  return slot;
}

void CandidatePool::rehash(std::size_t slot_count) {
  // Entries are distinct, so reinsertion never needs content compares.
  slots_.assign(slot_count, 0);
  const std::size_t mask = slot_count - 1;
  for (std::size_t idx = 0; idx < cards_.size(); ++idx) {
    std::size_t slot = hashes_[idx] & mask;
    while (slots_[slot] != 0) slot = (slot + 1) & mask;
    slots_[slot] = static_cast<std::uint32_t>(idx + 1);
  }
}

bool CandidatePool::insert(const std::uint64_t* words,
                           std::span<const std::uint32_t> witness) {
  if (witness.size() != static_cast<std::size_t>(depth_)) {
    throw std::invalid_argument("witness depth mismatch");
  }
  for (std::uint32_t id : witness) {
    if (id >= catalog_->size()) {
      throw std::invalid_argument("witness level index out of range");
    }
  }
  if ((words[w_count_ - 1] & ~bits::tail_mask(n_)) != 0) {
    throw std::invalid_argument("bits set beyond 2^n");
  }
  const std::uint64_t hash = bits::hash_bits(words, w_count_);
  const std::size_t slot = probe(words, hash);
  if (slots_[slot] != 0) {
    const std::size_t idx = slots_[slot] - 1;
    std::uint32_t* old_wit = wit_.data() + idx * depth_;
    if (std::lexicographical_compare(witness.begin(), witness.end(), old_wit,
                                     old_wit + depth_)) {
      std::copy(witness.begin(), witness.end(), old_wit);
    }
    return false;
  }
  const std::size_t idx = cards_.size();
  bits_.insert(bits_.end(), words, words + w_count_);
  wit_.insert(wit_.end(), witness.begin(), witness.end());
  hashes_.push_back(hash);
  std::array<std::uint16_t, kMaxChannels + 1> wv{};
  bits::for_each_member(words, w_count_,
                        [&](word_t x) { ++wv[std::popcount(x)]; });
  std::uint32_t card = 0;
  for (int k = 0; k <= n_; ++k) card += wv[k];
  cards_.push_back(card);
  wv_.insert(wv_.end(), wv.begin(), wv.begin() + n_ + 1);
  slots_[slot] = static_cast<std::uint32_t>(idx + 1);
  if ((cards_.size() + 1) * 2 > slots_.size()) rehash(slots_.size() * 2);
  return true;
}

bool CandidatePool::insert(const OutputSet& set, const Network& witness) {
  if (set.n() != n_ || witness.n != n_) {
    throw std::invalid_argument("channel count mismatch");
  }
  if (witness.depth() != depth_) {
    throw std::invalid_argument("witness depth mismatch");
  }
  check_network(witness);
  std::vector<std::uint32_t> ids;
  ids.reserve(depth_);
  for (const Level& level : witness.levels) {
    const auto it = std::lower_bound(catalog_->begin(), catalog_->end(), level);
    if (it == catalog_->end() || *it != level) {
      throw std::invalid_argument("witness level not in catalog");
    }
    ids.push_back(static_cast<std::uint32_t>(it - catalog_->begin()));
  }
  return insert(set.words().data(), ids);
}

OutputSet CandidatePool::output_set(std::size_t idx) const {
  return OutputSet::of_words(n_, {words_of(idx), w_count_});
}

Network CandidatePool::witness_network(std::size_t idx) const {
  Network net;
  net.n = n_;
  net.levels.reserve(depth_);
  for (std::uint32_t id : witness_ids_of(idx)) {
    net.levels.push_back((*catalog_)[id]);
  }
  return net;
}

void CandidatePool::reserve(std::size_t entries) {
  bits_.reserve(entries * w_count_);
  wit_.reserve(entries * depth_);
  cards_.reserve(entries);
  wv_.reserve(entries * (n_ + 1));
  hashes_.reserve(entries);
  if (entries * 2 > slots_.size()) rehash(std::bit_ceil(entries * 2 + 1));
}

std::size_t CandidatePool::bytes_per_entry() const {
  return w_count_ * 8 + depth_ * 4 + 4 + (n_ + 1) * 2 + 8 + 8;
}

namespace {

// Permutation-invariant content key: cardinality, weight vector, and the
// sorted multiset of per-channel rows.  Equivalent entries always collide;
// unequal keys therefore prove inequivalence, while colliding entries are
// still tested properly.
std::uint64_t invariant_key(std::uint32_t card,
                            std::span<const std::uint16_t> wv,
                            const std::uint16_t* sig, int n) {
  const int stride = n + 1;
  std::array<const std::uint16_t*, kMaxChannels> rows{};
  for (int i = 0; i < n; ++i) rows[i] = sig + i * stride;
  std::sort(rows.begin(), rows.begin() + n,
            [stride](const std::uint16_t* x, const std::uint16_t* y) {
              return std::lexicographical_compare(x, x + stride, y, y + stride);
            });
  std::uint64_t h = 0x9E3779B97F4A7C15ull ^ card;
  const auto mix = [&h](std::uint64_t v) {
    v += 0x9E3779B97F4A7C15ull;
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
    h = (h ^ v ^ (v >> 31)) * 0xD6E8FEB86659FD93ull;
  };
  for (int k = 0; k <= n; ++k) mix(wv[k]);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < stride; ++k) mix(rows[i][k]);
  }
  return h ^ (h >> 32);
}

// Equal-cardinality equivalence test; subset at equal size is equality.
bool equivalent_pair(const CandidatePool& pool, std::uint32_t e,
                     const std::uint16_t* sig, const std::uint16_t* rsig,
                     std::uint32_t r, const std::uint16_t* rep_sig,
                     std::size_t w, int n) {
  CandidateMasks masks;
  if (build_masks(sig, rep_sig, n, true, masks)) {
    Matcher m(n, w, pool.words_of(e), pool.words_of(r));
    if (m.solve(masks)) return true;
  }
  if (build_masks(rsig, rep_sig, n, true, masks)) {
    std::uint64_t buf[bits::kMaxWords];
    reflect_words(pool.words_of(e), buf, n, w);
    Matcher m(n, w, buf, pool.words_of(r));
    if (m.solve(masks)) return true;
  }
  return false;
}

// Canonical processing order; the index tie-break keeps the comparator
// strict-weak even on malformed pools with duplicate witnesses.
std::vector<std::uint32_t> canonical_order(const CandidatePool& pool) {
  std::vector<std::uint32_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t x, std::uint32_t y) {
              const std::uint32_t cx = pool.cardinality_of(x);
              const std::uint32_t cy = pool.cardinality_of(y);
              if (cx != cy) return cx < cy;
              const auto wx = pool.witness_ids_of(x);
              const auto wy = pool.witness_ids_of(y);
              const auto cmp = std::lexicographical_compare_three_way(
                  wx.begin(), wx.end(), wy.begin(), wy.end());
              if (cmp != 0) return cmp < 0;
              return x < y;
            });
  return order;
}

// Merges equivalence classes and returns one entry index per class, in
// canonical order.  The first class member in canonical order becomes the
// representative, which is exactly the least-witness rule.  Entries are
// grouped by a key invariant under permutation and reflection, so classes
// live inside key runs; signatures are recomputed per probe instead of
// cached, keeping the footprint a few machine words per entry.
std::vector<std::uint32_t> equivalence_reps(const CandidatePool& pool) {
  const int n = pool.n();
  const std::size_t w = pool.word_count();
  const std::size_t count = pool.size();
  const std::vector<std::uint32_t> order = canonical_order(pool);
  std::vector<std::uint32_t> rank(count);
  for (std::uint32_t r = 0; r < count; ++r) rank[order[r]] = r;

  std::vector<std::uint64_t> keys(count);
  for (std::uint32_t e = 0; e < count; ++e) {
    std::uint16_t sig[kMaxSigSize];
    std::uint16_t rsig[kMaxSigSize];
    const auto wv = pool.weight_vector_of(e);
    signature_into(pool.words_of(e), w, n, sig);
    reflect_signature_into(sig, wv, n, rsig);
    const auto rwv = reversed_wv(wv, n);
    const std::uint32_t card = pool.cardinality_of(e);
    keys[e] = std::min(
        invariant_key(card, wv, sig, n),
        invariant_key(card, {rwv.data(), wv.size()}, rsig, n));
  }
  std::vector<std::uint32_t> by_key(count);
  std::iota(by_key.begin(), by_key.end(), 0u);
  std::sort(by_key.begin(), by_key.end(),
            [&](std::uint32_t x, std::uint32_t y) {
              if (keys[x] != keys[y]) return keys[x] < keys[y];
              return rank[x] < rank[y];
            });

  std::vector<std::uint32_t> reps;
  std::vector<std::uint32_t> run;
  std::size_t s = 0;
  while (s < count) {
    std::size_t t = s + 1;
    while (t < count && keys[by_key[t]] == keys[by_key[s]]) ++t;
    run.clear();
    for (std::size_t u = s; u < t; ++u) {
      const std::uint32_t e = by_key[u];
      bool merged = false;
      if (!run.empty()) {
        std::uint16_t sig[kMaxSigSize];
        std::uint16_t rsig[kMaxSigSize];
        signature_into(pool.words_of(e), w, n, sig);
        reflect_signature_into(sig, pool.weight_vector_of(e), n, rsig);
        const std::uint32_t card = pool.cardinality_of(e);
        for (std::uint32_t r : run) {
          if (pool.cardinality_of(r) != card) continue;
          std::uint16_t rep_sig[kMaxSigSize];
          signature_into(pool.words_of(r), w, n, rep_sig);
          if (equivalent_pair(pool, e, sig, rsig, r, rep_sig, w, n)) {
            merged = true;
            break;
          }
        }
      }
      if (!merged) run.push_back(e);
    }
    reps.insert(reps.end(), run.begin(), run.end());
    s = t;
  }
  std::sort(reps.begin(), reps.end(),
            [&](std::uint32_t x, std::uint32_t y) { return rank[x] < rank[y]; });
  return reps;
}

// Per-representative signature or mirrored-word store, filled on first use.
// Only representatives that actually reach a gated subsumption test pay for
// materialization, which keeps the sweep's memory proportional to the
// tested fraction instead of the pool size.
class LazySigCache {
 public:
  LazySigCache(const CandidatePool& pool, const std::vector<std::uint32_t>& reps,
               int n, bool mirrored)
      : pool_(pool), reps_(reps), n_(n), mirrored_(mirrored),
        slot_(reps.size()) {}

  const std::uint16_t* get(std::uint32_t pos) {
    if (!slot_[pos]) {
      const std::size_t ssz = sig_size(n_);
      slot_[pos] = std::make_unique<std::uint16_t[]>(ssz);
      std::uint16_t* dst = slot_[pos].get();
      const std::uint32_t e = reps_[pos];
      signature_into(pool_.words_of(e), pool_.word_count(), n_, dst);
      if (mirrored_) {
        std::uint16_t tmp[kMaxSigSize];
        std::copy_n(dst, ssz, tmp);
        reflect_signature_into(tmp, pool_.weight_vector_of(e), n_, dst);
      }
    }
    return slot_[pos].get();
  }

 private:
  const CandidatePool& pool_;
  const std::vector<std::uint32_t>& reps_;
  int n_;
  bool mirrored_;
  std::vector<std::unique_ptr<std::uint16_t[]>> slot_;
};

class LazyWordCache {
 public:
  LazyWordCache(const CandidatePool& pool, const std::vector<std::uint32_t>& reps,
                int n)
      : pool_(pool), reps_(reps), n_(n), slot_(reps.size()) {}

  const std::uint64_t* get(std::uint32_t pos) {
    if (!slot_[pos]) {
      const std::size_t w = pool_.word_count();
      slot_[pos] = std::make_unique<std::uint64_t[]>(w);
      reflect_words(pool_.words_of(reps_[pos]), slot_[pos].get(), n_, w);
    }
    return slot_[pos].get();
  }

 private:
  const CandidatePool& pool_;
  const std::vector<std::uint32_t>& reps_;
  int n_;
  std::vector<std::unique_ptr<std::uint64_t[]>> slot_;
};

// Column profile of a signature: for every weight k the n per-channel
// counts sorted descending.  A permutation with rowwise domination forces
// the r largest counts of a under r distinct counts of b, so elementwise <=
// over the profiles is a necessary condition far cheaper than the full
// row-by-row compatibility scan.  Columns are stored middle weights first:
// they carry the most variation, so a failing comparison exits earliest
// there, and every profile uses the same order so the flat compare stands.
constexpr std::size_t profile_size(int n) {
  return static_cast<std::size_t>(n) * (n + 1);
}

std::array<int, kMaxChannels + 1> mid_out_weights(int n) {
  std::array<int, kMaxChannels + 1> ks{};
  for (int k = 0; k <= n; ++k) ks[k] = k;
  std::sort(ks.begin(), ks.begin() + n + 1, [n](int x, int y) {
    const int dx = std::abs(2 * x - n);
    const int dy = std::abs(2 * y - n);
    return dx != dy ? dx < dy : x < y;
  });
  return ks;
}

void profile_from_signature(const std::uint16_t* sig, int n,
                            std::uint16_t* out) {
  const int stride = n + 1;
  const std::array<int, kMaxChannels + 1> ks = mid_out_weights(n);
  for (int c = 0; c < stride; ++c) {
    const int k = ks[c];
    std::uint16_t* col = out + static_cast<std::size_t>(c) * n;
    for (int i = 0; i < n; ++i) col[i] = sig[i * stride + k];
    std::sort(col, col + n, std::greater<std::uint16_t>());
  }
}

bool profile_fits(const std::uint16_t* a, const std::uint16_t* b, int n) {
  const std::size_t psz = profile_size(n);
  for (std::size_t i = 0; i < psz; ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

// The four leading profile entries packed into one word.  Counts stay far
// below 2^15, so lane subtraction cannot borrow across lanes and one SWAR
// compare screens a pair before any pointer chasing into the caches.
constexpr std::uint64_t kDigestHigh = 0x8000800080008000ull;

std::uint64_t pack_digest(const std::uint16_t* top4) {
  return static_cast<std::uint64_t>(top4[0]) |
         (static_cast<std::uint64_t>(top4[1]) << 16) |
         (static_cast<std::uint64_t>(top4[2]) << 32) |
         (static_cast<std::uint64_t>(top4[3]) << 48);
}

bool digest_fits(std::uint64_t a, std::uint64_t b) {
  return (((b | kDigestHigh) - a) & kDigestHigh) == kDigestHigh;
}

class LazyProfileCache {
 public:
  LazyProfileCache(const CandidatePool& pool,
                   const std::vector<std::uint32_t>& reps, int n,
                   bool mirrored)
      : pool_(pool), reps_(reps), n_(n), mirrored_(mirrored),
        slot_(reps.size()) {}

  const std::uint16_t* get(std::uint32_t pos) {
    if (!slot_[pos]) {
      slot_[pos] = std::make_unique<std::uint16_t[]>(profile_size(n_));
      const std::uint32_t e = reps_[pos];
      std::uint16_t sig[kMaxSigSize];
      signature_into(pool_.words_of(e), pool_.word_count(), n_, sig);
      if (mirrored_) {
        std::uint16_t tmp[kMaxSigSize];
        std::copy_n(sig, sig_size(n_), tmp);
        reflect_signature_into(tmp, pool_.weight_vector_of(e), n_, sig);
      }
      profile_from_signature(sig, n_, slot_[pos].get());
    }
    return slot_[pos].get();
  }

 private:
  const CandidatePool& pool_;
  const std::vector<std::uint32_t>& reps_;
  int n_;
  bool mirrored_;
  std::vector<std::unique_ptr<std::uint16_t[]>> slot_;
};

class LazyPairCache {
 public:
  LazyPairCache(const CandidatePool& pool,
                const std::vector<std::uint32_t>& reps, int n, bool mirrored)
      : pool_(pool), reps_(reps), n_(n), mirrored_(mirrored),
        slot_(reps.size()) {}

  const std::uint16_t* get(std::uint32_t pos) {
    if (!slot_[pos]) {
      const std::size_t psz = pair_sig_size(n_);
      const std::size_t w = pool_.word_count();
      slot_[pos] = std::make_unique<std::uint16_t[]>(psz);
      const std::uint64_t* src = pool_.words_of(reps_[pos]);
      if (mirrored_) {
        std::uint64_t buf[bits::kMaxWords];
        reflect_words(src, buf, n_, w);
        pair_signature_into(buf, w, n_, slot_[pos].get());
      } else {
        pair_signature_into(src, w, n_, slot_[pos].get());
      }
    }
    return slot_[pos].get();
  }

 private:
  const CandidatePool& pool_;
  const std::vector<std::uint32_t>& reps_;
  int n_;
  bool mirrored_;
  std::vector<std::unique_ptr<std::uint16_t[]>> slot_;
};

// Sorted column profile over unordered channel pairs, the pairwise analog
// of the per-channel profile: a permutation induces an injection on channel
// pairs with rowwise domination, so for each weight the r largest pair
// counts of a must fit under the r largest of b.  Far cheaper than the
// assignment search it guards, and it rejects most pairs that pass the
// single-channel screens.
constexpr std::size_t pair_profile_size(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2 * (n + 1);
}

bool pair_profile_fits(const std::uint16_t* a, const std::uint16_t* b,
                       int n) {
  const std::size_t psz = pair_profile_size(n);
  for (std::size_t i = 0; i < psz; ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

class LazyPairProfileCache {
 public:
  LazyPairProfileCache(const CandidatePool& pool,
                       const std::vector<std::uint32_t>& reps, int n,
                       bool mirrored)
      : pool_(pool), reps_(reps), n_(n), mirrored_(mirrored),
        slot_(reps.size()) {}

  const std::uint16_t* get(std::uint32_t pos) {
    if (!slot_[pos]) {
      slot_[pos] = std::make_unique<std::uint16_t[]>(pair_profile_size(n_));
      const std::size_t w = pool_.word_count();
      const std::uint64_t* src = pool_.words_of(reps_[pos]);
      std::uint16_t psig[pair_sig_size(kMaxChannels)];
      if (mirrored_) {
        std::uint64_t buf[bits::kMaxWords];
        reflect_words(src, buf, n_, w);
        pair_signature_into(buf, w, n_, psig);
      } else {
        pair_signature_into(src, w, n_, psig);
      }
      const int stride = n_ + 1;
      const int npairs = n_ * (n_ - 1) / 2;
      const std::array<int, kMaxChannels + 1> ks = mid_out_weights(n_);
      for (int c = 0; c < stride; ++c) {
        const int k = ks[c];
        std::uint16_t* col = slot_[pos].get() + static_cast<std::size_t>(c) * npairs;
        int idx = 0;
        for (int i = 0; i < n_; ++i) {
          for (int j = i + 1; j < n_; ++j) {
            col[idx++] = psig[(static_cast<std::size_t>(i) * n_ + j) * stride + k];
          }
        }
        std::sort(col, col + npairs, std::greater<std::uint16_t>());
      }
    }
    return slot_[pos].get();
  }

 private:
  const CandidatePool& pool_;
  const std::vector<std::uint32_t>& reps_;
  int n_;
  bool mirrored_;
  std::vector<std::unique_ptr<std::uint16_t[]>> slot_;
};

bool wv_dominates(const std::uint16_t* a, const std::uint16_t* b, int n) {
  for (int k = 0; k <= n; ++k) {
    if (a[k] > b[k]) return false;
  }
  return true;
}

}  // namespace

CandidatePool merge_equivalent(const CandidatePool& pool) {
  CandidatePool out(pool.n(), pool.depth(), pool.catalog());
  if (pool.size() == 0) return out;
  const std::vector<std::uint32_t> reps = equivalence_reps(pool);
  out.reserve(reps.size());
  for (std::uint32_t e : reps) {
    out.insert(pool.words_of(e), pool.witness_ids_of(e));
  }
  return out;
}

CandidatePool minimize(const CandidatePool& pool) {
  const int n = pool.n();
  const std::size_t w = pool.word_count();
  CandidatePool out(n, pool.depth(), pool.catalog());
  if (pool.size() == 0) return out;
  const std::vector<std::uint32_t> reps = equivalence_reps(pool);
  const std::size_t rep_count = reps.size();

  // Cross-cardinality sweep.  A representative dies when any representative
  // of strictly smaller cardinality subsumes it; equal cardinality cannot
  // subsume across distinct classes, and transitivity makes testing against
  // dead representatives harmless, which keeps the outcome independent of
  // processing order.  Subsumption forces the subsumer's weight vector below
  // the target's pointwise, in the forward or mirrored orientation, so
  // representatives are grouped by weight vector and whole group pairs are
  // gated at once.
  struct Group {
    std::uint32_t card;
    const std::uint16_t* wv;
    std::array<std::uint16_t, kMaxChannels + 1> rwv{};
    std::vector<std::uint32_t> members;
    std::uint32_t alive = 0;
  };
  constexpr std::uint32_t kNoGroup = 0xFFFFFFFFu;
  std::vector<Group> groups;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> gmap;
  for (std::uint32_t pos = 0; pos < rep_count; ++pos) {
    const auto wv = pool.weight_vector_of(reps[pos]);
    std::uint64_t h = 0xD6E8FEB86659FD93ull;
    for (int k = 0; k <= n; ++k) h = (h ^ wv[k]) * 0x100000001B3ull;
    auto& ids = gmap[h];
    std::uint32_t g = kNoGroup;
    for (std::uint32_t id : ids) {
      if (std::equal(wv.begin(), wv.end(), groups[id].wv)) {
        g = id;
        break;
      }
    }
    if (g == kNoGroup) {
      g = static_cast<std::uint32_t>(groups.size());
      ids.push_back(g);
      Group grp;
      grp.card = pool.cardinality_of(reps[pos]);
      grp.wv = wv.data();
      grp.rwv = reversed_wv(wv, n);
      groups.push_back(std::move(grp));
    }
    groups[g].members.push_back(pos);
  }
  for (Group& g : groups) g.alive = static_cast<std::uint32_t>(g.members.size());

  // Strictly smaller cardinality first; discovery index breaks ties so the
  // pairing below stays reproducible.
  std::vector<std::uint32_t> gorder(groups.size());
  std::iota(gorder.begin(), gorder.end(), 0u);
  std::sort(gorder.begin(), gorder.end(),
            [&](std::uint32_t x, std::uint32_t y) {
              if (groups[x].card != groups[y].card) {
                return groups[x].card < groups[y].card;
              }
              return x < y;
            });

  LazySigCache fwd_sig(pool, reps, n, false);
  LazySigCache mir_sig(pool, reps, n, true);
  LazyWordCache mir_words(pool, reps, n);
  LazyProfileCache fwd_prof(pool, reps, n, false);
  LazyProfileCache mir_prof(pool, reps, n, true);
  LazyPairProfileCache fwd_pprof(pool, reps, n, false);
  LazyPairProfileCache mir_pprof(pool, reps, n, true);
  LazyPairCache fwd_pair(pool, reps, n, false);
  LazyPairCache mir_pair(pool, reps, n, true);

  // Per-representative digests, built eagerly: the first profile column is
  // the mid weight in both orientations, and the mirrored column derives
  // from the forward signature and the weight vector directly.
  const int kmid = mid_out_weights(n)[0];
  const int km = n - kmid;
  std::vector<std::uint64_t> fwd_dig(rep_count), mir_dig(rep_count);
  {
    std::uint16_t sig[kMaxSigSize];
    std::uint16_t colf[kMaxChannels], colm[kMaxChannels];
    for (std::uint32_t pos = 0; pos < rep_count; ++pos) {
      const std::uint32_t e = reps[pos];
      signature_into(pool.words_of(e), w, n, sig);
      const auto wv = pool.weight_vector_of(e);
      for (int i = 0; i < n; ++i) {
        colf[i] = sig[i * (n + 1) + kmid];
        colm[i] = static_cast<std::uint16_t>(wv[km] - sig[i * (n + 1) + km]);
      }
      std::sort(colf, colf + n, std::greater<std::uint16_t>());
      std::sort(colm, colm + n, std::greater<std::uint16_t>());
      fwd_dig[pos] = pack_digest(colf);
      mir_dig[pos] = pack_digest(colm);
    }
  }

  // The gate scan visits every smaller-cardinality group per target group,
  // so its state lives in flat arrays in sweep order; chasing Group records
  // through gorder would miss cache on every probe.
  const std::size_t gcount = gorder.size();
  const int stride = n + 1;
  std::vector<std::uint32_t> g_card(gcount), g_alive(gcount);
  std::vector<std::uint16_t> g_wv(gcount * stride), g_rwv(gcount * stride);
  for (std::size_t q = 0; q < gcount; ++q) {
    const Group& g = groups[gorder[q]];
    g_card[q] = g.card;
    g_alive[q] = g.alive;
    std::copy_n(g.wv, stride, &g_wv[q * stride]);
    std::copy_n(g.rwv.data(), stride, &g_rwv[q * stride]);
  }

  std::vector<char> dead(rep_count, 0);
  for (std::size_t qb = 0; qb < gcount; ++qb) {
    const Group& gb = groups[gorder[qb]];
    const std::uint16_t* bwv = &g_wv[qb * stride];
    for (std::size_t qa = 0; qa < qb && g_alive[qb] > 0; ++qa) {
      if (g_card[qa] >= g_card[qb]) break;
      if (g_alive[qa] == 0) continue;
      const bool fdom = wv_dominates(&g_wv[qa * stride], bwv, n);
      const bool rdom = wv_dominates(&g_rwv[qa * stride], bwv, n);
      if (!fdom && !rdom) continue;
      const Group& ga = groups[gorder[qa]];
      for (std::uint32_t pb : gb.members) {
        if (dead[pb]) continue;
        const std::uint64_t* bw = pool.words_of(reps[pb]);
        bool hit = false;
        for (std::uint32_t pa : ga.members) {
          if (dead[pa]) continue;
          const std::uint64_t* aw = pool.words_of(reps[pa]);
          if (fdom) {
            if (bits::subset(aw, bw, w)) {
              hit = true;
            } else if (digest_fits(fwd_dig[pa], fwd_dig[pb]) &&
                       profile_fits(fwd_prof.get(pa), fwd_prof.get(pb), n) &&
                       pair_profile_fits(fwd_pprof.get(pa), fwd_pprof.get(pb),
                                         n)) {
              CandidateMasks masks;
              if (build_masks(fwd_sig.get(pa), fwd_sig.get(pb), n, false,
                              masks)) {
                Matcher m(n, w, aw, bw);
                m.set_pair_sigs(fwd_pair.get(pa), fwd_pair.get(pb));
                hit = m.solve(masks);
              }
            }
          }
          if (!hit && rdom) {
            const std::uint64_t* raw = mir_words.get(pa);
            if (bits::subset(raw, bw, w)) {
              hit = true;
            } else if (digest_fits(mir_dig[pa], fwd_dig[pb]) &&
                       profile_fits(mir_prof.get(pa), fwd_prof.get(pb), n) &&
                       pair_profile_fits(mir_pprof.get(pa), fwd_pprof.get(pb),
                                         n)) {
              CandidateMasks masks;
              if (build_masks(mir_sig.get(pa), fwd_sig.get(pb), n, false,
                              masks)) {
                Matcher m(n, w, raw, bw);
                m.set_pair_sigs(mir_pair.get(pa), fwd_pair.get(pb));
                hit = m.solve(masks);
              }
            }
          }
          if (hit) break;
        }
        if (hit) {
          dead[pb] = 1;
          --g_alive[qb];
        }
      }
    }
  }

  std::size_t kept = 0;
  for (std::size_t i = 0; i < rep_count; ++i) kept += dead[i] ? 0 : 1;
  out.reserve(kept);
  for (std::size_t i = 0; i < rep_count; ++i) {
    if (dead[i]) continue;
    out.insert(pool.words_of(reps[i]), pool.witness_ids_of(reps[i]));
  }
  return out;
}

}  // namespace sortnet
