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

#include "outset.hh"

#include <bit>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "bits.hh"

namespace sortnet {

OutputSet::OutputSet(int n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)), weights_(n + 1, 0) {
  const std::size_t w_count = bits::word_count(n_);
  bits::for_each_member(words_.data(), w_count, [&](word_t x) {
    ++weights_[std::popcount(x)];
  });
  std::uint32_t total = 0;
  for (std::uint32_t c : weights_) total += c;
  cardinality_ = total;
}

OutputSet OutputSet::all_inputs(int n) {
  check_channel_count(n);
  std::vector<std::uint64_t> words(bits::word_count(n), ~std::uint64_t{0});
  words.back() &= bits::tail_mask(n);
  return OutputSet(n, std::move(words));
}

OutputSet OutputSet::sorted_only(int n) {
  check_channel_count(n);
  std::vector<std::uint64_t> words(bits::word_count(n), 0);
  for (int ones = 0; ones <= n; ++ones) {
    bits::set(words.data(), sorted_word(n, ones));
  }
  return OutputSet(n, std::move(words));
}

OutputSet OutputSet::of_network(const Network& net) {
  check_network(net);
  OutputSet s = all_inputs(net.n);
  for (const Level& level : net.levels) s = s.extended(level);
  return s;
}

OutputSet OutputSet::of_members(int n, std::span<const word_t> members) {
  check_channel_count(n);
  std::vector<std::uint64_t> words(bits::word_count(n), 0);
  for (word_t x : members) {
    if (x > word_mask(n)) {
      throw std::invalid_argument("member out of range for " +
                                  std::to_string(n) + " channels");
    }
    bits::set(words.data(), x);
  }
  return OutputSet(n, std::move(words));
}

OutputSet OutputSet::of_words(int n, std::span<const std::uint64_t> words) {
  check_channel_count(n);
  if (words.size() != bits::word_count(n)) {
    throw std::invalid_argument("word count mismatch for " + std::to_string(n) +
                                " channels");
  }
  if ((words.back() & ~bits::tail_mask(n)) != 0) {
    throw std::invalid_argument("bits set beyond 2^n");
  }
  return OutputSet(n, std::vector<std::uint64_t>(words.begin(), words.end()));
}

bool OutputSet::contains(word_t x) const {
  if (x > word_mask(n_)) return false;
  return bits::test(words_.data(), x);
}

OutputSet OutputSet::extended(const Level& level) const {
  check_level(n_, level);
  std::vector<std::uint64_t> next = words_;
  std::uint64_t scratch[bits::kMaxWords];
  bits::apply_level(next.data(), next.size(), level.data(), level.size(),
                    scratch);
  return OutputSet(n_, std::move(next));
}

OutputSet OutputSet::reflected() const {
  std::vector<std::uint64_t> next(words_.size(), 0);
  bits::for_each_member(words_.data(), words_.size(), [&](word_t x) {
    bits::set(next.data(), reflect_word(x, n_));
  });
  return OutputSet(n_, std::move(next));
}

std::uint64_t OutputSet::dedup_key() const {
  return bits::hash_bits(words_.data(), words_.size()) ^
         (std::uint64_t{0x53ull} * static_cast<std::uint64_t>(n_));
}

bool OutputSet::same_members(const OutputSet& other) const {
  return n_ == other.n_ &&
         bits::equal(words_.data(), other.words_.data(), words_.size());
}

std::vector<word_t> OutputSet::members() const {
  std::vector<word_t> out;
  out.reserve(cardinality_);
  bits::for_each_member(words_.data(), words_.size(),
                        [&](word_t x) { out.push_back(x); });
  return out;
}

std::string OutputSet::serialize() const {
  std::string out = "n=" + std::to_string(n_) +
                    " count=" + std::to_string(cardinality_) + "\n";
  char buf[16];
  bits::for_each_member(words_.data(), words_.size(), [&](word_t x) {
    const auto res = std::to_chars(buf, buf + sizeof buf, x, 16);
    out.append(buf, res.ptr);
    out.push_back('\n');
  });
  return out;
}

OutputSet OutputSet::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty output-set text");
  }
  int n = 0;
  std::uint32_t count = 0;
  {
    std::istringstream header(line);
    std::string n_token, count_token, extra;
    if (!(header >> n_token >> count_token) || header >> extra ||
        n_token.rfind("n=", 0) != 0 || count_token.rfind("count=", 0) != 0) {
      throw std::invalid_argument("malformed output-set header '" + line +
                                  "'");
    }
    try {
      n = std::stoi(n_token.substr(2));
      count = static_cast<std::uint32_t>(std::stoul(count_token.substr(6)));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed output-set header '" + line +
                                  "'");
    }
  }
  check_channel_count(n);
  std::vector<std::uint64_t> words(bits::word_count(n), 0);
  std::uint32_t seen = 0;
  bool have_prev = false;
  word_t prev = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    word_t x = 0;
    const auto res =
        std::from_chars(line.data(), line.data() + line.size(), x, 16);
    if (res.ec != std::errc{} || res.ptr != line.data() + line.size()) {
      throw std::invalid_argument("malformed member '" + line + "'");
    }
    if (x > word_mask(n)) {
      throw std::invalid_argument("member out of range: " + line);
    }
    if (have_prev && x <= prev) {
      throw std::invalid_argument("members must be strictly ascending");
    }
    prev = x;
    have_prev = true;
    bits::set(words.data(), x);
    ++seen;
  }
  if (seen != count) {
    throw std::invalid_argument("member count mismatch: header says " +
                                std::to_string(count) + ", found " +
                                std::to_string(seen));
  }
  return OutputSet(n, std::move(words));
}

}  // namespace sortnet
