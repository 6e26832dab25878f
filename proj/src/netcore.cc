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

#include "netcore.hh"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace sortnet {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

[[noreturn]] void fail_at(int line, const std::string& message) {
  fail("line " + std::to_string(line) + ": " + message);
}

}  // namespace

std::size_t Network::comparator_count() const {
  std::size_t total = 0;
  for (const Level& level : levels) total += level.size();
  return total;
}

void check_channel_count(int n) {
  if (n < kMinChannels || n > kMaxChannels) {
    fail("channel count must be between 2 and 16, got " + std::to_string(n));
  }
}

void check_level(int n, const Level& level) {
  check_channel_count(n);
  unsigned used = 0;
  const Comparator* prev = nullptr;
  for (const Comparator& c : level) {
    if (c.lo < 1 || c.hi <= c.lo || c.hi > n) {
      fail("comparator " + std::to_string(c.lo) + ":" + std::to_string(c.hi) +
           " is not an ascending pair on " + std::to_string(n) + " channels");
    }
    const unsigned bits = (1u << (c.lo - 1)) | (1u << (c.hi - 1));
    if (used & bits) {
      fail("channel used twice in one level at comparator " +
           std::to_string(c.lo) + ":" + std::to_string(c.hi));
    }
    used |= bits;
    if (prev != nullptr && !(*prev < c)) {
      fail("level comparators must be sorted by lo channel");
    }
    prev = &c;
  }
}

void check_network(const Network& net) {
  check_channel_count(net.n);
  for (const Level& level : net.levels) check_level(net.n, level);
}

word_t apply_level(word_t x, const Level& level) {
  for (const Comparator& c : level) {
    const word_t swap = (1u << (c.lo - 1)) | (1u << (c.hi - 1));
    // Out of order exactly when lo carries 1 and hi carries 0.
    if ((x & swap) == (1u << (c.lo - 1))) x ^= swap;
  }
  return x;
}

word_t evaluate(const Network& net, word_t input) {
  word_t x = input & word_mask(net.n);
  for (const Level& level : net.levels) x = apply_level(x, level);
  return x;
}

word_t word_mask(int n) { return (n >= 32) ? ~word_t{0} : ((word_t{1} << n) - 1); }

bool is_sorted_word(word_t x, int n) {
  return x == sorted_word(n, std::popcount(x));
}

word_t sorted_word(int n, int ones) {
  return ((word_t{1} << ones) - 1) << (n - ones);
}

bool is_sorting_network(const Network& net) {
  const word_t count = word_t{1} << net.n;
  for (word_t x = 0; x < count; ++x) {
    if (!is_sorted_word(evaluate(net, x), net.n)) return false;
  }
  return true;
}

word_t reflect_word(word_t x, int n) {
  word_t reversed = 0;
  for (int i = 0; i < n; ++i) {
    reversed |= ((x >> i) & 1u) << (n - 1 - i);
  }
  return ~reversed & word_mask(n);
}

Level reflect_level(const Level& level, int n) {
  Level out;
  out.reserve(level.size());
  for (const Comparator& c : level) {
    out.push_back({static_cast<std::uint8_t>(n - c.hi + 1),
                   static_cast<std::uint8_t>(n - c.lo + 1)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Network reflect_network(const Network& net) {
  Network out{net.n, {}};
  out.levels.reserve(net.levels.size());
  for (const Level& level : net.levels) {
    out.levels.push_back(reflect_level(level, net.n));
  }
  return out;
}

Network concat(const Network& a, const Network& b) {
  if (a.n != b.n) {
    fail("cannot concatenate networks on " + std::to_string(a.n) + " and " +
         std::to_string(b.n) + " channels");
  }
  Network out = a;
  out.levels.insert(out.levels.end(), b.levels.begin(), b.levels.end());
  return out;
}

Network concat(const Network& a, const Level& b) {
  check_level(a.n, b);
  Network out = a;
  out.levels.push_back(b);
  return out;
}

namespace {

// Matchings over the free-channel mask, always extending from the lowest
// free channel so each level is produced exactly once, already sorted by lo.
void enumerate_from(int n, unsigned free, Level* current,
                    std::vector<Level>* out) {
  if (free == 0) {
    out->push_back(*current);
    return;
  }
  const int lo = std::countr_zero(free) + 1;
  const unsigned lo_bit = 1u << (lo - 1);
  // Leave lo unmatched.
  enumerate_from(n, free & ~lo_bit, current, out);
  for (int hi = lo + 1; hi <= n; ++hi) {
    const unsigned hi_bit = 1u << (hi - 1);
    if (!(free & hi_bit)) continue;
    current->push_back({static_cast<std::uint8_t>(lo),
                        static_cast<std::uint8_t>(hi)});
    enumerate_from(n, free & ~(lo_bit | hi_bit), current, out);
    current->pop_back();
  }
}

}  // namespace

std::vector<Level> enumerate_levels(int n) {
  check_channel_count(n);
  std::vector<Level> out;
  Level current;
  enumerate_from(n, static_cast<unsigned>(word_mask(n)), &current, &out);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Strips a trailing comment; returns true if the line is comment-only.
bool strip_comment(std::string* line) {
  const std::size_t first = line->find_first_not_of(" \t\r");
  const bool comment_only =
      first != std::string::npos && (*line)[first] == '#';
  const std::size_t hash = line->find('#');
  if (hash != std::string::npos) line->erase(hash);
  return comment_only;
}

}  // namespace

Network parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  Network net;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip_comment(&line)) continue;
    std::istringstream tokens(line);
    std::string token;
    if (!have_header) {
      if (!(tokens >> token)) continue;  // leading blank lines
      if (token.rfind("n=", 0) != 0) {
        fail_at(line_no, "expected header n=<channels>");
      }
      try {
        std::size_t used = 0;
        net.n = std::stoi(token.substr(2), &used);
        if (used != token.size() - 2) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        fail_at(line_no, "malformed channel count in '" + token + "'");
      }
      if (net.n < kMinChannels || net.n > kMaxChannels) {
        fail_at(line_no, "channel count must be between 2 and 16, got " +
                             std::to_string(net.n));
      }
      std::string extra;
      if (tokens >> extra) fail_at(line_no, "unexpected token '" + extra + "'");
      have_header = true;
      continue;
    }
    Level level;
    while (tokens >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon == token.size() - 1) {
        fail_at(line_no, "expected lo:hi, got '" + token + "'");
      }
      int lo = 0;
      int hi = 0;
      try {
        std::size_t used = 0;
        lo = std::stoi(token.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(token);
        hi = std::stoi(token.substr(colon + 1), &used);
        if (used != token.size() - colon - 1) {
          throw std::invalid_argument(token);
        }
      } catch (const std::exception&) {
        fail_at(line_no, "malformed comparator '" + token + "'");
      }
      if (lo < 1 || hi <= lo || hi > net.n) {
        fail_at(line_no, "comparator '" + token +
                             "' is not an ascending pair on " +
                             std::to_string(net.n) + " channels");
      }
      level.push_back({static_cast<std::uint8_t>(lo),
                       static_cast<std::uint8_t>(hi)});
    }
    std::sort(level.begin(), level.end());
    unsigned used_channels = 0;
    for (const Comparator& c : level) {
      const unsigned bits = (1u << (c.lo - 1)) | (1u << (c.hi - 1));
      if (used_channels & bits) {
        fail_at(line_no, "channel used twice in one level");
      }
      used_channels |= bits;
    }
    net.levels.push_back(std::move(level));
  }
  if (!have_header) fail_at(std::max(line_no, 1), "missing header n=<channels>");
  return net;
}

std::string format_network(const Network& net) {
  std::string out = "n=" + std::to_string(net.n) + "\n";
  for (const Level& level : net.levels) {
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(level[i].lo) + ":" + std::to_string(level[i].hi);
    }
    out += '\n';
  }
  return out;
}

}  // namespace sortnet
