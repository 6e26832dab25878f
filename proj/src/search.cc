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

#include "search.hh"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "bits.hh"
#include "prune.hh"

namespace sortnet {
namespace {

// Accumulator budget for one generation round.  When the deduplicated pool
// outgrows this many bytes of set storage its equivalence classes are
// merged in place, which cannot change the final result: each class keeps
// the representative the final reduction would pick anyway.  The second
// guard keeps a round that merges poorly from thrashing.
constexpr std::size_t kBatchBytes = std::size_t{1} << 30;  // 1 GiB

int lookahead_bound_for(int remaining) {
  if (remaining == 3) return 8;
  if (remaining == 2) return 4;
  return 0;
}

struct AdmitTable {
  bool admit[kMaxChannels + 1][kMaxChannels + 1];
};

void build_admits(const std::uint64_t* words, int n, int bound,
                  AdmitTable& table) {
  for (int lo = 1; lo < n; ++lo) {
    for (int hi = lo + 1; hi <= n; ++hi) {
      const Comparator c{static_cast<std::uint8_t>(lo),
                         static_cast<std::uint8_t>(hi)};
      table.admit[lo][hi] = lookahead_admits_words(words, n, c, bound);
    }
  }
}

CandidatePool generate_core(const CandidatePool& pool, int t, int d,
                            DepthStats& ds, std::size_t batch_bytes) {
  if (t != pool.depth() + 1) {
    throw std::invalid_argument("pool depth does not precede the target");
  }
  if (t > d) throw std::invalid_argument("depth beyond the search target");
  const int n = pool.n();
  const int remaining = d - t;
  const auto& catalog = *pool.catalog();
  const std::size_t w = pool.word_count();
  const int bound = lookahead_bound_for(remaining);

  CandidatePool acc(n, t, pool.catalog());
  const std::size_t cap_entries = std::max<std::size_t>(
      batch_bytes / std::max<std::size_t>(acc.bytes_per_entry(), 1), 1024);
  std::size_t floor_size = 0;

  std::uint64_t buf[bits::kMaxWords];
  std::uint64_t scratch[bits::kMaxWords];
  std::vector<std::uint32_t> wit(static_cast<std::size_t>(t));
  AdmitTable admits;

  for (std::size_t e = 0; e < pool.size(); ++e) {
    const std::uint64_t* sw = pool.words_of(e);
    if (bound != 0) build_admits(sw, n, bound, admits);
    const auto prefix = pool.witness_ids_of(e);
    std::copy(prefix.begin(), prefix.end(), wit.begin());
    for (std::uint32_t id = 0; id < catalog.size(); ++id) {
      const Level& level = catalog[id];
      ++ds.considered;
      if (bound != 0) {
        bool ok = true;
        for (const Comparator& c : level) {
          if (!admits.admit[c.lo][c.hi]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
      }
      ++ds.lookahead_passed;
      std::copy_n(sw, w, buf);
      bits::apply_level(buf, w, level.data(), level.size(), scratch);
      bool keep = true;
      if (remaining == 3) {
        keep = sortable_in_three_words(buf, n);
      } else if (remaining == 2 || remaining == 1) {
        keep = sortable_in_two_words(buf, n);
      } else if (remaining == 0) {
        keep = bits::popcount_all(buf, w) == static_cast<std::uint32_t>(n) + 1;
      }
      if (!keep) continue;
      ++ds.filter_passed;
      wit[static_cast<std::size_t>(t) - 1] = id;
      acc.insert(buf, wit);
      if (acc.size() >= cap_entries && acc.size() >= 2 * floor_size) {
        acc = merge_equivalent(acc);
        floor_size = acc.size();
      }
    }
  }
  ds.distinct = acc.size();
  return acc;
}

void check_config(const SearchConfig& cfg) {
  check_channel_count(cfg.n);
  if (cfg.d < 0) throw std::invalid_argument("negative target depth");
  if (cfg.worker_count < 1) {
    throw std::invalid_argument("worker count must be positive");
  }
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return text;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Parsed meta.txt.  The trailing "end" line guards against truncation of
// the meta file itself; pool.txt is guarded by the recorded hash.
struct MetaFile {
  CheckpointInfo info;
  std::uint64_t pool_hash = 0;
  std::vector<DepthStats> rows;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void meta_error(const std::filesystem::path& path,
                             const std::string& what) {
  throw std::runtime_error("checkpoint " + path.string() + ": " + what);
}

MetaFile parse_meta(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  std::size_t at = 0;
  const auto next = [&](const char* field) -> std::string_view {
    if (at >= lines.size()) meta_error(path, std::string("missing ") + field);
    return lines[at++];
  };
  const auto keyed = [&](const char* key) -> std::string_view {
    const std::string_view line = next(key);
    const std::string_view prefix(key);
    if (line.size() <= prefix.size() || line.substr(0, prefix.size()) != prefix ||
        line[prefix.size()] != ' ') {
      meta_error(path, std::string("malformed ") + key + " line");
    }
    return line.substr(prefix.size() + 1);
  };
  const auto to_int = [&](std::string_view s, const char* field) -> long long {
    long long value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      meta_error(path, std::string("malformed ") + field);
    }
    return value;
  };

  if (next("version") != "sortnet-checkpoint 1") {
    meta_error(path, "unsupported format version");
  }
  MetaFile meta;
  meta.info.n = static_cast<int>(to_int(keyed("n"), "n"));
  meta.info.depth = static_cast<int>(to_int(keyed("depth"), "depth"));
  meta.info.target = static_cast<int>(to_int(keyed("target"), "target"));
  meta.info.count =
      static_cast<std::uint64_t>(to_int(keyed("count"), "count"));
  {
    const std::string_view hex = keyed("pool-hash");
    std::uint64_t value = 0;
    const auto res =
        std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
    if (res.ec != std::errc{} || res.ptr != hex.data() + hex.size()) {
      meta_error(path, "malformed pool-hash");
    }
    meta.pool_hash = value;
  }
  while (at < lines.size() && lines[at].substr(0, 5) == "stat ") {
    const std::string_view row = lines[at++].substr(5);
    DepthStats ds;
    long long fields[6] = {};
    const char* p = row.data();
    const char* stop = row.data() + row.size();
    for (long long& f : fields) {
      const auto res = std::from_chars(p, stop, f);
      if (res.ec != std::errc{} || res.ptr == stop) {
        meta_error(path, "malformed stat row");
      }
      p = res.ptr + 1;  // past the separating space
    }
    double seconds = 0.0;
    const auto res = std::from_chars(p, stop, seconds);
    if (res.ec != std::errc{} || res.ptr != stop) {
      meta_error(path, "malformed stat row");
    }
    ds.depth = static_cast<int>(fields[0]);
    ds.considered = static_cast<std::uint64_t>(fields[1]);
    ds.lookahead_passed = static_cast<std::uint64_t>(fields[2]);
    ds.filter_passed = static_cast<std::uint64_t>(fields[3]);
    ds.distinct = static_cast<std::uint64_t>(fields[4]);
    ds.minimized = static_cast<std::uint64_t>(fields[5]);
    ds.seconds = seconds;
    meta.rows.push_back(ds);
  }
  if (next("end") != "end") meta_error(path, "truncated meta file");
  if (at != lines.size()) meta_error(path, "trailing content");
  return meta;
}

SearchStats stats_from_rows(std::vector<DepthStats> rows) {
  SearchStats stats;
  stats.depths = std::move(rows);
  for (const DepthStats& row : stats.depths) {
    stats.total_seconds += row.seconds;
  }
  return stats;
}

}  // namespace

DepthStats SearchStats::totals() const {
  DepthStats sum;
  for (const DepthStats& row : depths) {
    sum.considered += row.considered;
    sum.lookahead_passed += row.lookahead_passed;
    sum.filter_passed += row.filter_passed;
    sum.distinct += row.distinct;
    sum.minimized += row.minimized;
    sum.seconds += row.seconds;
  }
  return sum;
}

std::vector<Level> get_all_levels(const OutputSet& s, int t, int d,
                                  const std::vector<Level>& all_levels) {
  if (t < 1 || t > d) throw std::invalid_argument("depth outside the target");
  switch (d - t) {
    case 1:
      return second_last_levels(s, all_levels);
    case 2:
      return third_last_levels(s, all_levels);
    case 3:
      return fourth_last_levels(s, all_levels);
    default:
      return all_levels;
  }
}

CandidatePool generate_next_depth(const CandidatePool& pool, int t, int d,
                                  DepthStats* stats) {
  DepthStats local;
  DepthStats& ds = stats != nullptr ? *stats : local;
  ds = DepthStats{};
  ds.depth = t;
  // No batch cap: the caller observes the full deduplicated pool.
  CandidatePool out = generate_core(
      pool, t, d, ds, std::numeric_limits<std::size_t>::max());
  ds.minimized = out.size();
  return out;
}

SearchOutcome exists_sorting_network(const SearchConfig& cfg,
                                     const ProgressFn& progress) {
  check_config(cfg);
  const int d = cfg.d;
  const int minimize_through =
      cfg.minimize_through_depth < 0 ? d : cfg.minimize_through_depth;
  const auto catalog = CandidatePool::shared_catalog(cfg.n);

  CandidatePool current(cfg.n, 0, catalog);
  {
    const OutputSet base = OutputSet::all_inputs(cfg.n);
    current.insert(base.words().data(), {});
  }
  SearchStats stats;
  int start = 1;
  if (!cfg.checkpoint_directory.empty()) {
    if (const auto info = checkpoint_peek(cfg.checkpoint_directory)) {
      if (info->n != cfg.n) {
        throw std::runtime_error(
            "checkpoint is for n=" + std::to_string(info->n) +
            ", search wants n=" + std::to_string(cfg.n));
      }
      if (info->target != d) {
        throw std::runtime_error(
            "checkpoint targets depth " + std::to_string(info->target) +
            ", search wants depth " + std::to_string(d));
      }
      if (info->depth >= d) {
        throw std::runtime_error("checkpoint depth " +
                                 std::to_string(info->depth) +
                                 " is not below its own target");
      }
      CheckpointData loaded =
          checkpoint_load(cfg.checkpoint_directory, cfg.n, info->depth);
      current = std::move(loaded.pool);
      stats = std::move(loaded.stats);
      start = info->depth + 1;
      // An interrupted run that had already emptied its pool is final.
      if (current.size() == 0) start = d + 1;
    }
  }

  for (int t = start; t <= d; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    DepthStats ds;
    ds.depth = t;
    CandidatePool next = generate_core(current, t, d, ds, kBatchBytes);
    if (t <= minimize_through) {
      current = minimize(next);
    } else {
      current = std::move(next);
    }
    ds.minimized = current.size();
    ds.seconds = elapsed_seconds(t0);
    stats.depths.push_back(ds);
    if (progress) progress(ds);
    if (t < d && !cfg.checkpoint_directory.empty()) {
      checkpoint_save(current, stats, d, cfg.checkpoint_directory);
    }
    if (current.size() == 0) break;
  }

  stats.total_seconds = 0.0;
  for (const DepthStats& row : stats.depths) {
    stats.total_seconds += row.seconds;
  }

  SearchOutcome out;
  out.exists = current.depth() == d && current.size() == 1 &&
               current.cardinality_of(0) == static_cast<std::uint32_t>(cfg.n) + 1;
  if (out.exists && cfg.emit_witness) {
    Network witness = current.witness_network(0);
    if (!is_sorting_network(witness) || witness.depth() != d) {
      throw std::logic_error("search produced an invalid witness");
    }
    out.witness = std::move(witness);
  }
  out.stats = std::move(stats);
  return out;
}

OptimalOutcome optimal_depth(const SearchConfig& cfg, int d_max,
                             const ProgressFn& progress) {
  check_config(cfg);
  if (d_max < 1) throw std::invalid_argument("d_max must be at least 1");
  OptimalOutcome out;
  for (int d = 1; d <= d_max; ++d) {
    SearchConfig attempt = cfg;
    attempt.d = d;
    if (!cfg.checkpoint_directory.empty()) {
      attempt.checkpoint_directory =
          cfg.checkpoint_directory + "/depth-" + std::to_string(d);
    }
    SearchOutcome res = exists_sorting_network(attempt, progress);
    out.attempts.push_back(std::move(res.stats));
    if (res.exists) {
      out.depth = d;
      out.witness = std::move(res.witness);
      break;
    }
  }
  return out;
}

void checkpoint_save(const CandidatePool& pool, const SearchStats& stats,
                     int target, const std::string& dir) {
  namespace fs = std::filesystem;
  if (target <= pool.depth()) {
    throw std::invalid_argument("checkpoint target must exceed the depth");
  }
  fs::create_directories(dir);

  std::string body;
  body.reserve(pool.size() * 64);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    body += format_network(pool.witness_network(i));
    body += pool.output_set(i).serialize();
  }

  std::string meta = "sortnet-checkpoint 1\n";
  meta += "n " + std::to_string(pool.n()) + "\n";
  meta += "depth " + std::to_string(pool.depth()) + "\n";
  meta += "target " + std::to_string(target) + "\n";
  meta += "count " + std::to_string(pool.size()) + "\n";
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(body)));
    meta += std::string("pool-hash ") + buf + "\n";
  }
  for (const DepthStats& row : stats.depths) {
    char buf[224];
    std::snprintf(buf, sizeof buf, "stat %d %llu %llu %llu %llu %llu %.6f\n",
                  row.depth,
                  static_cast<unsigned long long>(row.considered),
                  static_cast<unsigned long long>(row.lookahead_passed),
                  static_cast<unsigned long long>(row.filter_passed),
                  static_cast<unsigned long long>(row.distinct),
                  static_cast<unsigned long long>(row.minimized),
                  row.seconds);
    meta += buf;
  }
  meta += "end\n";

  // pool.txt first: meta names its hash, so a crash in between leaves a
  // mismatch the loader rejects instead of a silently stale pool.
  write_file_atomic(fs::path(dir) / "pool.txt", body);
  write_file_atomic(fs::path(dir) / "meta.txt", meta);
}

std::optional<CheckpointInfo> checkpoint_peek(const std::string& dir) {
  const std::filesystem::path meta_path =
      std::filesystem::path(dir) / "meta.txt";
  if (!std::filesystem::exists(meta_path)) return std::nullopt;
  return parse_meta(meta_path).info;
}

CheckpointData checkpoint_load(const std::string& dir, int expected_n,
                               int expected_depth) {
  namespace fs = std::filesystem;
  const fs::path meta_path = fs::path(dir) / "meta.txt";
  const fs::path pool_path = fs::path(dir) / "pool.txt";
  const MetaFile meta = parse_meta(meta_path);
  if (meta.info.n != expected_n) {
    meta_error(meta_path, "n=" + std::to_string(meta.info.n) +
                              " does not match expected n=" +
                              std::to_string(expected_n));
  }
  if (meta.info.depth != expected_depth) {
    meta_error(meta_path, "depth " + std::to_string(meta.info.depth) +
                              " does not match expected depth " +
                              std::to_string(expected_depth));
  }

  const std::string body = read_file(pool_path);
  if (fnv1a(body) != meta.pool_hash) {
    meta_error(pool_path, "content hash mismatch");
  }

  CandidatePool pool(meta.info.n, meta.info.depth,
                     CandidatePool::shared_catalog(meta.info.n));
  pool.reserve(meta.info.count);
  const auto lines = split_lines(body);
  std::size_t at = 0;
  const auto take = [&](std::size_t count) -> std::string {
    if (at + count > lines.size()) {
      meta_error(pool_path, "truncated entry");
    }
    std::string text;
    for (std::size_t i = 0; i < count; ++i) {
      text.append(lines[at + i]);
      text.push_back('\n');
    }
    at += count;
    return text;
  };
  const std::size_t net_lines =
      static_cast<std::size_t>(meta.info.depth) + 1;
  for (std::uint64_t e = 0; e < meta.info.count; ++e) {
    const Network witness = parse_network(take(net_lines));
    if (at >= lines.size()) meta_error(pool_path, "truncated entry");
    const std::string_view header = lines[at];
    const std::size_t mark = header.find("count=");
    if (mark == std::string_view::npos) {
      meta_error(pool_path, "malformed set header");
    }
    std::uint32_t card = 0;
    const std::string_view num = header.substr(mark + 6);
    const auto res =
        std::from_chars(num.data(), num.data() + num.size(), card);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
      meta_error(pool_path, "malformed set header");
    }
    const OutputSet set = OutputSet::deserialize(take(card + 1));
    if (OutputSet::of_network(witness) != set) {
      meta_error(pool_path, "witness does not reproduce its set");
    }
    if (!pool.insert(set, witness)) {
      meta_error(pool_path, "duplicate entry");
    }
  }
  if (at != lines.size()) meta_error(pool_path, "trailing content");

  CheckpointData data{std::move(pool), stats_from_rows(meta.rows),
                      meta.info.target};
  return data;
}

}  // namespace sortnet
