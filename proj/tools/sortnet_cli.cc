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

// sortnet: does an n-channel sorting network of a given depth exist?
//
// Exit codes everywhere: 0 yes (exists / sorts / found), 1 no, 2 error.
// Standard output carries machine-readable results only; progress and
// diagnostics go to standard error.

#include <sys/resource.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sortnet/sortnet.h"

namespace {

using nlohmann::json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

[[noreturn]] void die(const std::string& message) {
  std::cerr << "sortnet: error: " << message << "\n";
  std::exit(kExitError);
}

[[noreturn]] void die_api(const std::string& what) {
  die(what + ": " + sn_last_error());
}

double cpu_seconds_now() {
  struct rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0.0;
  const auto seconds = [](const timeval& tv) {
    return static_cast<double>(tv.tv_sec) +
           static_cast<double>(tv.tv_usec) / 1e6;
  };
  return seconds(usage.ru_utime) + seconds(usage.ru_stime);
}

struct SearchHandle {
  sn_search* ptr = nullptr;

  SearchHandle(int n, int depth) {
    if (sn_search_new(n, depth, &ptr) != SN_OK) die_api("configuring search");
  }
  ~SearchHandle() { sn_search_free(ptr); }
  SearchHandle(const SearchHandle&) = delete;
  SearchHandle& operator=(const SearchHandle&) = delete;
};

struct RunResult {
  bool exists = false;
  std::vector<sn_depth_row> rows;
  double wall_seconds = 0.0;
  std::string witness;  // empty when absent
};

void print_progress(const sn_depth_row& row) {
  std::fprintf(stderr,
               "depth %d: considered=%llu lookahead=%llu filtered=%llu "
               "distinct=%llu minimized=%llu (%.2fs)\n",
               row.depth, row.considered, row.lookahead_passed,
               row.filter_passed, row.distinct_count, row.minimized,
               row.seconds);
}

RunResult run_search(int n, int depth, int workers,
                     const std::string& checkpoint, bool quiet) {
  SearchHandle search(n, depth);
  if (sn_search_set_workers(search.ptr, workers) != SN_OK) {
    die_api("configuring workers");
  }
  if (!checkpoint.empty() &&
      sn_search_set_checkpoint_dir(search.ptr, checkpoint.c_str()) != SN_OK) {
    die_api("configuring checkpoints");
  }
  if (!quiet) {
    const auto trampoline = [](void*, const sn_depth_row* row) {
      print_progress(*row);
    };
    if (sn_search_set_progress(search.ptr, trampoline, nullptr) != SN_OK) {
      die_api("configuring progress");
    }
  }
  if (sn_search_run(search.ptr) != SN_OK) die_api("running search");

  RunResult result;
  int exists = 0;
  if (sn_search_exists(search.ptr, &exists) != SN_OK) die_api("reading result");
  result.exists = exists != 0;
  int count = 0;
  if (sn_search_depth_count(search.ptr, &count) != SN_OK) {
    die_api("reading stats");
  }
  result.rows.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (sn_search_depth_row(search.ptr, i,
                            &result.rows[static_cast<std::size_t>(i)]) !=
        SN_OK) {
      die_api("reading stats");
    }
  }
  if (sn_search_total_seconds(search.ptr, &result.wall_seconds) != SN_OK) {
    die_api("reading stats");
  }
  char* witness = nullptr;
  if (sn_search_witness(search.ptr, &witness) != SN_OK) die_api("reading witness");
  if (witness != nullptr) {
    result.witness = witness;
    sn_string_free(witness);
  }
  return result;
}

json row_to_json(const sn_depth_row& row) {
  return json{{"depth", row.depth},
              {"considered", row.considered},
              {"lookahead_passed", row.lookahead_passed},
              {"filter_passed", row.filter_passed},
              {"distinct", row.distinct_count},
              {"minimized", row.minimized},
              {"seconds", row.seconds}};
}

json rows_to_json(const std::vector<sn_depth_row>& rows) {
  json arr = json::array();
  for (const sn_depth_row& row : rows) arr.push_back(row_to_json(row));
  return arr;
}

json totals_to_json(const std::vector<sn_depth_row>& rows) {
  unsigned long long considered = 0;
  unsigned long long lookahead = 0;
  unsigned long long filtered = 0;
  unsigned long long distinct = 0;
  unsigned long long minimized = 0;
  for (const sn_depth_row& row : rows) {
    considered += row.considered;
    lookahead += row.lookahead_passed;
    filtered += row.filter_passed;
    distinct += row.distinct_count;
    minimized += row.minimized;
  }
  return json{{"considered", considered},
              {"lookahead_passed", lookahead},
              {"filter_passed", filtered},
              {"distinct", distinct},
              {"minimized", minimized}};
}

// The published-table view of one run: minimal third-level classes, their
// extensions, look-ahead and completability survivors at the fourth- and
// third-last levels.  Fields are null when the run never reached the row.
json figure_to_json(const std::vector<sn_depth_row>& rows,
                    double cpu_seconds) {
  const auto row_at = [&](int depth) -> const sn_depth_row* {
    for (const sn_depth_row& row : rows) {
      if (row.depth == depth) return &row;
    }
    return nullptr;
  };
  const sn_depth_row* r3 = row_at(3);
  const sn_depth_row* r4 = row_at(4);
  const sn_depth_row* r5 = row_at(5);
  json figure;
  figure["r3_count"] = r3 != nullptr ? json(r3->minimized) : json(nullptr);
  figure["extensions"] = r4 != nullptr ? json(r4->considered) : json(nullptr);
  figure["lookahead_survivors"] =
      r4 != nullptr ? json(r4->lookahead_passed) : json(nullptr);
  figure["sortable3"] = r4 != nullptr ? json(r4->filter_passed) : json(nullptr);
  figure["second_lookahead_survivors"] =
      r5 != nullptr ? json(r5->lookahead_passed) : json(nullptr);
  figure["sortable2"] = r5 != nullptr ? json(r5->filter_passed) : json(nullptr);
  figure["runtime_seconds"] = cpu_seconds;
  return figure;
}

void write_text_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) die("cannot create " + path);
  out << content;
  out.flush();
  if (!out) die("cannot write " + path);
}

// Never writes an unverified network: the text is re-parsed and re-checked
// through the public verifier before it touches the file system.
void write_witness(const std::string& path, const std::string& text,
                   int expect_n, int expect_depth) {
  if (text.empty()) die("no witness available to write");
  int sorts = 0;
  int n = 0;
  int depth = 0;
  if (sn_verify_text(text.c_str(), &sorts, &n, &depth, nullptr, nullptr) !=
      SN_OK) {
    die_api("verifying witness");
  }
  if (sorts != 1 || n != expect_n || depth != expect_depth) {
    die("witness failed verification; refusing to write it");
  }
  write_text_file(path, text);
}

int default_workers() {
  return 1;
}

struct CommonFlags {
  int workers = default_workers();
  std::string checkpoint;
  std::string stats_out;
  std::string witness_out;
  bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--workers", flags->workers,
                  "Worker count (results never depend on it)")
      ->envname("SORTNET_WORKERS")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--checkpoint", flags->checkpoint,
                  "Directory for saving and resuming search state");
  cmd->add_option("--stats-out", flags->stats_out,
                  "Write a JSON statistics report to this file ('-' for "
                  "standard output)");
  cmd->add_option("--witness-out", flags->witness_out,
                  "Write the verified witness network to this file");
  cmd->add_flag("--quiet", flags->quiet,
                "Suppress per-depth progress on standard error");
}

int cmd_exists(int n, int depth, const CommonFlags& flags) {
  const RunResult result =
      run_search(n, depth, flags.workers, flags.checkpoint, flags.quiet);
  const double cpu = cpu_seconds_now();

  if (!flags.stats_out.empty()) {
    json report{{"schema", "sortnet-stats-1"},
                {"tool_version", sn_version()},
                {"command", "exists"},
                {"n", n},
                {"depth", depth},
                {"workers", flags.workers},
                {"exists", result.exists},
                {"rows", rows_to_json(result.rows)},
                {"totals", totals_to_json(result.rows)},
                {"wall_seconds", result.wall_seconds},
                {"cpu_seconds", cpu},
                {"figure", figure_to_json(result.rows, cpu)}};
    write_text_file(flags.stats_out, report.dump(2) + "\n");
  }
  if (!flags.witness_out.empty()) {
    if (result.exists) {
      write_witness(flags.witness_out, result.witness, n, depth);
    } else {
      std::cerr << "sortnet: no witness: no depth-" << depth
                << " sorting network on " << n << " channels\n";
    }
  }
  std::cout << (result.exists ? "yes" : "no") << "\n";
  return result.exists ? kExitYes : kExitNo;
}

int cmd_optimal(int n, int max_depth, const CommonFlags& flags) {
  std::optional<int> found;
  std::vector<RunResult> attempts;
  for (int d = 1; d <= max_depth; ++d) {
    std::string checkpoint = flags.checkpoint;
    if (!checkpoint.empty()) checkpoint += "/depth-" + std::to_string(d);
    if (!flags.quiet) std::fprintf(stderr, "trying depth %d\n", d);
    attempts.push_back(
        run_search(n, d, flags.workers, checkpoint, flags.quiet));
    if (attempts.back().exists) {
      found = d;
      break;
    }
  }
  const double cpu = cpu_seconds_now();

  if (!flags.stats_out.empty()) {
    json tries = json::array();
    double wall = 0.0;
    for (std::size_t i = 0; i < attempts.size(); ++i) {
      const RunResult& attempt = attempts[i];
      wall += attempt.wall_seconds;
      tries.push_back(json{{"depth", static_cast<int>(i) + 1},
                           {"exists", attempt.exists},
                           {"rows", rows_to_json(attempt.rows)},
                           {"totals", totals_to_json(attempt.rows)},
                           {"wall_seconds", attempt.wall_seconds}});
    }
    json report{{"schema", "sortnet-stats-1"},
                {"tool_version", sn_version()},
                {"command", "optimal"},
                {"n", n},
                {"max_depth", max_depth},
                {"workers", flags.workers},
                {"optimal_depth", found ? json(*found) : json(nullptr)},
                {"attempts", tries},
                {"wall_seconds", wall},
                {"cpu_seconds", cpu}};
    write_text_file(flags.stats_out, report.dump(2) + "\n");
  }
  if (found) {
    if (!flags.witness_out.empty()) {
      write_witness(flags.witness_out, attempts.back().witness, n, *found);
    }
    std::cout << *found << "\n";
    return kExitYes;
  }
  if (!flags.witness_out.empty()) {
    std::cerr << "sortnet: no witness: no sorting network on " << n
              << " channels within depth " << max_depth << "\n";
  }
  std::cerr << "sortnet: no sorting network on " << n
            << " channels within depth " << max_depth << "\n";
  return kExitNo;
}

int cmd_verify(const std::string& path) {
  std::string text;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) die("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in),
                std::istreambuf_iterator<char>());
    if (in.bad()) die("cannot read " + path);
  }
  int sorts = 0;
  int n = 0;
  int depth = 0;
  int comparators = 0;
  unsigned int outputs = 0;
  const sn_status status =
      sn_verify_text(text.c_str(), &sorts, &n, &depth, &comparators, &outputs);
  if (status == SN_ERR_PARSE) die(path + ": " + sn_last_error());
  if (status != SN_OK) die_api("verifying " + path);
  std::cout << "n=" << n << " depth=" << depth << " comparators=" << comparators
            << " outputs=" << outputs << " sorts="
            << (sorts != 0 ? "yes" : "no") << "\n";
  return sorts != 0 ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sorting network depth search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sn_version()));

  int n = 0;
  int depth = 0;
  int max_depth = 16;
  std::string network_path;
  CommonFlags exists_flags;
  CommonFlags optimal_flags;

  CLI::App* exists = app.add_subcommand(
      "exists", "Decide whether a depth-d sorting network exists");
  exists->add_option("--n", n, "Channel count (2..16)")->required();
  exists->add_option("--depth", depth, "Target depth")->required();
  add_common_flags(exists, &exists_flags);

  CLI::App* optimal = app.add_subcommand(
      "optimal", "Find the minimal sorting network depth");
  optimal->add_option("--n", n, "Channel count (2..16)")->required();
  optimal->add_option("--max-depth", max_depth,
                      "Give up beyond this depth")
      ->check(CLI::PositiveNumber);
  add_common_flags(optimal, &optimal_flags);

  CLI::App* verify = app.add_subcommand(
      "verify", "Check a network file against all binary inputs");
  verify->add_option("network", network_path, "Network text file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (exists->parsed()) return cmd_exists(n, depth, exists_flags);
    if (optimal->parsed()) return cmd_optimal(n, max_depth, optimal_flags);
    return cmd_verify(network_path);
  } catch (const std::exception& e) {
    die(e.what());
  }
}
