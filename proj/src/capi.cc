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

#include "sortnet/sortnet.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "netcore.hh"
#include "outset.hh"
#include "search.hh"

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

sn_status fail(sn_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Every entry point funnels its C++ exceptions through here.
sn_status fail_current() {
  try {
    throw;
  } catch (const std::bad_alloc&) {
    return fail(SN_ERR_NOMEM, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SN_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SN_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(SN_ERR_STATE, e.what());
  } catch (const std::exception& e) {
    return fail(SN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SN_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sn_depth_row to_row(const sortnet::DepthStats& ds) {
  sn_depth_row row;
  row.depth = ds.depth;
  row.considered = ds.considered;
  row.lookahead_passed = ds.lookahead_passed;
  row.filter_passed = ds.filter_passed;
  row.distinct_count = ds.distinct;
  row.minimized = ds.minimized;
  row.seconds = ds.seconds;
  return row;
}

}  // namespace

struct sn_search {
  enum class State { kConfigured, kDone, kDead };

  sortnet::SearchConfig config;
  sn_progress_fn progress = nullptr;
  void* progress_user = nullptr;
  State state = State::kConfigured;
  sortnet::SearchOutcome outcome;
};

namespace {

sn_status require_configured(const sn_search* search) {
  if (search == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null handle");
  if (search->state != sn_search::State::kConfigured) {
    return fail(SN_ERR_STATE, "search already ran");
  }
  return SN_OK;
}

sn_status require_done(const sn_search* search) {
  if (search == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null handle");
  if (search->state != sn_search::State::kDone) {
    return fail(SN_ERR_STATE, "search has no result yet");
  }
  return SN_OK;
}

}  // namespace

extern "C" {

const char* sn_version(void) { return "0.1.0"; }

const char* sn_last_error(void) { return g_last_error.c_str(); }

void sn_string_free(char* text) { std::free(text); }

sn_status sn_search_new(int n, int depth, sn_search** out) {
  clear_error();
  if (out == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  *out = nullptr;
  try {
    if (n < sortnet::kMinChannels || n > sortnet::kMaxChannels) {
      throw std::invalid_argument("n must be in [2, 16]");
    }
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
    auto search = std::make_unique<sn_search>();
    search->config.n = n;
    search->config.d = depth;
    *out = search.release();
    return SN_OK;
  } catch (...) {
    return fail_current();
  }
}

void sn_search_free(sn_search* search) { delete search; }

sn_status sn_search_set_workers(sn_search* search, int workers) {
  clear_error();
  if (const sn_status s = require_configured(search); s != SN_OK) return s;
  if (workers < 1) {
    return fail(SN_ERR_INVALID_ARGUMENT, "workers must be positive");
  }
  search->config.worker_count = workers;
  return SN_OK;
}

sn_status sn_search_set_checkpoint_dir(sn_search* search, const char* dir) {
  clear_error();
  if (const sn_status s = require_configured(search); s != SN_OK) return s;
  try {
    search->config.checkpoint_directory = dir == nullptr ? "" : dir;
    return SN_OK;
  } catch (...) {
    return fail_current();
  }
}

sn_status sn_search_set_emit_witness(sn_search* search, int emit) {
  clear_error();
  if (const sn_status s = require_configured(search); s != SN_OK) return s;
  search->config.emit_witness = emit != 0;
  return SN_OK;
}

sn_status sn_search_set_progress(sn_search* search, sn_progress_fn fn,
                                 void* user) {
  clear_error();
  if (const sn_status s = require_configured(search); s != SN_OK) return s;
  search->progress = fn;
  search->progress_user = user;
  return SN_OK;
}

sn_status sn_search_run(sn_search* search) {
  clear_error();
  if (const sn_status s = require_configured(search); s != SN_OK) return s;
  try {
    sortnet::ProgressFn progress;
    if (search->progress != nullptr) {
      const sn_progress_fn fn = search->progress;
      void* user = search->progress_user;
      progress = [fn, user](const sortnet::DepthStats& ds) {
        const sn_depth_row row = to_row(ds);
        fn(user, &row);
      };
    }
    search->state = sn_search::State::kDead;
    search->outcome = sortnet::exists_sorting_network(search->config, progress);
    search->state = sn_search::State::kDone;
    return SN_OK;
  } catch (...) {
    return fail_current();
  }
}

sn_status sn_search_exists(const sn_search* search, int* out) {
  clear_error();
  if (const sn_status s = require_done(search); s != SN_OK) return s;
  if (out == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  *out = search->outcome.exists ? 1 : 0;
  return SN_OK;
}

sn_status sn_search_witness(const sn_search* search, char** out) {
  clear_error();
  if (const sn_status s = require_done(search); s != SN_OK) return s;
  if (out == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  *out = nullptr;
  try {
    if (search->outcome.witness.has_value()) {
      *out = copy_string(sortnet::format_network(*search->outcome.witness));
    }
    return SN_OK;
  } catch (...) {
    return fail_current();
  }
}

sn_status sn_search_depth_count(const sn_search* search, int* out) {
  clear_error();
  if (const sn_status s = require_done(search); s != SN_OK) return s;
  if (out == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  *out = static_cast<int>(search->outcome.stats.depths.size());
  return SN_OK;
}

sn_status sn_search_depth_row(const sn_search* search, int index,
                              sn_depth_row* out) {
  clear_error();
  if (const sn_status s = require_done(search); s != SN_OK) return s;
  if (out == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  const auto& rows = search->outcome.stats.depths;
  if (index < 0 || static_cast<std::size_t>(index) >= rows.size()) {
    return fail(SN_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  *out = to_row(rows[static_cast<std::size_t>(index)]);
  return SN_OK;
}

sn_status sn_search_total_seconds(const sn_search* search, double* out) {
  clear_error();
  if (const sn_status s = require_done(search); s != SN_OK) return s;
  if (out == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  *out = search->outcome.stats.total_seconds;
  return SN_OK;
}

sn_status sn_verify_text(const char* text, int* sorts, int* n_out,
                         int* depth_out, int* comparator_count_out,
                         unsigned int* output_set_size_out) {
  clear_error();
  if (text == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null text");
  if (sorts == nullptr) return fail(SN_ERR_INVALID_ARGUMENT, "null output");
  try {
    sortnet::Network net;
    try {
      net = sortnet::parse_network(text);
    } catch (const std::exception& e) {
      return fail(SN_ERR_PARSE, e.what());
    }
    *sorts = sortnet::is_sorting_network(net) ? 1 : 0;
    if (n_out != nullptr) *n_out = net.n;
    if (depth_out != nullptr) *depth_out = net.depth();
    if (comparator_count_out != nullptr) {
      *comparator_count_out = net.comparator_count();
    }
    if (output_set_size_out != nullptr) {
      *output_set_size_out = sortnet::OutputSet::of_network(net).cardinality();
    }
    return SN_OK;
  } catch (...) {
    return fail_current();
  }
}

}  // extern "C"
