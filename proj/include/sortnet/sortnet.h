/* Copyright 2026 The sortnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sorting network depth search.
 *
 * All functions return sn_status; SN_OK is zero.  On any failure a
 * thread-local diagnostic is set and can be read with sn_last_error().
 * Handles are opaque and single-threaded: do not share one handle across
 * threads without external synchronization.
 */

#ifndef SORTNET_SORTNET_H_
#define SORTNET_SORTNET_H_

#if defined(__GNUC__)
#define SN_API __attribute__((visibility("default")))
#else
#define SN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sn_status {
  SN_OK = 0,
  SN_ERR_INVALID_ARGUMENT = 1, /* bad flag value or null pointer */
  SN_ERR_PARSE = 2,            /* malformed network text */
  SN_ERR_IO = 3,               /* file system failure */
  SN_ERR_STATE = 4,            /* wrong handle state or bad checkpoint */
  SN_ERR_NOMEM = 5,            /* allocation failure */
  SN_ERR_INTERNAL = 6          /* invariant breach; report a bug */
} sn_status;

/* Semantic library version, "major.minor.patch". */
SN_API const char* sn_version(void);

/* Diagnostic for the calling thread's most recent failure; empty after a
 * success.  The pointer stays valid until the thread's next library call. */
SN_API const char* sn_last_error(void);

/* Frees a string returned through a char** output. */
SN_API void sn_string_free(char* text);

/* One row of per-depth search statistics.  Counts only ever narrow:
 * considered >= lookahead_passed >= filter_passed >= distinct_count >=
 * minimized. */
typedef struct sn_depth_row {
  int depth;
  unsigned long long considered;
  unsigned long long lookahead_passed;
  unsigned long long filter_passed;
  unsigned long long distinct_count;
  unsigned long long minimized;
  double seconds;
} sn_depth_row;

/* Progress callback, invoked after each finished depth. */
typedef void (*sn_progress_fn)(void* user, const sn_depth_row* row);

/* A single existence query: does a sorting network on n channels with
 * exactly depth levels exist?  Configure, run once, then read results. */
typedef struct sn_search sn_search;

/* n in [2, 16], depth >= 0. */
SN_API sn_status sn_search_new(int n, int depth, sn_search** out);
SN_API void sn_search_free(sn_search* search);

/* Configuration; only valid before sn_search_run. */
SN_API sn_status sn_search_set_workers(sn_search* search, int workers);
SN_API sn_status sn_search_set_checkpoint_dir(sn_search* search,
                                              const char* dir);
SN_API sn_status sn_search_set_emit_witness(sn_search* search, int emit);
SN_API sn_status sn_search_set_progress(sn_search* search, sn_progress_fn fn,
                                        void* user);

/* Runs the search to completion.  A handle runs at most once; a second
 * call fails with SN_ERR_STATE.  A failed run leaves the handle dead. */
SN_API sn_status sn_search_run(sn_search* search);

/* Result accessors; SN_ERR_STATE before a successful run. */
SN_API sn_status sn_search_exists(const sn_search* search, int* out);

/* Witness network text (netcore format), or NULL when there is none or
 * witness emission was disabled.  Caller frees with sn_string_free. */
SN_API sn_status sn_search_witness(const sn_search* search, char** out);

SN_API sn_status sn_search_depth_count(const sn_search* search, int* out);
SN_API sn_status sn_search_depth_row(const sn_search* search, int index,
                                     sn_depth_row* out);
SN_API sn_status sn_search_total_seconds(const sn_search* search,
                                         double* out);

/* Parses network text and checks it against all 2^n binary inputs.
 * sorts receives 1 or 0; the remaining outputs are optional (pass NULL to
 * skip): channel count, depth, comparator count, and the size of the
 * network's output set (n + 1 exactly when it sorts). */
SN_API sn_status sn_verify_text(const char* text, int* sorts, int* n_out,
                                int* depth_out, int* comparator_count_out,
                                unsigned int* output_set_size_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SORTNET_SORTNET_H_ */
