// Copyright 2026 The framesel Authors
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

/* C ABI over the query side of the library, for FFI loaders (ctypes, cffi).
 *
 * Functions returning int yield 0 on success and -1 on failure; the failure
 * message is available from framesel_last_error() on the same thread until
 * the next call. framesel_close() releases the cache but keeps the handle
 * valid so later queries fail cleanly; framesel_free() releases the handle.
 */
#ifndef FRAMESEL_QUERY_API_H_
#define FRAMESEL_QUERY_API_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct framesel_handle framesel_handle;

typedef struct framesel_record {
  int64_t step;
  double active_ratio;
  int32_t original_t;
  int32_t remapped_t;
} framesel_record;

const char* framesel_version(void);
const char* framesel_last_error(void);

/* Returns NULL on failure. */
framesel_handle* framesel_open(const char* cache_path, int64_t warmup_steps, double pruned_ratio,
                               int64_t pruned_per_full);

int framesel_sample(const framesel_handle* h, int64_t step, const char* trajectory_id, int32_t t,
                    framesel_record* out);
int framesel_remap(const framesel_handle* h, const char* trajectory_id, double ratio, int32_t t, int32_t* out);
int framesel_active_ratio(const framesel_handle* h, int64_t step, double* out);

void framesel_close(framesel_handle* h);
void framesel_free(framesel_handle* h);

#ifdef __cplusplus
}
#endif

#endif /* FRAMESEL_QUERY_API_H_ */
