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

#include "framesel/query_api.h"

#include <string>

#include "framesel/error.hpp"
#include "framesel/query_handle.hpp"

struct framesel_handle {
  framesel::QueryHandle query;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return 0;
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return -1;
}

const framesel::QueryHandle& query_of(const framesel_handle* h) {
  if (h == nullptr) throw framesel::Error("null cache handle");
  return h->query;
}

}  // namespace

extern "C" {

const char* framesel_version(void) { return FRAMESEL_VERSION; }

const char* framesel_last_error(void) { return g_last_error.c_str(); }

framesel_handle* framesel_open(const char* cache_path, int64_t warmup_steps, double pruned_ratio,
                               int64_t pruned_per_full) {
  framesel_handle* out = nullptr;
  guarded([&] {
    if (cache_path == nullptr) throw framesel::Error("null cache path");
    framesel::Schedule schedule{warmup_steps, pruned_ratio, pruned_per_full};
    out = new framesel_handle{framesel::QueryHandle::open(cache_path, schedule)};
  });
  return out;
}

int framesel_sample(const framesel_handle* h, int64_t step, const char* trajectory_id, int32_t t,
                    framesel_record* out) {
  return guarded([&] {
    if (trajectory_id == nullptr || out == nullptr) throw framesel::Error("null argument");
    const auto rec = query_of(h).sample(step, trajectory_id, t);
    *out = framesel_record{rec.step, rec.active_ratio, rec.original_t, rec.remapped_t};
  });
}

int framesel_remap(const framesel_handle* h, const char* trajectory_id, double ratio, int32_t t, int32_t* out) {
  return guarded([&] {
    if (trajectory_id == nullptr || out == nullptr) throw framesel::Error("null argument");
    *out = query_of(h).remap(trajectory_id, ratio, t);
  });
}

int framesel_active_ratio(const framesel_handle* h, int64_t step, double* out) {
  return guarded([&] {
    if (out == nullptr) throw framesel::Error("null argument");
    *out = query_of(h).active_ratio(step);
  });
}

void framesel_close(framesel_handle* h) {
  if (h != nullptr) h->query.close();
}

void framesel_free(framesel_handle* h) { delete h; }

}  // extern "C"
