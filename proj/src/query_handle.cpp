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

#include "framesel/query_handle.hpp"

#include "framesel/error.hpp"

namespace framesel {

QueryHandle QueryHandle::open(const std::filesystem::path& cache_path, const Schedule& schedule,
                              const CacheConfig* expected) {
  return QueryHandle(load_cache_file(cache_path, expected), schedule);
}

QueryHandle::QueryHandle(PruneCache cache, const Schedule& schedule)
    : cache_(std::make_shared<const PruneCache>(std::move(cache))), schedule_(schedule) {
  schedule_.validate();
}

const PruneCache& QueryHandle::cache() const {
  if (!cache_) throw Error("cache handle is closed");
  return *cache_;
}

SampleRecord QueryHandle::sample(std::int64_t step, const std::string& trajectory_id, int t) const {
  return serve_sample(cache(), schedule_, step, trajectory_id, t);
}

int QueryHandle::remap(const std::string& trajectory_id, double ratio, int t) const {
  return serve_at_ratio(cache(), ratio, trajectory_id, t).remapped_t;
}

double QueryHandle::active_ratio(std::int64_t step) const {
  cache();
  return framesel::active_ratio(step, schedule_);
}

}  // namespace framesel
