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

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "framesel/prune_cache.hpp"
#include "framesel/schedule.hpp"

namespace framesel {

/// Read-only query surface over a loaded cache, the shape a dataloader
/// binding wraps. Queries may run concurrently; close() must not race with
/// in-flight queries. Every query after close() throws.
class QueryHandle {
 public:
  static QueryHandle open(const std::filesystem::path& cache_path, const Schedule& schedule,
                          const CacheConfig* expected = nullptr);
  QueryHandle(PruneCache cache, const Schedule& schedule);

  SampleRecord sample(std::int64_t step, const std::string& trajectory_id, int t) const;
  int remap(const std::string& trajectory_id, double ratio, int t) const;
  double active_ratio(std::int64_t step) const;

  const Schedule& schedule() const noexcept { return schedule_; }
  bool is_open() const noexcept { return cache_ != nullptr; }
  void close() noexcept { cache_.reset(); }

 private:
  const PruneCache& cache() const;

  std::shared_ptr<const PruneCache> cache_;
  Schedule schedule_;
};

}  // namespace framesel
