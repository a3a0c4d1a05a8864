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

#include <cstdint>
#include <string>

#include "framesel/prune_cache.hpp"
#include "framesel/pruner.hpp"

namespace framesel {

/// Which view a training step reads: the identity view during warmup, then
/// `pruned_per_full` pruned steps followed by one full-frame anchor step,
/// repeating. The cycle starts at the first post-warmup step.
struct Schedule {
  std::int64_t warmup_steps = 5000;
  double pruned_ratio = 0.2;
  std::int64_t pruned_per_full = 5;

  void validate() const;
  bool operator==(const Schedule&) const = default;
};

struct SampleRecord {
  std::int64_t step = 0;
  std::string trajectory_id;
  double active_ratio = 1.0;
  int original_t = 0;
  int remapped_t = 0;

  bool operator==(const SampleRecord&) const = default;
};

/// Steps are 1-based.
double active_ratio(std::int64_t step, const Schedule& schedule);

/// First retained frame not earlier than t, or the last retained frame when
/// t lies past it. Binary search over the sorted retained list.
int remap(const PrunedView& view, int t, std::size_t trajectory_length);

/// Resolves the step's ratio, looks up the cached view and remaps t.
SampleRecord serve_sample(const PruneCache& cache, const Schedule& schedule, std::int64_t step,
                          const std::string& trajectory_id, int t);

/// Same record for an explicitly chosen ratio (no schedule involved).
SampleRecord serve_at_ratio(const PruneCache& cache, double ratio, const std::string& trajectory_id, int t,
                            std::int64_t step = 0);

}  // namespace framesel
