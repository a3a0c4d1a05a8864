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

#include "framesel/schedule.hpp"

#include <algorithm>

#include "framesel/error.hpp"
#include "framesel/numeric.hpp"

namespace framesel {

void Schedule::validate() const {
  if (warmup_steps < 0) throw ConfigError("schedule: warmup must be nonnegative");
  if (!(pruned_ratio > 0.0 && pruned_ratio <= 1.0)) throw ConfigError("schedule: ratio must be in (0, 1]");
  if (pruned_per_full < 1) throw ConfigError("schedule: cycle must be a positive integer");
}

double active_ratio(std::int64_t step, const Schedule& schedule) {
  if (step < 1) throw DataError("step must be >= 1, got " + std::to_string(step));
  if (step <= schedule.warmup_steps) return 1.0;
  const std::int64_t phase = (step - schedule.warmup_steps - 1) % (schedule.pruned_per_full + 1);
  return phase < schedule.pruned_per_full ? schedule.pruned_ratio : 1.0;
}

int remap(const PrunedView& view, int t, std::size_t trajectory_length) {
  if (t < 1 || static_cast<std::size_t>(t) > trajectory_length) {
    throw DataError("timestep " + std::to_string(t) + " outside [1, " + std::to_string(trajectory_length) + "]");
  }
  if (view.retained.empty()) throw DataError("view of '" + view.trajectory_id + "' retains no frames");
  auto it = std::lower_bound(view.retained.begin(), view.retained.end(), t);
  return it == view.retained.end() ? view.retained.back() : *it;
}

SampleRecord serve_at_ratio(const PruneCache& cache, double ratio, const std::string& trajectory_id, int t,
                            std::int64_t step) {
  const CacheEntry& e = cache.entry(trajectory_id);
  const PrunedView* v = e.find_view(ratio);
  if (v == nullptr) throw DataError("ratio not precomputed: " + format_double(ratio));
  SampleRecord rec;
  rec.step = step;
  rec.trajectory_id = trajectory_id;
  rec.active_ratio = ratio;
  rec.original_t = t;
  rec.remapped_t = remap(*v, t, e.scores.length());
  return rec;
}

SampleRecord serve_sample(const PruneCache& cache, const Schedule& schedule, std::int64_t step,
                          const std::string& trajectory_id, int t) {
  return serve_at_ratio(cache, active_ratio(step, schedule), trajectory_id, t, step);
}

}  // namespace framesel
