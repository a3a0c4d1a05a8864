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

#include <doctest.h>

#include "framesel/error.hpp"
#include "framesel/schedule.hpp"
#include "framesel/synthetic.hpp"
#include "oracles.hpp"

using namespace framesel;

namespace {

// Small hand-built cache: one trajectory of length 10 with views at 0.2 and 1.0.
PruneCache tiny_cache() {
  PruneCache c;
  c.config.ratios = {0.2, 1.0};
  CacheEntry e;
  e.scores.trajectory_id = "a";
  e.scores.combined.assign(10, 0.5);
  e.views.push_back(PrunedView{"a", 0.2, {1, 4, 8}, 0.3});
  PrunedView id{"a", 1.0, {}, 1.0};
  for (int t = 1; t <= 10; ++t) id.retained.push_back(t);
  e.views.push_back(id);
  c.entries.emplace("a", e);
  return c;
}

}  // namespace

TEST_CASE("active ratio") {
  Schedule s{2, 0.2, 5};
  std::vector<double> got;
  for (int step = 1; step <= 10; ++step) got.push_back(active_ratio(step, s));
  CHECK(got == std::vector<double>{1.0, 1.0, 0.2, 0.2, 0.2, 0.2, 0.2, 1.0, 0.2, 0.2});

  const Schedule def;
  got.clear();
  for (int step = 5001; step <= 5006; ++step) got.push_back(active_ratio(step, def));
  CHECK(got == std::vector<double>{0.2, 0.2, 0.2, 0.2, 0.2, 1.0});
  for (int step = 1; step <= 5000; ++step) CHECK(active_ratio(step, def) == 1.0);

  CHECK_THROWS_AS(active_ratio(0, def), DataError);
}

TEST_CASE("every full cycle has the configured pruned share") {
  for (std::int64_t warm : {0, 1, 7, 5000}) {
    for (std::int64_t cycle : {1, 2, 5, 9}) {
      const Schedule s{warm, 0.3, cycle};
      for (std::int64_t start = warm + 1; start < warm + 40; start += 13) {
        std::int64_t pruned = 0;
        const std::int64_t window = 6 * (cycle + 1);
        for (std::int64_t step = start; step < start + window; ++step) pruned += active_ratio(step, s) == 0.3;
        CHECK(pruned == 6 * cycle);
      }
    }
  }
}

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(Schedule{}.validate());
  CHECK_THROWS_AS((Schedule{-1, 0.2, 5}.validate()), ConfigError);
  CHECK_THROWS_AS((Schedule{0, 0.0, 5}.validate()), ConfigError);
  CHECK_THROWS_AS((Schedule{0, 0.2, 0}.validate()), ConfigError);
}

TEST_CASE("remap examples") {
  const PrunedView v{"a", 0.2, {1, 4, 8}, 0.3};
  CHECK(remap(v, 5, 10) == 8);
  CHECK(remap(v, 4, 10) == 4);
  CHECK(remap(v, 9, 10) == 8);
  CHECK(remap(v, 1, 10) == 1);
  CHECK_THROWS_AS(remap(v, 0, 10), DataError);
  CHECK_THROWS_AS(remap(v, 11, 10), DataError);
}

TEST_CASE("remap laws on random views") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(1, 120);
  for (int n = 0; n < 200; ++n) {
    const int T = len(rng);
    std::bernoulli_distribution keep(0.3);
    PrunedView v;
    for (int t = 1; t <= T; ++t)
      if (keep(rng)) v.retained.push_back(t);
    if (v.retained.empty()) v.retained.push_back(T);
    int prev = 0;
    for (int t = 1; t <= T; ++t) {
      const int r = remap(v, t, T);
      CHECK(r == oracle::remap_linear(v.retained, t));
      CHECK(r >= prev);
      CHECK(remap(v, r, T) == r);
      CHECK(std::binary_search(v.retained.begin(), v.retained.end(), r));
      prev = r;
    }
  }
}

TEST_CASE("identity view maps every frame to itself") {
  PrunedView v;
  for (int t = 1; t <= 33; ++t) v.retained.push_back(t);
  for (int t = 1; t <= 33; ++t) CHECK(remap(v, t, 33) == t);
}

TEST_CASE("serving samples") {
  const auto cache = tiny_cache();
  const Schedule s{5, 0.2, 5};
  for (int t = 1; t <= 10; ++t) CHECK(serve_sample(cache, s, 3, "a", t).remapped_t == t);

  const auto rec = serve_sample(cache, s, 6, "a", 5);
  CHECK(rec == SampleRecord{6, "a", 0.2, 5, 8});
  CHECK(serve_sample(cache, s, 11, "a", 5).remapped_t == 5);

  CHECK_THROWS_WITH_AS(serve_at_ratio(cache, 0.3, "a", 5), "ratio not precomputed: 0.3", DataError);
  CHECK_THROWS_WITH_AS(serve_sample(cache, s, 6, "b", 5), "unknown trajectory 'b'", DataError);
  CHECK_THROWS_AS(serve_sample(cache, s, 6, "a", 11), DataError);
}
