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

#include <span>
#include <string>
#include <vector>

#include "framesel/importance.hpp"
#include "framesel/trajectory.hpp"

namespace framesel {

struct PruneConfig {
  int k_min = 8;                      // floor on the retained count
  bool preserve_transitions = true;   // first/last/gripper/top-decile keeps
  bool gap_fill = true;
  double gap_factor = 2.0;            // max gap = ceil(gap_factor / r)
  double top_decile = 0.10;           // fraction of largest action changes kept

  void validate() const;
  bool operator==(const PruneConfig&) const = default;
};

struct PrunedView {
  std::string trajectory_id;
  double target_ratio = 1.0;
  std::vector<int> retained;  // 1-based, strictly increasing
  double actual_ratio = 1.0;

  bool operator==(const PrunedView&) const = default;
};

/// Violations of the view invariants for a trajectory of length T.
std::vector<std::string> check_view(const PrunedView& view, std::size_t T);

/// Nearest-rank (1 - r) quantile: the ascending-sorted score at 1-based
/// position max(1, ceil((1 - r) * T)).
double quantile_threshold(std::span<const double> scores, double r);

/// K_r = max(K_min, floor(r * T)), capped at T.
std::size_t target_count(std::size_t T, double r, int k_min);

/// Largest allowed spacing between consecutive retained frames.
int max_gap(double r, double gap_factor);

/// Frames that pruning must never drop: 1, T, gripper transitions, and the
/// ceil(top_decile * T) frames t >= 2 with the largest action change d(t)
/// (ties toward earlier t). Empty when preservation is disabled.
std::vector<int> forced_keep_set(const Trajectory& traj, const FrameScores& scores, const PruneConfig& config);

/// Ratio-aware selection over combined importance. `forced` lists 1-based
/// frames (any order, duplicates allowed).
PrunedView prune(std::span<const double> scores, double r, std::span<const int> forced, const PruneConfig& config,
                 std::string trajectory_id = {});

}  // namespace framesel
