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
#include <optional>

#include "framesel/trajectory.hpp"

namespace framesel {

/// Deterministic demonstration corpus with planted structure: two
/// constant-velocity arm segments, a single gripper step at the transition
/// frame, a matching jump in the visual features, and one stage-center
/// annotation near the transition.
struct GeneratorSpec {
  std::uint64_t seed = 0;
  int num_trajectories = 10;
  int t_min = 80;
  int t_max = 160;
  int dims = 7;
  std::optional<int> gripper_dim = 6;
  double transition_progress = 0.6;
  double noise_scale = 0.01;

  void validate() const;
};

inline constexpr int kSyntheticFeatureWidth = 16;

/// The frame carrying the planted gripper step: floor(progress * T), at least 2.
int planted_transition_frame(std::size_t T, double progress);

/// Trajectory ids are "syn-0", "syn-1", ...
Dataset generate(const GeneratorSpec& spec);

}  // namespace framesel
