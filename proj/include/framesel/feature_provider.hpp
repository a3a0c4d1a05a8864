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

#include <cstddef>
#include <functional>
#include <vector>

#include "framesel/trajectory.hpp"

namespace framesel {

/// Source of per-frame visual features for trajectories that do not carry
/// them. Implementations may throw to signal an extraction failure; scoring
/// records the failure and continues.
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual std::vector<double> features(const Trajectory& traj, int frame) const = 0;
};

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;  // row-major, width * height
};

/// Built-in pixel-statistic provider: the feature for a frame is the 8x8
/// box-averaged grayscale downsample of the frame image, flattened row-major.
class DownsampleProvider final : public FeatureProvider {
 public:
  using FrameSource = std::function<GrayImage(const Trajectory&, int frame)>;

  static constexpr std::size_t kGrid = 8;

  explicit DownsampleProvider(FrameSource source) : source_(std::move(source)) {}

  std::vector<double> features(const Trajectory& traj, int frame) const override;

 private:
  FrameSource source_;
};

std::vector<double> downsample_8x8(const GrayImage& image);

}  // namespace framesel
