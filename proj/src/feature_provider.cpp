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

#include "framesel/feature_provider.hpp"

#include "framesel/error.hpp"

namespace framesel {

std::vector<double> downsample_8x8(const GrayImage& image) {
  constexpr std::size_t G = DownsampleProvider::kGrid;
  if (image.width < G || image.height < G || image.pixels.size() != image.width * image.height) {
    throw DataError("frame image must be at least 8x8 with width*height pixels");
  }
  std::vector<double> out(G * G, 0.0);
  for (std::size_t gy = 0; gy < G; ++gy) {
    const std::size_t y0 = gy * image.height / G;
    const std::size_t y1 = (gy + 1) * image.height / G;
    for (std::size_t gx = 0; gx < G; ++gx) {
      const std::size_t x0 = gx * image.width / G;
      const std::size_t x1 = (gx + 1) * image.width / G;
      double sum = 0.0;
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = x0; x < x1; ++x) sum += image.pixels[y * image.width + x];
      }
      out[gy * G + gx] = sum / static_cast<double>((y1 - y0) * (x1 - x0));
    }
  }
  return out;
}

std::vector<double> DownsampleProvider::features(const Trajectory& traj, int frame) const {
  return downsample_8x8(source_(traj, frame));
}

}  // namespace framesel
