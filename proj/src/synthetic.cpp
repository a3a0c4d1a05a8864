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

#include "framesel/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "framesel/error.hpp"
#include "framesel/importance.hpp"
#include "framesel/numeric.hpp"

namespace framesel {
namespace {

// mt19937_64 is fully specified by the standard; the distributions below are
// written out so the corpus is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

constexpr std::array<const char*, 4> kInstructions = {
    "pick up the cup and place it on the plate",
    "open the drawer and put the block inside",
    "move the can to the left bin",
    "grasp the sponge and release it in the sink",
};

constexpr int kUniformFeatureFrames = 14;
constexpr double kMaxSpeed = 0.02;
constexpr double kFeatureDrift = 0.05;
constexpr double kStageJitter = 0.02;

}  // namespace

void GeneratorSpec::validate() const {
  if (num_trajectories < 0) throw ConfigError("generator: num_trajectories must be nonnegative");
  if (t_min < 2 || t_max < t_min) throw ConfigError("generator: need 2 <= t_min <= t_max");
  if (dims < 1) throw ConfigError("generator: dims must be positive");
  if (gripper_dim && (*gripper_dim < 0 || *gripper_dim >= dims)) {
    throw ConfigError("generator: gripper_dim outside [0, dims)");
  }
  if (!(transition_progress > 0.0 && transition_progress < 1.0)) {
    throw ConfigError("generator: transition_progress must lie strictly inside (0, 1)");
  }
  if (!(noise_scale >= 0.0)) throw ConfigError("generator: noise_scale must be nonnegative");
}

int planted_transition_frame(std::size_t T, double progress) {
  const auto t = floor_count(progress * static_cast<double>(T));
  return static_cast<int>(std::clamp<std::int64_t>(t, 2, static_cast<std::int64_t>(T)));
}

Dataset generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Dataset out;
  out.name = "synthetic-" + std::to_string(spec.seed);
  const auto D = static_cast<std::size_t>(spec.dims);
  const std::size_t step_dim = static_cast<std::size_t>(spec.gripper_dim.value_or(spec.dims - 1));

  for (int n = 0; n < spec.num_trajectories; ++n) {
    Trajectory traj;
    traj.id = "syn-" + std::to_string(n);
    traj.instruction = kInstructions[rng.below(kInstructions.size())];
    const std::size_t T =
        static_cast<std::size_t>(spec.t_min) + rng.below(static_cast<std::uint64_t>(spec.t_max - spec.t_min + 1));
    const int tr = planted_transition_frame(T, spec.transition_progress);

    traj.actions = ActionMatrix(T, D);
    for (std::size_t j = 0; j < D; ++j) {
      if (j == step_dim) {
        for (std::size_t t = 1; t <= T; ++t) traj.actions(t - 1, j) = static_cast<int>(t) >= tr ? 1.0 : 0.0;
        continue;
      }
      const double x0 = rng.uniform(-1.0, 1.0);
      const double v_before = rng.uniform(-kMaxSpeed, kMaxSpeed);
      const double v_after = rng.uniform(-kMaxSpeed, kMaxSpeed);
      const double at_switch = x0 + v_before * (tr - 2);
      for (std::size_t t = 1; t <= T; ++t) {
        const int ti = static_cast<int>(t);
        const double pos = ti < tr ? x0 + v_before * (ti - 1) : at_switch + v_after * (ti - tr + 1);
        traj.actions(t - 1, j) = pos;
      }
    }
    if (spec.noise_scale > 0.0) {
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < D; ++j) {
          if (j != step_dim) traj.actions(t, j) += spec.noise_scale * rng.normal();
        }
      }
    }
    if (spec.gripper_dim) traj.gripper_dims = {*spec.gripper_dim};

    std::array<double, kSyntheticFeatureWidth> phase{};
    std::array<double, kSyntheticFeatureWidth> jump{};
    for (int f = 0; f < kSyntheticFeatureWidth; ++f) {
      phase[f] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      jump[f] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    std::vector<int> frames = uniform_sample_frames(T, kUniformFeatureFrames);
    frames.push_back(tr - 1);
    frames.push_back(tr);
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
    std::vector<VisualFeature> feats;
    for (int t : frames) {
      VisualFeature vf;
      vf.frame = t;
      vf.vec.resize(kSyntheticFeatureWidth);
      for (int f = 0; f < kSyntheticFeatureWidth; ++f) {
        vf.vec[f] = kFeatureDrift * std::sin(phase[f] + 0.03 * (f + 1) * t) + (t >= tr ? jump[f] : 0.0);
      }
      feats.push_back(std::move(vf));
    }
    traj.visual_features = std::move(feats);

    const double center = spec.transition_progress + rng.uniform(-kStageJitter, kStageJitter);
    traj.stage_centers = std::vector<double>{std::clamp(center, 0.0, 1.0)};
    out.trajectories.push_back(std::move(traj));
  }
  return out;
}

}  // namespace framesel
