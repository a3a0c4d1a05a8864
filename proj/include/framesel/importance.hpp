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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framesel/feature_provider.hpp"
#include "framesel/progress_prior.hpp"
#include "framesel/trajectory.hpp"

namespace framesel {

enum class TpiMode { gmm, gaussian, none };

const char* to_string(TpiMode mode) noexcept;
TpiMode tpi_mode_from_string(const std::string& s);

struct ImportanceConfig {
  int k = 3;                    // look-ahead window length
  double lambda = 0.1;          // look-ahead variance weight
  double epsilon = 1e-6;        // VAC denominator guard
  double alpha = 0.6;           // action variation weight
  double beta = 0.2;            // visual-action coherence weight
  double gamma = 0.2;           // task progress weight
  double gripper_weight = 1.0;  // strength of the gripper-transition factor
  double vac_clip_percentile = 95.0;
  int vac_max_samples = 16;
  TpiMode tpi_mode = TpiMode::gaussian;
  double sigma_sq = 0.2;  // Gaussian progress prior width

  /// Throws ConfigError on the first out-of-range field.
  void validate() const;
  bool operator==(const ImportanceConfig&) const = default;
};

struct FrameScores {
  std::string trajectory_id;
  std::vector<double> avi_raw;
  std::vector<double> avi_norm;
  std::vector<double> vac_raw;
  std::vector<double> vac_norm;
  std::vector<double> tpi_norm;
  std::vector<double> gripper_signal_norm;
  std::vector<int> gripper_transitions;  // 1-based, ascending
  std::vector<double> combined;
  // Preprocessing problems (missing or failed visual features). Scoring still
  // completes; these surface as cache flags.
  std::vector<std::string> warnings;

  std::size_t length() const noexcept { return combined.size(); }
  bool operator==(const FrameScores&) const = default;
};

/// d(t) = ||a_t - a_{t-1}||_2 for t >= 2, with d(1) = d(2). Index 0 holds t = 1.
std::vector<double> action_change(const ActionMatrix& actions);

/// AVI(t) = d(t) + lambda * MeanVar(a_{t+1 .. min(t+k, T)}), where MeanVar is
/// the mean over dimensions of the population variance and an empty window
/// contributes 0.
std::vector<double> compute_avi(const ActionMatrix& actions, int k, double lambda);

/// n frame indices spread evenly over [1, T], always including 1 and T.
std::vector<int> uniform_sample_frames(std::size_t T, std::size_t n);

struct VacResult {
  std::vector<int> sample_frames;    // frames that had a usable feature
  std::vector<double> knot_values;   // raw VAC at each sample frame
  std::vector<double> interpolated;  // length T, before clipping
  std::vector<double> clipped;       // length T, final raw VAC
  std::optional<std::string> warning;

  bool usable() const noexcept { return !warning.has_value(); }
};

/// Visual-action coherence over sparsely sampled frames, interpolated back to
/// length T and clipped at the configured percentile. Frames come from the
/// trajectory's own visual_features when present, otherwise from `provider`.
/// Never throws for feature problems: the result is all-zero with a warning.
VacResult compute_vac(const Trajectory& traj, const ImportanceConfig& config, const FeatureProvider* provider);

/// exp(-(p_t - 0.5)^2 / sigma_sq) with p_t = (t-1)/(T-1).
std::vector<double> compute_tpi_gaussian(std::size_t T, double sigma_sq);

/// (x - min) / (max - min); a constant input maps to 0.5 everywhere.
std::vector<double> minmax_normalize(std::span<const double> scores);

struct GripperSignal {
  std::vector<double> signal;  // normalized, length T
  std::vector<int> transitions;
};

/// Largest absolute per-step change across the gripper dimensions, min-max
/// normalized. Transitions are frames whose change exceeds half the largest
/// per-dimension range (floored at 1e-6). Without gripper dimensions the
/// signal is avi_norm and there are no transitions.
GripperSignal gripper_signal(const ActionMatrix& actions, std::span<const int> gripper_dims,
                             std::span<const double> avi_norm);

/// I(t) = (alpha*AVI + beta*VAC + gamma*TPI) * (1 + gripper_weight * G(t)).
std::vector<double> combine_importance(std::span<const double> avi_norm, std::span<const double> vac_norm,
                                       std::span<const double> tpi_norm, std::span<const double> gripper_signal_norm,
                                       const ImportanceConfig& config);

/// Full per-trajectory scoring. `prior` is required when tpi_mode is gmm and
/// ignored otherwise; `provider` may be null.
FrameScores score_trajectory(const Trajectory& traj, const ImportanceConfig& config, const GmmPrior* prior,
                             const FeatureProvider* provider);

}  // namespace framesel
